/*
 * Copyright 2026 The lqdec Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LQDEC_SERIALIZE_HPP
#define LQDEC_SERIALIZE_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "lqdec/lq.hpp"
#include "lqdec/mckp.hpp"
#include "lqdec/presets.hpp"
#include "lqdec/report.hpp"
#include "lqdec/sweep.hpp"

namespace lqdec {

// JSON documents. Readers throw FormatError on malformed input.

/// {sizes, configs: [[b0,b1,"b2",B0,B1]...], errors, storage_bits,
///  fisher_weighted, rank, seed, shapes, completed}
std::string to_json(const SweepTable& t);
SweepTable sweep_table_from_json(std::string_view text);

/// {assignment, total_error, total_storage_bits, budget_bits, optimal, nodes}
std::string to_json(const AllocSolution& s);
AllocSolution alloc_solution_from_json(std::string_view text);

/// Accepts {"configs": [...]} or a bare array; b2 as a name or tag 0/1/2.
ConfigGrid config_grid_from_json(std::string_view text);
std::string to_json(const ConfigGrid& g);

std::string to_json(const ModelPreset& p);
ModelPreset model_preset_from_json(std::string_view text);

std::string to_json(const StorageReport& r);

/// Error trace, chosen iteration and stop reason of a decomposition.
std::string trace_json(const LqResult& r, const LqOptions& opts);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace lqdec

#endif  // LQDEC_SERIALIZE_HPP
