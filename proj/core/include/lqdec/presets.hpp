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

#ifndef LQDEC_PRESETS_HPP
#define LQDEC_PRESETS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lqdec {

struct MatrixShape {
  std::string label;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::uint64_t params() const noexcept { return static_cast<std::uint64_t>(rows) * cols; }
};

/// Linear-layer shapes of a known model family.
struct ModelPreset {
  std::string name;
  std::vector<MatrixShape> matrices;

  std::uint64_t total_params() const noexcept;
};

/// "llama2-7b-linear" or "llama2-70b-linear"; throws ArgumentError otherwise.
ModelPreset preset(std::string_view name);

std::vector<std::string_view> preset_names();

}  // namespace lqdec

#endif  // LQDEC_PRESETS_HPP
