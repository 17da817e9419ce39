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

#ifndef LQDEC_REPORT_HPP
#define LQDEC_REPORT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lqdec/mckp.hpp"
#include "lqdec/presets.hpp"
#include "lqdec/rational.hpp"
#include "lqdec/sweep.hpp"

namespace lqdec {

enum class LoraFormat { fp16, nf8 };

LoraFormat parse_lora_format(std::string_view text);
std::string_view to_string(LoraFormat f) noexcept;

/// Storage per LoRA parameter: 16 for fp16; NF-8 is the NF4 double
/// quantization scheme with 8-bit first-level codes, (8, 8, fp32, 64, 256).
Rational lora_bits_per_param(LoraFormat f);

/// Storage breakdown of quantized matrices plus their rank-r LoRA factors.
struct StorageReport {
  std::uint64_t quantized_params = 0;
  std::uint64_t lora_params = 0;
  double quantized_bits = 0.0;
  double lora_bits = 0.0;
  std::size_t rank = 0;
  double lora_bits_per_param = 0.0;

  /// (quantized + LoRA bits) / quantized parameter count.
  double effective_bits() const noexcept;
  /// Quantized bits / quantized parameter count.
  double quantized_bits_per_param() const noexcept;
  double quantized_bytes() const noexcept { return quantized_bits / 8.0; }
  double lora_bytes() const noexcept { return lora_bits / 8.0; }
};

/// `bits_per_param[i]` is the quantized storage rate of `shapes[i]`.
StorageReport storage_report(std::span<const MatrixShape> shapes, std::span<const double> bits_per_param,
                             std::size_t lora_rank, double lora_bits);

/// Report for an allocation; the table must carry matrix shapes.
StorageReport storage_report(const AllocSolution& solution, const SweepTable& table, std::size_t lora_rank,
                             double lora_bits);

/// Aligned plain-text rendering of a report.
std::string format_report(const StorageReport& r);

}  // namespace lqdec

#endif  // LQDEC_REPORT_HPP
