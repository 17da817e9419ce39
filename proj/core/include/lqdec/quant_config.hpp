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

#ifndef LQDEC_QUANT_CONFIG_HPP
#define LQDEC_QUANT_CONFIG_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "lqdec/rational.hpp"

namespace lqdec {

/// Storage format of the second-level group scales.
enum class FloatFormat : std::uint8_t { fp32 = 0, fp16 = 1, bf16 = 2 };

int bit_width(FloatFormat fmt) noexcept;
std::string_view to_string(FloatFormat fmt) noexcept;
FloatFormat parse_float_format(std::string_view text);

/// One NormalFloat double-quantization scheme.
///
///   first_bits   NF code width of each weight
///   second_bits  unsigned integer width of each block absmax
///   scale_format float format of each group's absmax
///   block_size   weights sharing one absmax
///   group_size   absmax values sharing one group scale
struct QuantConfig {
  int first_bits = 4;
  int second_bits = 8;
  FloatFormat scale_format = FloatFormat::fp32;
  std::uint32_t block_size = 64;
  std::uint32_t group_size = 256;

  friend bool operator==(const QuantConfig&, const QuantConfig&) = default;

  /// Throws ArgumentError when a field is outside the supported range.
  void validate() const;

  /// "b0,b1,b2,B0,B1", e.g. "4,8,fp32,64,256".
  std::string to_string() const;
};

bool is_supported_bits(int bits) noexcept;

QuantConfig parse_quant_config(std::string_view text);

/// The stock NF4 double-quantization scheme, (4, 8, fp32, 64, 256).
inline constexpr QuantConfig kNf4Config{4, 8, FloatFormat::fp32, 64, 256};

/// Amortized bits per parameter: b0 + b1/B0 + width(b2)/(B0*B1), exact.
Rational storage_bits_per_param(const QuantConfig& cfg);

}  // namespace lqdec

#endif  // LQDEC_QUANT_CONFIG_HPP
