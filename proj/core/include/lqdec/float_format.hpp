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

#ifndef LQDEC_FLOAT_FORMAT_HPP
#define LQDEC_FLOAT_FORMAT_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "lqdec/quant_config.hpp"

namespace lqdec {

/// Rounds `x` to the nearest value representable in `fmt` (ties to even) and
/// returns it widened back to float. fp16 saturates at +-65504; bf16
/// saturates at its largest finite value.
float round_to_format(float x, FloatFormat fmt) noexcept;

std::vector<float> cast_float(std::span<const float> x, FloatFormat fmt);

/// Bit patterns of values that are already representable in the 16-bit
/// formats (i.e. outputs of round_to_format).
std::uint16_t to_half_bits(float representable) noexcept;
float from_half_bits(std::uint16_t bits) noexcept;
std::uint16_t to_bfloat_bits(float representable) noexcept;
float from_bfloat_bits(std::uint16_t bits) noexcept;

inline constexpr float kHalfMax = 65504.0f;

}  // namespace lqdec

#endif  // LQDEC_FLOAT_FORMAT_HPP
