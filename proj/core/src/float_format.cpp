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

#include "lqdec/float_format.hpp"

#include <bit>
#include <cmath>
#include <limits>

namespace lqdec {
namespace {

// Rounds to a binary format with `mantissa_bits` explicit fraction bits and
// minimum normal exponent `min_exp` (as returned by ilogb). Ties to even.
double round_binary(double x, int mantissa_bits, int min_exp) {
  if (x == 0.0) return x;
  int e = std::ilogb(x);
  if (e < min_exp) e = min_exp;  // subnormal range shares the smallest quantum
  const double quantum = std::ldexp(1.0, e - mantissa_bits);
  return std::nearbyint(x / quantum) * quantum;
}

}  // namespace

float round_to_format(float x, FloatFormat fmt) noexcept {
  switch (fmt) {
    case FloatFormat::fp32:
      return x;
    case FloatFormat::fp16: {
      double r = round_binary(x, 10, -14);
      if (r > kHalfMax) r = kHalfMax;
      if (r < -kHalfMax) r = -kHalfMax;
      return static_cast<float>(r);
    }
    case FloatFormat::bf16: {
      constexpr double kBfMax = 3.3895313892515355e38;  // (2 - 2^-7) * 2^127
      double r = round_binary(x, 7, -126);
      if (r > kBfMax) r = kBfMax;
      if (r < -kBfMax) r = -kBfMax;
      return static_cast<float>(r);
    }
  }
  return x;
}

std::vector<float> cast_float(std::span<const float> x, FloatFormat fmt) {
  std::vector<float> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = round_to_format(x[i], fmt);
  return out;
}

std::uint16_t to_half_bits(float v) noexcept {
  const std::uint32_t f = std::bit_cast<std::uint32_t>(v);
  const std::uint16_t sign = static_cast<std::uint16_t>((f >> 16) & 0x8000u);
  const float a = std::fabs(v);
  if (a == 0.0f) return sign;
  int e = std::ilogb(a);
  if (e < -14) {
    // subnormal: value = m * 2^-24
    auto m = static_cast<std::uint16_t>(std::ldexp(a, 24));
    return static_cast<std::uint16_t>(sign | m);
  }
  const auto m = static_cast<std::uint16_t>(std::ldexp(a, 10 - e) - 1024.0);
  return static_cast<std::uint16_t>(sign | ((e + 15) << 10) | m);
}

float from_half_bits(std::uint16_t bits) noexcept {
  const bool neg = (bits & 0x8000u) != 0;
  const int exp = (bits >> 10) & 0x1f;
  const int mant = bits & 0x3ff;
  double v;
  if (exp == 0) {
    v = std::ldexp(static_cast<double>(mant), -24);
  } else if (exp == 31) {
    v = mant == 0 ? std::numeric_limits<double>::infinity() : std::numeric_limits<double>::quiet_NaN();
  } else {
    v = std::ldexp(1024.0 + mant, exp - 25);
  }
  return static_cast<float>(neg ? -v : v);
}

std::uint16_t to_bfloat_bits(float v) noexcept {
  return static_cast<std::uint16_t>(std::bit_cast<std::uint32_t>(v) >> 16);
}

float from_bfloat_bits(std::uint16_t bits) noexcept {
  return std::bit_cast<float>(static_cast<std::uint32_t>(bits) << 16);
}

}  // namespace lqdec
