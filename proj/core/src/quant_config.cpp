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

#include "lqdec/quant_config.hpp"

#include <charconv>
#include <vector>

#include "lqdec/error.hpp"

namespace lqdec {

int bit_width(FloatFormat fmt) noexcept {
  switch (fmt) {
    case FloatFormat::fp32:
      return 32;
    case FloatFormat::fp16:
    case FloatFormat::bf16:
      return 16;
  }
  return 32;
}

std::string_view to_string(FloatFormat fmt) noexcept {
  switch (fmt) {
    case FloatFormat::fp32:
      return "fp32";
    case FloatFormat::fp16:
      return "fp16";
    case FloatFormat::bf16:
      return "bf16";
  }
  return "fp32";
}

FloatFormat parse_float_format(std::string_view text) {
  if (text == "fp32") return FloatFormat::fp32;
  if (text == "fp16") return FloatFormat::fp16;
  if (text == "bf16") return FloatFormat::bf16;
  throw ArgumentError("unknown float format \"" + std::string(text) + "\" (expected fp32, fp16 or bf16)");
}

bool is_supported_bits(int bits) noexcept {
  return bits == 2 || bits == 3 || bits == 4 || bits == 8;
}

void QuantConfig::validate() const {
  if (!is_supported_bits(first_bits)) {
    throw ArgumentError("first-level bits must be one of 2,3,4,8, got " + std::to_string(first_bits));
  }
  if (!is_supported_bits(second_bits)) {
    throw ArgumentError("second-level bits must be one of 2,3,4,8, got " + std::to_string(second_bits));
  }
  if (static_cast<std::uint8_t>(scale_format) > 2) throw ArgumentError("invalid scale format");
  if (block_size < 1) throw ArgumentError("block size must be >= 1");
  if (group_size < 1) throw ArgumentError("group size must be >= 1");
}

std::string QuantConfig::to_string() const {
  return std::to_string(first_bits) + "," + std::to_string(second_bits) + "," +
         std::string(lqdec::to_string(scale_format)) + "," + std::to_string(block_size) + "," +
         std::to_string(group_size);
}

namespace {

template <typename T>
T parse_int(std::string_view s, std::string_view full) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw ArgumentError("bad integer \"" + std::string(s) + "\" in config \"" + std::string(full) + "\"");
  }
  return v;
}

}  // namespace

QuantConfig parse_quant_config(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    parts.push_back(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (parts.size() != 5) {
    throw ArgumentError("config \"" + std::string(text) + "\" must have the form b0,b1,b2,B0,B1");
  }
  QuantConfig cfg;
  cfg.first_bits = parse_int<int>(parts[0], text);
  cfg.second_bits = parse_int<int>(parts[1], text);
  cfg.scale_format = parse_float_format(parts[2]);
  cfg.block_size = parse_int<std::uint32_t>(parts[3], text);
  cfg.group_size = parse_int<std::uint32_t>(parts[4], text);
  cfg.validate();
  return cfg;
}

Rational storage_bits_per_param(const QuantConfig& cfg) {
  cfg.validate();
  const std::int64_t b0 = cfg.block_size;
  const std::int64_t b1 = cfg.group_size;
  return Rational(cfg.first_bits) + Rational(cfg.second_bits, b0) +
         Rational(bit_width(cfg.scale_format), b0 * b1);
}

}  // namespace lqdec
