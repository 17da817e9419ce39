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

#ifndef LQDEC_CONTAINER_HPP
#define LQDEC_CONTAINER_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lqdec/nf_quant.hpp"

namespace lqdec {

// LQQ1 layout, all integers little-endian:
//   "LQQ1" | version u16 = 1 | rows u64 | cols u64 | b0 u8 | b1 u8
//   | b2 u8 (0 = fp32, 1 = fp16, 2 = bf16) | B0 u32 | B1 u32
//   | code stream | scale-code stream | group scales in b2's width.
inline constexpr std::size_t kContainerHeaderBytes = 33;
inline constexpr std::uint16_t kContainerVersion = 1;

struct ContainerBytes {
  std::size_t header = kContainerHeaderBytes;
  std::size_t codes = 0;
  std::size_t scale_codes = 0;
  std::size_t group_scales = 0;

  std::size_t payload() const noexcept { return codes + scale_codes + group_scales; }
  std::size_t total() const noexcept { return header + payload(); }
};

/// Exact byte layout of an LQQ1 file for a rows x cols matrix.
ContainerBytes exact_container_bytes(std::size_t rows, std::size_t cols, const QuantConfig& cfg);

std::vector<std::uint8_t> encode_quantized(const QuantizedMatrix& q);
QuantizedMatrix decode_quantized(std::span<const std::uint8_t> bytes);

void write_quantized(const std::filesystem::path& path, const QuantizedMatrix& q);
QuantizedMatrix read_quantized(const std::filesystem::path& path);

}  // namespace lqdec

#endif  // LQDEC_CONTAINER_HPP
