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

#ifndef LQDEC_BITPACK_HPP
#define LQDEC_BITPACK_HPP

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lqdec/error.hpp"

namespace lqdec {

/// Bytes needed for `count` codes of `bits` bits, padded to a byte boundary.
constexpr std::size_t packed_size(std::size_t count, int bits) noexcept {
  return (count * static_cast<std::size_t>(bits) + 7) / 8;
}

/// Packs codes LSB-first into a contiguous bitstream; the tail is zero-padded
/// to a byte boundary. Throws ArgumentError if a code does not fit in `bits`.
template <std::unsigned_integral T>
std::vector<std::uint8_t> pack_bits(std::span<const T> codes, int bits) {
  if (bits < 1 || bits > 8) throw ArgumentError("pack_bits: bits must be in [1, 8]");
  const std::uint32_t limit = 1u << bits;
  std::vector<std::uint8_t> out(packed_size(codes.size(), bits), 0);
  std::size_t bitpos = 0;
  for (std::size_t i = 0; i < codes.size(); ++i, bitpos += static_cast<std::size_t>(bits)) {
    if (codes[i] >= limit) {
      throw ArgumentError("pack_bits: code " + std::to_string(codes[i]) + " at index " + std::to_string(i) +
                          " does not fit in " + std::to_string(bits) + " bits");
    }
    const std::uint32_t v = static_cast<std::uint32_t>(codes[i]) << (bitpos & 7);
    out[bitpos >> 3] |= static_cast<std::uint8_t>(v);
    if ((bitpos & 7) + static_cast<std::size_t>(bits) > 8) {
      out[(bitpos >> 3) + 1] |= static_cast<std::uint8_t>(v >> 8);
    }
  }
  return out;
}

/// Inverse of pack_bits. Throws FormatError if `bytes` is not exactly
/// packed_size(count, bits) long.
std::vector<std::uint8_t> unpack_bits(std::span<const std::uint8_t> bytes, int bits, std::size_t count);

/// Reads the code at `index` from a packed stream without unpacking it all.
inline std::uint32_t read_packed(std::span<const std::uint8_t> bytes, int bits, std::size_t index) noexcept {
  const std::size_t bitpos = index * static_cast<std::size_t>(bits);
  const std::size_t byte = bitpos >> 3;
  const unsigned shift = bitpos & 7;
  std::uint32_t v = bytes[byte];
  if (shift + static_cast<unsigned>(bits) > 8) v |= static_cast<std::uint32_t>(bytes[byte + 1]) << 8;
  return (v >> shift) & ((1u << bits) - 1u);
}

}  // namespace lqdec

#endif  // LQDEC_BITPACK_HPP
