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

#include "lqdec/bitpack.hpp"

namespace lqdec {

std::vector<std::uint8_t> unpack_bits(std::span<const std::uint8_t> bytes, int bits, std::size_t count) {
  if (bits < 1 || bits > 8) throw ArgumentError("unpack_bits: bits must be in [1, 8]");
  if (bytes.size() != packed_size(count, bits)) {
    throw FormatError("unpack_bits: " + std::to_string(bytes.size()) + " bytes cannot hold exactly " +
                      std::to_string(count) + " codes of " + std::to_string(bits) + " bits");
  }
  std::vector<std::uint8_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<std::uint8_t>(read_packed(bytes, bits, i));
  return out;
}

}  // namespace lqdec
