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

#ifndef LQDEC_TENSOR_IO_HPP
#define LQDEC_TENSOR_IO_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lqdec/tensor.hpp"

namespace lqdec {

// LQT1 layout, all integers little-endian:
//   "LQT1" | version u16 = 1 | dtype u8 (0 = f32) | reserved u8 = 0
//   | rows u64 | cols u64 | rows*cols f32 payload, row-major.
inline constexpr std::size_t kTensorHeaderBytes = 24;
inline constexpr std::uint16_t kTensorVersion = 1;

std::vector<std::uint8_t> encode_tensor(const DenseMatrix& m);
DenseMatrix decode_tensor(std::span<const std::uint8_t> bytes);

void write_tensor(const std::filesystem::path& path, const DenseMatrix& m);
DenseMatrix read_tensor(const std::filesystem::path& path);

/// Fisher diagonals share the LQT1 format; reading also checks nonnegativity.
void write_fisher(const std::filesystem::path& path, const FisherDiag& f);
FisherDiag read_fisher(const std::filesystem::path& path);

/// Whole-file helpers shared by the container formats.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace lqdec

#endif  // LQDEC_TENSOR_IO_HPP
