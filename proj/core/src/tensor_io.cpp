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

#include "lqdec/tensor_io.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>

#include "byte_io.hpp"
#include "lqdec/error.hpp"

namespace lqdec {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0f) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<float> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw ArgumentError("matrix data length " + std::to_string(data_.size()) +
                        " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  require_finite(data_, "matrix");
}

bool DenseMatrix::bit_equal(const DenseMatrix& o) const noexcept {
  if (!same_shape(o)) return false;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (std::bit_cast<std::uint32_t>(data_[i]) != std::bit_cast<std::uint32_t>(o.data_[i])) {
      return false;
    }
  }
  return true;
}

FisherDiag::FisherDiag(DenseMatrix values) : values_(std::move(values)) {
  for (float v : values_.data()) {
    if (!(v >= 0.0f)) throw ArgumentError("Fisher diagonal has a negative entry");
  }
}

void require_finite(std::span<const float> values, const char* what) {
  for (float v : values) {
    if (!std::isfinite(v)) throw ArgumentError(std::string(what) + " has a non-finite entry");
  }
}

std::vector<std::uint8_t> encode_tensor(const DenseMatrix& m) {
  detail::ByteWriter w;
  w.reserve(kTensorHeaderBytes + 4 * m.size());
  w.magic("LQT1");
  w.u16(kTensorVersion);
  w.u8(0);  // dtype f32
  w.u8(0);
  w.u64(m.rows());
  w.u64(m.cols());
  for (float v : m.data()) w.f32(v);
  return std::move(w).take();
}

DenseMatrix decode_tensor(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, "LQT1");
  r.expect_magic("LQT1");
  if (auto v = r.u16(); v != kTensorVersion) {
    throw FormatError("LQT1: unsupported version " + std::to_string(v));
  }
  if (auto dtype = r.u8(); dtype != 0) {
    throw FormatError("LQT1: unsupported dtype " + std::to_string(dtype));
  }
  if (r.u8() != 0) throw FormatError("LQT1: reserved byte must be zero");
  const std::uint64_t rows = r.u64();
  const std::uint64_t cols = r.u64();
  if (rows != 0 && cols > std::numeric_limits<std::uint64_t>::max() / 4 / rows) {
    throw FormatError("LQT1: dimensions overflow");
  }
  const std::uint64_t n = rows * cols;
  if (n * 4 != r.remaining()) {
    if (n * 4 > r.remaining()) throw FormatError("LQT1: truncated payload");
    throw FormatError("LQT1: trailing bytes after payload");
  }
  std::vector<float> data(n);
  for (auto& v : data) v = r.f32();
  try {
    return DenseMatrix(rows, cols, std::move(data));
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("LQT1: ") + e.what());
  }
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ArgumentError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ArgumentError("failed writing " + path.string());
}

void write_tensor(const std::filesystem::path& path, const DenseMatrix& m) {
  write_file_bytes(path, encode_tensor(m));
}

DenseMatrix read_tensor(const std::filesystem::path& path) {
  auto bytes = read_file_bytes(path);
  try {
    return decode_tensor(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_fisher(const std::filesystem::path& path, const FisherDiag& f) {
  write_tensor(path, f.values());
}

FisherDiag read_fisher(const std::filesystem::path& path) {
  auto m = read_tensor(path);
  try {
    return FisherDiag(std::move(m));
  } catch (const ArgumentError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace lqdec
