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

#ifndef LQDEC_TENSOR_HPP
#define LQDEC_TENSOR_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace lqdec {

/// Row-major matrix of 32-bit floats. Every entry is finite.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  /// Zero-filled rows x cols matrix.
  DenseMatrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of `data`; throws ArgumentError if the length is not
  /// rows * cols or an entry is NaN/inf.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<float> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const float> data() const noexcept { return data_; }
  std::span<float> mutable_data() noexcept { return data_; }

  float operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  float& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }

  std::span<const float> row(std::size_t r) const noexcept {
    return std::span<const float>(data_).subspan(r * cols_, cols_);
  }

  bool same_shape(const DenseMatrix& o) const noexcept {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

  /// Bitwise equality of shape and payload (distinguishes -0.0 from 0.0).
  bool bit_equal(const DenseMatrix& o) const noexcept;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

/// Diagonal of the empirical Fisher information, laid out like the weight
/// matrix it belongs to. Every entry is finite and nonnegative.
class FisherDiag {
 public:
  FisherDiag() = default;
  explicit FisherDiag(DenseMatrix values);

  std::size_t rows() const noexcept { return values_.rows(); }
  std::size_t cols() const noexcept { return values_.cols(); }
  const DenseMatrix& values() const noexcept { return values_; }
  float operator()(std::size_t r, std::size_t c) const noexcept { return values_(r, c); }

 private:
  DenseMatrix values_;
};

/// Throws ArgumentError unless every entry is finite.
void require_finite(std::span<const float> values, const char* what);

}  // namespace lqdec

#endif  // LQDEC_TENSOR_HPP
