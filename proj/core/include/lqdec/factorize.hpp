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

#ifndef LQDEC_FACTORIZE_HPP
#define LQDEC_FACTORIZE_HPP

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lqdec/tensor.hpp"

namespace lqdec {

/// Rank-r factors with left() d x r and right() r x k.
struct LowRankFactors {
  DenseMatrix left;
  DenseMatrix right;

  std::size_t rank() const noexcept { return left.cols(); }
  std::size_t rows() const noexcept { return left.rows(); }
  std::size_t cols() const noexcept { return right.cols(); }

  /// left * right, evaluated in double precision.
  Eigen::MatrixXd product() const;
};

enum class SvdMethod { exact, randomized };

std::string_view to_string(SvdMethod m) noexcept;
SvdMethod parse_svd_method(std::string_view text);

struct SvdOptions {
  SvdMethod method = SvdMethod::randomized;
  std::uint64_t seed = 0;
  /// Extra sketch columns beyond the target rank (randomized only).
  std::size_t oversampling = 8;
  /// Subspace iterations, each re-orthonormalizing both sides (randomized only).
  std::size_t power_iterations = 2;
};

/// Truncated SVD split as left = U sqrt(S), right = sqrt(S) V^T.
/// Throws ArgumentError unless 1 <= rank <= min(rows, cols).
LowRankFactors svd_truncated(const Eigen::MatrixXd& a, std::size_t rank, const SvdOptions& opts = {});
LowRankFactors svd_truncated(const DenseMatrix& a, std::size_t rank, const SvdOptions& opts = {});

/// Diagonal scalings built from row and column means of sqrt(F).
struct WeightScalers {
  std::vector<double> row;
  std::vector<double> col;
};

/// Row/column means of sqrt(F). A mean below 1e-8 times the largest mean on
/// the same axis is raised to that floor; an all-zero F yields all ones.
WeightScalers fisher_scalers(const FisherDiag& f);

/// Rank-r factorization of `a`. With a Fisher diagonal the SVD runs on
/// D_row * a * D_col and the factors are unscaled afterwards; without one
/// this is svd_truncated.
LowRankFactors factorize(const Eigen::MatrixXd& a, const FisherDiag* fisher, std::size_t rank,
                         const SvdOptions& opts = {});
LowRankFactors factorize(const DenseMatrix& a, const FisherDiag* fisher, std::size_t rank,
                         const SvdOptions& opts = {});

/// ||sqrt(F) .* (w - (q + left * right))||_F, or the plain Frobenius norm
/// when `fisher` is null. Accumulates in double.
double weighted_error(const DenseMatrix& w, const DenseMatrix& q_dequant, const LowRankFactors& factors,
                      const FisherDiag* fisher);

/// Same objective with an already-formed low-rank product.
double weighted_error(const DenseMatrix& w, const DenseMatrix& q_dequant, const Eigen::MatrixXd& low_rank,
                      const FisherDiag* fisher);

/// Row-major float matrix <-> column-major double Eigen matrix.
Eigen::MatrixXd to_eigen(const DenseMatrix& m);
DenseMatrix from_eigen(const Eigen::MatrixXd& m);

}  // namespace lqdec

#endif  // LQDEC_FACTORIZE_HPP
