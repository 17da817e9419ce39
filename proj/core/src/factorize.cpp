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

#include "lqdec/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "lqdec/error.hpp"

namespace lqdec {
namespace {

using RowMajorF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMajorD = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Svd {
  Eigen::MatrixXd u;
  Eigen::VectorXd s;
  Eigen::MatrixXd v;
};

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

Svd exact_svd(const Eigen::MatrixXd& a, std::size_t rank) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto r = static_cast<Eigen::Index>(rank);
  return {svd.matrixU().leftCols(r), svd.singularValues().head(r), svd.matrixV().leftCols(r)};
}

Svd randomized_svd(const Eigen::MatrixXd& a, std::size_t rank, const SvdOptions& opts) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  const Eigen::Index l =
      std::min<Eigen::Index>(static_cast<Eigen::Index>(rank + opts.oversampling), std::min(m, n));

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd sketch(n, l);
  for (Eigen::Index j = 0; j < l; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) sketch(i, j) = normal(rng);
  }

  Eigen::MatrixXd q = orthonormalize(a * sketch);
  for (std::size_t it = 0; it < opts.power_iterations; ++it) {
    Eigen::MatrixXd z = orthonormalize(a.transpose() * q);
    q = orthonormalize(a * z);
  }
  Eigen::MatrixXd b = q.transpose() * a;  // l x n
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto r = static_cast<Eigen::Index>(rank);
  return {q * svd.matrixU().leftCols(r), svd.singularValues().head(r), svd.matrixV().leftCols(r)};
}

Svd truncated(const Eigen::MatrixXd& a, std::size_t rank, const SvdOptions& opts) {
  const auto limit = static_cast<std::size_t>(std::min(a.rows(), a.cols()));
  if (rank < 1 || rank > limit) {
    throw ArgumentError("rank " + std::to_string(rank) + " is outside [1, " + std::to_string(limit) + "] for a " +
                        std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " matrix");
  }
  if (!a.allFinite()) throw NumericalError("factorize: input has non-finite entries");
  Svd out = opts.method == SvdMethod::exact ? exact_svd(a, rank) : randomized_svd(a, rank, opts);
  if (!out.u.allFinite() || !out.v.allFinite() || !out.s.allFinite()) {
    throw NumericalError("factorize: SVD produced non-finite values");
  }
  return out;
}

LowRankFactors split(const Svd& svd, const Eigen::VectorXd* row_unscale, const Eigen::VectorXd* col_unscale) {
  const Eigen::VectorXd root = svd.s.cwiseSqrt();
  Eigen::MatrixXd left = svd.u * root.asDiagonal();
  Eigen::MatrixXd right = root.asDiagonal() * svd.v.transpose();
  if (row_unscale != nullptr) left = row_unscale->asDiagonal() * left;
  if (col_unscale != nullptr) right = right * col_unscale->asDiagonal();
  return {from_eigen(left), from_eigen(right)};
}

void check_fisher_shape(const Eigen::MatrixXd& a, const FisherDiag& f) {
  if (static_cast<Eigen::Index>(f.rows()) != a.rows() || static_cast<Eigen::Index>(f.cols()) != a.cols()) {
    throw ArgumentError("Fisher diagonal is " + std::to_string(f.rows()) + "x" + std::to_string(f.cols()) +
                        " but the matrix is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

}  // namespace

Eigen::MatrixXd LowRankFactors::product() const { return to_eigen(left) * to_eigen(right); }

std::string_view to_string(SvdMethod m) noexcept { return m == SvdMethod::exact ? "exact" : "randomized"; }

SvdMethod parse_svd_method(std::string_view text) {
  if (text == "exact") return SvdMethod::exact;
  if (text == "randomized") return SvdMethod::randomized;
  throw ArgumentError("unknown SVD method \"" + std::string(text) + "\" (expected exact or randomized)");
}

Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
  Eigen::Map<const RowMajorF> view(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                                   static_cast<Eigen::Index>(m.cols()));
  return view.cast<double>();
}

DenseMatrix from_eigen(const Eigen::MatrixXd& m) {
  DenseMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  Eigen::Map<RowMajorF> view(out.mutable_data().data(), m.rows(), m.cols());
  view = m.cast<float>();
  require_finite(out.data(), "factor");
  return out;
}

LowRankFactors svd_truncated(const Eigen::MatrixXd& a, std::size_t rank, const SvdOptions& opts) {
  return split(truncated(a, rank, opts), nullptr, nullptr);
}

LowRankFactors svd_truncated(const DenseMatrix& a, std::size_t rank, const SvdOptions& opts) {
  return svd_truncated(to_eigen(a), rank, opts);
}

WeightScalers fisher_scalers(const FisherDiag& f) {
  const std::size_t d = f.rows();
  const std::size_t k = f.cols();
  WeightScalers s{std::vector<double>(d, 0.0), std::vector<double>(k, 0.0)};
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double v = f(i, j);
      if (v < 0.0) throw ArgumentError("Fisher diagonal has a negative entry");
      const double root = std::sqrt(v);
      s.row[i] += root;
      s.col[j] += root;
    }
  }
  for (auto& v : s.row) v /= static_cast<double>(k);
  for (auto& v : s.col) v /= static_cast<double>(d);

  const double row_max = s.row.empty() ? 0.0 : *std::max_element(s.row.begin(), s.row.end());
  const double col_max = s.col.empty() ? 0.0 : *std::max_element(s.col.begin(), s.col.end());
  if (row_max == 0.0 || col_max == 0.0) {
    std::fill(s.row.begin(), s.row.end(), 1.0);
    std::fill(s.col.begin(), s.col.end(), 1.0);
    return s;
  }
  const double row_floor = 1e-8 * row_max;
  const double col_floor = 1e-8 * col_max;
  for (auto& v : s.row) v = std::max(v, row_floor);
  for (auto& v : s.col) v = std::max(v, col_floor);
  return s;
}

LowRankFactors factorize(const Eigen::MatrixXd& a, const FisherDiag* fisher, std::size_t rank,
                         const SvdOptions& opts) {
  if (fisher == nullptr) return svd_truncated(a, rank, opts);
  check_fisher_shape(a, *fisher);
  const WeightScalers sc = fisher_scalers(*fisher);
  const Eigen::Map<const Eigen::VectorXd> row(sc.row.data(), static_cast<Eigen::Index>(sc.row.size()));
  const Eigen::Map<const Eigen::VectorXd> col(sc.col.data(), static_cast<Eigen::Index>(sc.col.size()));
  const Eigen::MatrixXd scaled = row.asDiagonal() * a * col.asDiagonal();
  const Eigen::VectorXd row_inv = row.cwiseInverse();
  const Eigen::VectorXd col_inv = col.cwiseInverse();
  return split(truncated(scaled, rank, opts), &row_inv, &col_inv);
}

LowRankFactors factorize(const DenseMatrix& a, const FisherDiag* fisher, std::size_t rank, const SvdOptions& opts) {
  return factorize(to_eigen(a), fisher, rank, opts);
}

double weighted_error(const DenseMatrix& w, const DenseMatrix& q_dequant, const Eigen::MatrixXd& low_rank,
                      const FisherDiag* fisher) {
  if (!w.same_shape(q_dequant) || low_rank.rows() != static_cast<Eigen::Index>(w.rows()) ||
      low_rank.cols() != static_cast<Eigen::Index>(w.cols())) {
    throw ArgumentError("weighted_error: shape mismatch");
  }
  if (fisher != nullptr && (fisher->rows() != w.rows() || fisher->cols() != w.cols())) {
    throw ArgumentError("weighted_error: Fisher shape mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i) {
    for (std::size_t j = 0; j < w.cols(); ++j) {
      const double r = static_cast<double>(w(i, j)) -
                       (static_cast<double>(q_dequant(i, j)) +
                        low_rank(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      acc += fisher != nullptr ? static_cast<double>((*fisher)(i, j)) * r * r : r * r;
    }
  }
  return std::sqrt(acc);
}

double weighted_error(const DenseMatrix& w, const DenseMatrix& q_dequant, const LowRankFactors& factors,
                      const FisherDiag* fisher) {
  if (factors.left.rows() != w.rows() || factors.right.cols() != w.cols() ||
      factors.left.cols() != factors.right.rows()) {
    throw ArgumentError("weighted_error: factor shapes do not match the matrix");
  }
  return weighted_error(w, q_dequant, factors.product(), fisher);
}

}  // namespace lqdec
