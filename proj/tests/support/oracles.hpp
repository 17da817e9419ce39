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

// Independent reference computations used by the unit and acceptance tests.
// None of these call the code paths they are used to check.

#ifndef LQDEC_TESTS_ORACLES_HPP
#define LQDEC_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace lqdec::oracle {

/// Phi^-1(p) by bisection on 0.5 * erfc(-x / sqrt 2).
inline double bisect_inverse_cdf(double p) {
  // Upper tail via symmetry on 1 - p.
  if (p > 0.5) return -bisect_inverse_cdf(1.0 - p);
  auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (cdf(mid) < p) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Index of the entry of `levels` closest to x; ties to the lower index.
inline std::size_t nearest_linear(const std::vector<double>& levels, double x) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double d = std::fabs(levels[i] - x);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

/// min over rank-r L of ||diag(r) (a - L) diag(c)||_F via a full Jacobi SVD
/// of the scaled matrix (tail singular values).
inline double two_sided_weighted_optimum(const Eigen::MatrixXd& a, const Eigen::VectorXd& row,
                                         const Eigen::VectorXd& col, std::size_t rank) {
  Eigen::MatrixXd scaled = row.asDiagonal() * a * col.asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
  const auto& s = svd.singularValues();
  double tail = 0.0;
  for (Eigen::Index i = static_cast<Eigen::Index>(rank); i < s.size(); ++i) tail += s(i) * s(i);
  return std::sqrt(tail);
}

/// ||a - best rank-r approximation||_F from a full Jacobi SVD.
inline double truncation_error(const Eigen::MatrixXd& a, std::size_t rank) {
  return two_sided_weighted_optimum(a, Eigen::VectorXd::Ones(a.rows()), Eigen::VectorXd::Ones(a.cols()), rank);
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = n(rng);
  return m;
}

}  // namespace lqdec::oracle

#endif  // LQDEC_TESTS_ORACLES_HPP
