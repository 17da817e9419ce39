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

#include "lqdec/matmul.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "lqdec/error.hpp"

namespace lqdec {
namespace {

void check_shapes(const DenseMatrix& x, std::size_t d, std::size_t k, const LowRankFactors* factors) {
  if (x.cols() != d) {
    throw ArgumentError("matmul: x has " + std::to_string(x.cols()) + " columns but the weight has " +
                        std::to_string(d) + " rows");
  }
  if (factors != nullptr) {
    if (factors->left.rows() != d || factors->right.cols() != k || factors->left.cols() != factors->right.rows()) {
      throw ArgumentError("matmul: low-rank factors do not match a " + std::to_string(d) + "x" + std::to_string(k) +
                          " weight");
    }
  }
}

void add_low_rank(const DenseMatrix& x, const LowRankFactors& f, std::vector<double>& out) {
  const std::size_t n = x.rows();
  const std::size_t d = f.left.rows();
  const std::size_t r = f.rank();
  const std::size_t k = f.right.cols();
  std::vector<double> t(n * r, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t i = 0; i < d; ++i) {
      const double xa = x(a, i);
      if (xa == 0.0) continue;
      const auto lrow = f.left.row(i);
      for (std::size_t c = 0; c < r; ++c) t[a * r + c] += xa * lrow[c];
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t c = 0; c < r; ++c) {
      const double ta = t[a * r + c];
      const auto rrow = f.right.row(c);
      double* o = out.data() + a * k;
      for (std::size_t j = 0; j < k; ++j) o[j] += ta * rrow[j];
    }
  }
}

DenseMatrix to_float(std::size_t n, std::size_t k, const std::vector<double>& acc) {
  std::vector<float> data(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) data[i] = static_cast<float>(acc[i]);
  return DenseMatrix(n, k, std::move(data));
}

}  // namespace

DenseMatrix matmul_dequant(const DenseMatrix& x, const QuantizedMatrix& q, const LowRankFactors* factors) {
  const std::size_t n = x.rows();
  const std::size_t d = q.rows();
  const std::size_t k = q.cols();
  check_shapes(x, d, k, factors);
  std::vector<double> acc(n * k, 0.0);
  std::vector<float> wrow(k);
  for (std::size_t i = 0; i < d; ++i) {
    dequantize_rows(q, i, wrow);
    for (std::size_t a = 0; a < n; ++a) {
      const double xa = x(a, i);
      if (xa == 0.0) continue;
      double* o = acc.data() + a * k;
      for (std::size_t j = 0; j < k; ++j) o[j] += xa * wrow[j];
    }
  }
  if (factors != nullptr) add_low_rank(x, *factors, acc);
  return to_float(n, k, acc);
}

DenseMatrix matmul_dense(const DenseMatrix& x, const DenseMatrix& w, const LowRankFactors* factors) {
  check_shapes(x, w.rows(), w.cols(), factors);
  Eigen::MatrixXd xe = to_eigen(x);
  Eigen::MatrixXd out = xe * to_eigen(w);
  if (factors != nullptr) out += (xe * to_eigen(factors->left)) * to_eigen(factors->right);
  return from_eigen(out);
}

double relative_frobenius_error(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) throw ArgumentError("relative_frobenius_error: shape mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = static_cast<double>(a.data()[i]) - b.data()[i];
    num += diff * diff;
    den += static_cast<double>(b.data()[i]) * b.data()[i];
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::sqrt(num);
  return std::sqrt(num / den);
}

}  // namespace lqdec
