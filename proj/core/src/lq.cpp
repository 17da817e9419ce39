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

#include "lqdec/lq.hpp"

#include <cmath>
#include <string>

#include "lqdec/error.hpp"

namespace lqdec {
namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t t) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (t + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double weighted_norm(const DenseMatrix& w, const FisherDiag* fisher) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double v = w.data()[i];
    acc += (fisher != nullptr ? static_cast<double>(fisher->values().data()[i]) : 1.0) * v * v;
  }
  return std::sqrt(acc);
}

}  // namespace

std::string_view to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::error_increased:
      return "error-increased";
    case StopReason::max_iters:
      return "max-iters";
    case StopReason::zero_error:
      return "zero-error";
  }
  return "max-iters";
}

std::string_view to_string(LqInit i) noexcept { return i == LqInit::zero ? "zero" : "quantized"; }

LqInit parse_lq_init(std::string_view text) {
  if (text == "zero") return LqInit::zero;
  if (text == "quantized") return LqInit::quantized;
  throw ArgumentError("unknown init \"" + std::string(text) + "\" (expected zero or quantized)");
}

double quantize_only_error(const DenseMatrix& w, const FisherDiag* fisher, const QuantConfig& cfg) {
  const DenseMatrix deq = dequantize(quantize_nf(w, cfg));
  return weighted_error(w, deq, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(w.rows()),
                                                      static_cast<Eigen::Index>(w.cols())),
                        fisher);
}

LqResult lq_decompose(const DenseMatrix& w, const FisherDiag* fisher, const LqOptions& opts) {
  opts.config.validate();
  if (opts.max_iters < 1) throw ArgumentError("lq_decompose: max_iters must be >= 1");
  const std::size_t limit = std::min(w.rows(), w.cols());
  if (opts.rank < 1 || opts.rank > limit) {
    throw ArgumentError("lq_decompose: rank " + std::to_string(opts.rank) + " is outside [1, " +
                        std::to_string(limit) + "]");
  }
  if (fisher != nullptr && (fisher->rows() != w.rows() || fisher->cols() != w.cols())) {
    throw ArgumentError("lq_decompose: Fisher diagonal shape does not match the matrix");
  }

  const Eigen::MatrixXd target = to_eigen(w);
  const double zero_tol = 1e-7 * weighted_norm(w, fisher);

  Eigen::MatrixXd q_dense = Eigen::MatrixXd::Zero(target.rows(), target.cols());
  if (opts.init == LqInit::quantized) q_dense = to_eigen(dequantize(quantize_nf(w, opts.config)));

  LqResult best;
  std::vector<double> trace;
  trace.reserve(opts.max_iters);
  StopReason reason = StopReason::max_iters;

  for (std::size_t t = 0; t < opts.max_iters; ++t) {
    SvdOptions svd = opts.svd;
    svd.seed = mix_seed(opts.svd.seed, t);
    LowRankFactors factors = factorize(target - q_dense, fisher, opts.rank, svd);
    const Eigen::MatrixXd low_rank = factors.product();

    QuantizedMatrix q = quantize_nf(from_eigen(target - low_rank), opts.config);
    const DenseMatrix q_deq = dequantize(q);
    const double err = weighted_error(w, q_deq, low_rank, fisher);
    if (!std::isfinite(err)) throw NumericalError("lq_decompose: error became non-finite");
    trace.push_back(err);

    const bool improved = trace.size() == 1 || err < trace[best.chosen_iteration];
    if (improved) {
      best.q = std::move(q);
      best.factors = std::move(factors);
      best.chosen_iteration = t;
    }
    if (trace.size() > 1 && err > trace[trace.size() - 2]) {
      reason = StopReason::error_increased;
      break;
    }
    if (err <= zero_tol) {
      reason = StopReason::zero_error;
      break;
    }
    q_dense = to_eigen(q_deq);
  }

  best.error_trace = std::move(trace);
  best.reason = reason;
  return best;
}

}  // namespace lqdec
