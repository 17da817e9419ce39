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

#ifndef LQDEC_LQ_HPP
#define LQDEC_LQ_HPP

#include <cstddef>
#include <string_view>
#include <vector>

#include "lqdec/factorize.hpp"
#include "lqdec/nf_quant.hpp"

namespace lqdec {

enum class StopReason { error_increased, max_iters, zero_error };
enum class LqInit { zero, quantized };

std::string_view to_string(StopReason r) noexcept;
std::string_view to_string(LqInit i) noexcept;
LqInit parse_lq_init(std::string_view text);

struct LqOptions {
  QuantConfig config = kNf4Config;
  std::size_t rank = 64;
  std::size_t max_iters = 50;
  /// Starting quantized component: zero, or quantize(W).
  LqInit init = LqInit::zero;
  /// Iteration t uses seed mix(svd.seed, t) for the randomized SVD.
  SvdOptions svd;
};

/// Quantized-plus-low-rank decomposition W ~ Q + L1 L2.
struct LqResult {
  QuantizedMatrix q;
  LowRankFactors factors;
  /// Objective after each iteration (weighted when a Fisher diagonal is given).
  std::vector<double> error_trace;
  /// Index into error_trace of the returned (q, factors) snapshot.
  std::size_t chosen_iteration = 0;
  StopReason reason = StopReason::max_iters;

  double final_error() const noexcept { return error_trace[chosen_iteration]; }
};

/// Alternates a rank-r factorization of W - Q with NF quantization of
/// W - L1 L2. Stops when the error rises, drops below 1e-7 of the
/// (weighted) norm of W, or after max_iters; returns the lowest-error iterate.
LqResult lq_decompose(const DenseMatrix& w, const FisherDiag* fisher, const LqOptions& opts);

/// ||W - dequantize(quantize_nf(W))||, weighted when `fisher` is non-null.
double quantize_only_error(const DenseMatrix& w, const FisherDiag* fisher, const QuantConfig& cfg);

}  // namespace lqdec

#endif  // LQDEC_LQ_HPP
