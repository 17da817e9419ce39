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

#ifndef LQDEC_MATMUL_HPP
#define LQDEC_MATMUL_HPP

#include "lqdec/factorize.hpp"
#include "lqdec/nf_quant.hpp"

namespace lqdec {

/// x * dequantize(q) (+ x * left * right when `factors` is non-null).
///
/// Streams q one row at a time, so the dequantized matrix is never
/// materialized; accumulation is in double.
DenseMatrix matmul_dequant(const DenseMatrix& x, const QuantizedMatrix& q, const LowRankFactors* factors = nullptr);

/// Dense reference: x * w (+ x * left * right), in double.
DenseMatrix matmul_dense(const DenseMatrix& x, const DenseMatrix& w, const LowRankFactors* factors = nullptr);

/// ||a - b||_F / ||b||_F (0 when both are zero).
double relative_frobenius_error(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace lqdec

#endif  // LQDEC_MATMUL_HPP
