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

#ifndef LQDEC_GENERATORS_HPP
#define LQDEC_GENERATORS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "lqdec/quant_config.hpp"
#include "lqdec/tensor.hpp"

namespace lqdec {

enum class MatrixKind { gaussian, decaying_spectrum, low_rank, on_grid };
enum class FisherKind { uniform, separable, random_nonneg };

MatrixKind parse_matrix_kind(std::string_view text);
FisherKind parse_fisher_kind(std::string_view text);
std::string_view to_string(MatrixKind k) noexcept;
std::string_view to_string(FisherKind k) noexcept;

struct MatrixParams {
  /// Singular-value ratio for decaying_spectrum: sigma_i = rho^i.
  double rho = 0.9;
  /// Exact rank for low_rank.
  std::size_t rank = 1;
  /// Quantization grid the on_grid matrix must sit on.
  QuantConfig grid = kNf4Config;
};

/// Deterministic synthetic matrices.
///
///  gaussian           iid N(0, 1)
///  decaying_spectrum  U diag(rho^0, rho^1, ...) V^T with Haar-random U, V
///  low_rank           product of rows x rank and rank x cols Gaussians
///  on_grid            every block already lies on the NF grid of
///                     params.grid, so quantize/dequantize is lossless
DenseMatrix gen_matrix(MatrixKind kind, std::size_t rows, std::size_t cols, std::uint64_t seed,
                       const MatrixParams& params = {});

/// uniform: all ones; separable: r_i * c_j with r, c ~ U(0.5, 2);
/// random_nonneg: |N(0, 1)|.
FisherDiag gen_fisher(FisherKind kind, std::size_t rows, std::size_t cols, std::uint64_t seed);

}  // namespace lqdec

#endif  // LQDEC_GENERATORS_HPP
