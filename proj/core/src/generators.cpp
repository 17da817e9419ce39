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

#include "lqdec/generators.hpp"

#include <cmath>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "lqdec/codebook.hpp"
#include "lqdec/error.hpp"
#include "lqdec/factorize.hpp"
#include "lqdec/float_format.hpp"
#include "lqdec/nf_quant.hpp"

namespace lqdec {
namespace {

Eigen::MatrixXd gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  // fill row-major so the stream order matches the file layout
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = normal(rng);
  }
  return m;
}

Eigen::MatrixXd haar_columns(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  Eigen::MatrixXd g = gaussian(rows, cols, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(g.rows(), g.cols());
  // Sign-fix against R's diagonal so the distribution is Haar.
  const Eigen::MatrixXd r = qr.matrixQR().topRows(g.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

DenseMatrix on_grid(std::size_t rows, std::size_t cols, std::mt19937_64& rng, const QuantConfig& cfg) {
  cfg.validate();
  const std::size_t n = rows * cols;
  const std::size_t block = cfg.block_size;
  const std::size_t blocks = QuantizedMatrix::num_blocks_for(n, cfg);
  const std::size_t groups = QuantizedMatrix::num_groups_for(n, cfg);
  const auto levels = codebook(cfg.first_bits).levels();
  const std::uint32_t top_level = static_cast<std::uint32_t>(levels.size() - 1);
  const std::uint32_t top_scale = (1u << cfg.second_bits) - 1u;

  std::uniform_real_distribution<double> magnitude(0.5, 2.0);
  std::uniform_int_distribution<std::uint32_t> level_pick(0, top_level);
  std::uniform_int_distribution<std::uint32_t> scale_pick(0, top_scale);
  std::bernoulli_distribution coin(0.5);

  std::vector<float> data(n, 0.0f);
  for (std::size_t g = 0; g < groups; ++g) {
    const double group_scale = round_to_format(static_cast<float>(magnitude(rng)), cfg.scale_format);
    const std::size_t b_begin = g * cfg.group_size;
    const std::size_t b_end = std::min(blocks, b_begin + cfg.group_size);
    // one block per group carries the group maximum
    const std::size_t anchor = b_begin + std::uniform_int_distribution<std::size_t>(0, b_end - b_begin - 1)(rng);
    for (std::size_t b = b_begin; b < b_end; ++b) {
      const std::uint32_t s_code = b == anchor ? top_scale : scale_pick(rng);
      const double scale = static_cast<double>(s_code) * group_scale / top_scale;
      const std::size_t begin = b * block;
      const std::size_t end = std::min(n, begin + block);
      if (s_code == 0) continue;  // stays +0, matching the canonical zero block
      // one entry per block sits at +-1 so the block absmax equals the scale
      const std::size_t peak = begin + std::uniform_int_distribution<std::size_t>(0, end - begin - 1)(rng);
      for (std::size_t i = begin; i < end; ++i) {
        const std::uint32_t code = i == peak ? (coin(rng) ? top_level : 0u) : level_pick(rng);
        data[i] = static_cast<float>(scale * levels[code]);
      }
    }
  }
  return DenseMatrix(rows, cols, std::move(data));
}

}  // namespace

MatrixKind parse_matrix_kind(std::string_view text) {
  if (text == "gaussian") return MatrixKind::gaussian;
  if (text == "decaying-spectrum") return MatrixKind::decaying_spectrum;
  if (text == "low-rank") return MatrixKind::low_rank;
  if (text == "on-grid") return MatrixKind::on_grid;
  throw ArgumentError("unknown matrix kind \"" + std::string(text) +
                      "\" (expected gaussian, decaying-spectrum, low-rank or on-grid)");
}

FisherKind parse_fisher_kind(std::string_view text) {
  if (text == "uniform") return FisherKind::uniform;
  if (text == "separable") return FisherKind::separable;
  if (text == "random-nonneg") return FisherKind::random_nonneg;
  throw ArgumentError("unknown Fisher kind \"" + std::string(text) +
                      "\" (expected uniform, separable or random-nonneg)");
}

std::string_view to_string(MatrixKind k) noexcept {
  switch (k) {
    case MatrixKind::gaussian:
      return "gaussian";
    case MatrixKind::decaying_spectrum:
      return "decaying-spectrum";
    case MatrixKind::low_rank:
      return "low-rank";
    case MatrixKind::on_grid:
      return "on-grid";
  }
  return "gaussian";
}

std::string_view to_string(FisherKind k) noexcept {
  switch (k) {
    case FisherKind::uniform:
      return "uniform";
    case FisherKind::separable:
      return "separable";
    case FisherKind::random_nonneg:
      return "random-nonneg";
  }
  return "uniform";
}

DenseMatrix gen_matrix(MatrixKind kind, std::size_t rows, std::size_t cols, std::uint64_t seed,
                       const MatrixParams& params) {
  if (rows < 1 || cols < 1) throw ArgumentError("gen_matrix: rows and cols must be >= 1");
  std::mt19937_64 rng(seed);
  switch (kind) {
    case MatrixKind::gaussian:
      return from_eigen(gaussian(rows, cols, rng));
    case MatrixKind::decaying_spectrum: {
      if (!(params.rho > 0.0 && params.rho <= 1.0)) throw ArgumentError("gen_matrix: rho must lie in (0, 1]");
      const std::size_t m = std::min(rows, cols);
      Eigen::MatrixXd u = haar_columns(rows, m, rng);
      Eigen::MatrixXd v = haar_columns(cols, m, rng);
      Eigen::VectorXd sigma(static_cast<Eigen::Index>(m));
      for (Eigen::Index i = 0; i < sigma.size(); ++i) sigma(i) = std::pow(params.rho, static_cast<double>(i));
      return from_eigen(u * sigma.asDiagonal() * v.transpose());
    }
    case MatrixKind::low_rank: {
      if (params.rank < 1 || params.rank > std::min(rows, cols)) {
        throw ArgumentError("gen_matrix: rank " + std::to_string(params.rank) + " is outside [1, min(rows, cols)]");
      }
      Eigen::MatrixXd a = gaussian(rows, params.rank, rng);
      Eigen::MatrixXd b = gaussian(params.rank, cols, rng) / std::sqrt(static_cast<double>(params.rank));
      return from_eigen(a * b);
    }
    case MatrixKind::on_grid:
      return on_grid(rows, cols, rng, params.grid);
  }
  throw ArgumentError("gen_matrix: unknown kind");
}

FisherDiag gen_fisher(FisherKind kind, std::size_t rows, std::size_t cols, std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw ArgumentError("gen_fisher: rows and cols must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<float> data(rows * cols, 1.0f);
  switch (kind) {
    case FisherKind::uniform:
      break;
    case FisherKind::separable: {
      std::uniform_real_distribution<double> u(0.5, 2.0);
      std::vector<double> r(rows), c(cols);
      for (auto& v : r) v = u(rng);
      for (auto& v : c) v = u(rng);
      for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) data[i * cols + j] = static_cast<float>(r[i] * c[j]);
      }
      break;
    }
    case FisherKind::random_nonneg: {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (auto& v : data) v = static_cast<float>(std::fabs(normal(rng)));
      break;
    }
  }
  return FisherDiag(DenseMatrix(rows, cols, std::move(data)));
}

}  // namespace lqdec
