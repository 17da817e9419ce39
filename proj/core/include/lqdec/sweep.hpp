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

#ifndef LQDEC_SWEEP_HPP
#define LQDEC_SWEEP_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lqdec/lq.hpp"
#include "lqdec/presets.hpp"
#include "lqdec/quant_config.hpp"
#include "lqdec/rational.hpp"

namespace lqdec {

/// Ordered, duplicate-free list of candidate quantization configs.
class ConfigGrid {
 public:
  ConfigGrid() = default;
  /// Throws ArgumentError if empty, invalid or containing duplicates.
  explicit ConfigGrid(std::vector<QuantConfig> configs);

  /// b0, b1 in {2,3,4}; b2 in {bf16,fp16,fp32}; B0 in {16,32,64};
  /// B1 in {16,64,256}. 243 configs, b0 varying slowest.
  static ConfigGrid default_grid();

  std::span<const QuantConfig> configs() const noexcept { return configs_; }
  std::size_t size() const noexcept { return configs_.size(); }
  const QuantConfig& operator[](std::size_t i) const noexcept { return configs_[i]; }

 private:
  std::vector<QuantConfig> configs_;
};

/// Per (matrix, config) squared decomposition errors and storage costs.
struct SweepTable {
  std::vector<std::uint64_t> sizes;
  /// Optional matrix shapes (same order as sizes); needed only for reports.
  std::vector<MatrixShape> shapes;
  std::vector<QuantConfig> configs;
  /// errors[i][c] = (final LQ error of matrix i under config c)^2.
  std::vector<std::vector<double>> errors;
  /// storage[i][c] = sizes[i] * storage_bits_per_param(configs[c]).
  std::vector<std::vector<Rational>> storage;
  /// Whether errors are Fisher-weighted; weighted and plain tables never mix.
  bool fisher_weighted = false;
  std::size_t rank = 0;
  std::uint64_t seed = 0;
  /// Rows whose cells are all computed (all true for a finished sweep).
  std::vector<bool> completed;

  std::size_t num_matrices() const noexcept { return sizes.size(); }
  std::size_t num_configs() const noexcept { return configs.size(); }
  bool is_complete() const noexcept;

  /// Throws ArgumentError unless all dimensions agree, errors are >= 0 and
  /// storage matches sizes * bits-per-param exactly.
  void validate() const;

  /// Appends the rows of `other`; rejects different configs, rank or weighting.
  void append(const SweepTable& other);
};

/// Empty table with the storage columns filled in and no rows completed.
SweepTable make_table(std::span<const MatrixShape> shapes, const ConfigGrid& grid, bool fisher_weighted,
                      std::size_t rank, std::uint64_t seed);

struct SweepOptions {
  std::size_t rank = 64;
  std::size_t max_iters = 50;
  SvdOptions svd;
  /// Worker threads; 0 means hardware concurrency.
  std::size_t workers = 1;
  /// Called after each matrix row finishes with a snapshot holding every
  /// completed row. Invoked from worker threads, serialized by a mutex.
  std::function<void(const SweepTable&)> on_row_complete;
};

/// Runs lq_decompose for every (matrix, config) pair in parallel. `fishers`
/// is empty or pairs one Fisher diagonal with each matrix. Rows already
/// completed in `resume` are copied instead of recomputed.
SweepTable sweep(std::span<const DenseMatrix> matrices, std::span<const FisherDiag> fishers, const ConfigGrid& grid,
                 const SweepOptions& opts, const SweepTable* resume = nullptr);

/// lq_decompose options used for a sweep cell; the final per-matrix
/// decomposition reuses them so its error reproduces the table entry.
LqOptions cell_options(const SweepOptions& opts, const QuantConfig& cfg);

}  // namespace lqdec

#endif  // LQDEC_SWEEP_HPP
