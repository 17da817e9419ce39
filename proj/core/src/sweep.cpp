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

#include "lqdec/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "lqdec/error.hpp"

namespace lqdec {

ConfigGrid::ConfigGrid(std::vector<QuantConfig> configs) : configs_(std::move(configs)) {
  if (configs_.empty()) throw ArgumentError("config grid is empty");
  for (std::size_t i = 0; i < configs_.size(); ++i) {
    configs_[i].validate();
    for (std::size_t j = 0; j < i; ++j) {
      if (configs_[i] == configs_[j]) {
        throw ArgumentError("config grid lists " + configs_[i].to_string() + " twice");
      }
    }
  }
}

ConfigGrid ConfigGrid::default_grid() {
  std::vector<QuantConfig> out;
  out.reserve(243);
  for (int b0 : {2, 3, 4}) {
    for (int b1 : {2, 3, 4}) {
      for (FloatFormat b2 : {FloatFormat::bf16, FloatFormat::fp16, FloatFormat::fp32}) {
        for (std::uint32_t block : {16u, 32u, 64u}) {
          for (std::uint32_t group : {16u, 64u, 256u}) out.push_back({b0, b1, b2, block, group});
        }
      }
    }
  }
  return ConfigGrid(std::move(out));
}

bool SweepTable::is_complete() const noexcept {
  return std::all_of(completed.begin(), completed.end(), [](bool b) { return b; });
}

void SweepTable::validate() const {
  const std::size_t n = sizes.size();
  if (errors.size() != n || storage.size() != n || completed.size() != n) {
    throw ArgumentError("sweep table: row counts disagree");
  }
  if (!shapes.empty() && shapes.size() != n) throw ArgumentError("sweep table: shape count disagrees with sizes");
  if (configs.empty()) throw ArgumentError("sweep table: no configs");
  std::vector<Rational> bits;
  bits.reserve(configs.size());
  for (const auto& c : configs) bits.push_back(storage_bits_per_param(c));
  for (std::size_t i = 0; i < n; ++i) {
    if (!shapes.empty() && shapes[i].params() != sizes[i]) {
      throw ArgumentError("sweep table: shape of matrix " + std::to_string(i) + " disagrees with its size");
    }
    if (errors[i].size() != configs.size() || storage[i].size() != configs.size()) {
      throw ArgumentError("sweep table: row " + std::to_string(i) + " has the wrong number of columns");
    }
    for (std::size_t c = 0; c < configs.size(); ++c) {
      if (!(errors[i][c] >= 0.0) || !std::isfinite(errors[i][c])) {
        throw ArgumentError("sweep table: error[" + std::to_string(i) + "][" + std::to_string(c) +
                            "] is negative or non-finite");
      }
      if (storage[i][c] != Rational(static_cast<std::int64_t>(sizes[i])) * bits[c]) {
        throw ArgumentError("sweep table: storage[" + std::to_string(i) + "][" + std::to_string(c) +
                            "] is not size * bits-per-param");
      }
    }
  }
}

void SweepTable::append(const SweepTable& other) {
  if (fisher_weighted != other.fisher_weighted) {
    throw ArgumentError("cannot combine Fisher-weighted and unweighted sweep tables");
  }
  if (configs != other.configs) throw ArgumentError("cannot combine sweep tables over different config grids");
  if (rank != other.rank) throw ArgumentError("cannot combine sweep tables of different rank");
  if (shapes.empty() != other.shapes.empty() && !sizes.empty()) {
    throw ArgumentError("cannot combine sweep tables with and without shapes");
  }
  sizes.insert(sizes.end(), other.sizes.begin(), other.sizes.end());
  shapes.insert(shapes.end(), other.shapes.begin(), other.shapes.end());
  errors.insert(errors.end(), other.errors.begin(), other.errors.end());
  storage.insert(storage.end(), other.storage.begin(), other.storage.end());
  completed.insert(completed.end(), other.completed.begin(), other.completed.end());
}

SweepTable make_table(std::span<const MatrixShape> shapes, const ConfigGrid& grid, bool fisher_weighted,
                      std::size_t rank, std::uint64_t seed) {
  SweepTable t;
  t.configs.assign(grid.configs().begin(), grid.configs().end());
  t.fisher_weighted = fisher_weighted;
  t.rank = rank;
  t.seed = seed;
  std::vector<Rational> bits;
  for (const auto& c : t.configs) bits.push_back(storage_bits_per_param(c));
  for (const auto& s : shapes) {
    t.sizes.push_back(s.params());
    t.shapes.push_back(s);
    t.errors.emplace_back(t.configs.size(), 0.0);
    std::vector<Rational> row;
    row.reserve(bits.size());
    for (const auto& b : bits) row.push_back(Rational(static_cast<std::int64_t>(s.params())) * b);
    t.storage.push_back(std::move(row));
    t.completed.push_back(false);
  }
  return t;
}

LqOptions cell_options(const SweepOptions& opts, const QuantConfig& cfg) {
  LqOptions lq;
  lq.config = cfg;
  lq.rank = opts.rank;
  lq.max_iters = opts.max_iters;
  lq.svd = opts.svd;
  return lq;
}

SweepTable sweep(std::span<const DenseMatrix> matrices, std::span<const FisherDiag> fishers, const ConfigGrid& grid,
                 const SweepOptions& opts, const SweepTable* resume) {
  if (!fishers.empty() && fishers.size() != matrices.size()) {
    throw ArgumentError("sweep: " + std::to_string(fishers.size()) + " Fisher diagonals for " +
                        std::to_string(matrices.size()) + " matrices");
  }
  std::vector<MatrixShape> shapes;
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    if (!fishers.empty() && (fishers[i].rows() != matrices[i].rows() || fishers[i].cols() != matrices[i].cols())) {
      throw ArgumentError("sweep: Fisher diagonal " + std::to_string(i) + " does not match its matrix shape");
    }
    const std::size_t limit = std::min(matrices[i].rows(), matrices[i].cols());
    if (opts.rank < 1 || opts.rank > limit) {
      throw ArgumentError("sweep: rank " + std::to_string(opts.rank) + " is outside [1, " + std::to_string(limit) +
                          "] for matrix " + std::to_string(i));
    }
    shapes.push_back({"m" + std::to_string(i), matrices[i].rows(), matrices[i].cols()});
  }

  SweepTable result = make_table(shapes, grid, !fishers.empty(), opts.rank, opts.svd.seed);
  if (resume != nullptr) {
    if (resume->sizes != result.sizes || resume->configs != result.configs || resume->rank != result.rank ||
        resume->fisher_weighted != result.fisher_weighted || resume->seed != result.seed) {
      throw ArgumentError("sweep: resume table was produced by a different sweep");
    }
    for (std::size_t i = 0; i < result.num_matrices(); ++i) {
      if (resume->completed[i]) {
        result.errors[i] = resume->errors[i];
        result.completed[i] = true;
      }
    }
    if (!resume->shapes.empty()) result.shapes = resume->shapes;
  }

  struct Job {
    std::size_t matrix;
    std::size_t config;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < result.num_matrices(); ++i) {
    if (result.completed[i]) continue;
    for (std::size_t c = 0; c < grid.size(); ++c) jobs.push_back({i, c});
  }

  SweepTable published = result;
  std::vector<std::atomic<std::size_t>> remaining(result.num_matrices());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = result.completed[i] ? 0 : grid.size();

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mu;

  auto work = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      const Job job = jobs[j];
      try {
        const FisherDiag* f = fishers.empty() ? nullptr : &fishers[job.matrix];
        const LqResult r = lq_decompose(matrices[job.matrix], f, cell_options(opts, grid[job.config]));
        result.errors[job.matrix][job.config] = r.final_error() * r.final_error();
        if (remaining[job.matrix].fetch_sub(1, std::memory_order_acq_rel) == 1) {
          std::lock_guard lock(mu);
          published.errors[job.matrix] = result.errors[job.matrix];
          published.completed[job.matrix] = true;
          if (opts.on_row_complete) opts.on_row_complete(published);
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };

  std::size_t workers = opts.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.workers;
  workers = std::max<std::size_t>(1, std::min(workers, jobs.size()));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return published;
}

}  // namespace lqdec
