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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "lqdec/error.hpp"
#include "lqdec/generators.hpp"
#include "lqdec/init.hpp"
#include "lqdec/mckp.hpp"
#include "lqdec/presets.hpp"
#include "lqdec/report.hpp"
#include "lqdec/serialize.hpp"
#include "lqdec/sweep.hpp"

using namespace lqdec;

namespace {

MckpInstance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::uniform_real_distribution<double> cost(0.0, 100.0);
  std::uniform_int_distribution<int> size(1, 64);
  std::uniform_int_distribution<int> bits(1, 40);
  MckpInstance inst;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t sz = size(rng);
    std::vector<double> c(m);
    std::vector<Rational> w(m);
    for (std::size_t j = 0; j < m; ++j) {
      c[j] = cost(rng);
      w[j] = Rational(sz) * Rational(bits(rng), 8);
    }
    inst.cost.push_back(std::move(c));
    inst.weight.push_back(std::move(w));
  }
  return inst;
}

// Median total weight over every assignment.
double median_budget(const MckpInstance& inst) {
  std::vector<double> totals = {0.0};
  for (const auto& row : inst.weight) {
    std::vector<double> next;
    for (double t : totals)
      for (const auto& w : row) next.push_back(t + w.to_double());
    totals = std::move(next);
  }
  std::nth_element(totals.begin(), totals.begin() + static_cast<std::ptrdiff_t>(totals.size() / 2), totals.end());
  return totals[totals.size() / 2];
}

void check_consistent(const MckpInstance& inst, const AllocSolution& s) {
  REQUIRE(s.assignment.size() == inst.num_classes());
  double e = 0.0;
  Rational w;
  for (std::size_t i = 0; i < s.assignment.size(); ++i) {
    REQUIRE(s.assignment[i] < inst.cost[i].size());
    e += inst.cost[i][s.assignment[i]];
    w += inst.weight[i][s.assignment[i]];
  }
  CHECK(s.total_error == e);
  CHECK(s.total_storage_bits == w);
  CHECK(w.to_double() <= s.budget_bits);
}

std::vector<DenseMatrix> gaussians(std::size_t count, std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::vector<DenseMatrix> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(gen_matrix(MatrixKind::gaussian, rows, cols, seed + i));
  return out;
}

ConfigGrid small_grid() {
  std::vector<QuantConfig> c;
  for (const char* t : {"2,8,fp32,64,256", "3,8,fp32,64,256", "4,8,fp32,64,256", "2,4,fp16,32,64",
                        "3,4,bf16,32,64", "4,2,fp16,16,16"})
    c.push_back(parse_quant_config(t));
  return ConfigGrid(std::move(c));
}

}  // namespace

TEST_CASE("default grid") {
  const auto g = ConfigGrid::default_grid();
  CHECK(g.size() == 243);
  CHECK(g[0] == parse_quant_config("2,2,bf16,16,16"));
  CHECK(g[242] == parse_quant_config("4,4,fp32,64,256"));
  std::vector<std::string> names;
  for (const auto& c : g.configs()) names.push_back(c.to_string());
  std::sort(names.begin(), names.end());
  CHECK(std::adjacent_find(names.begin(), names.end()) == names.end());
  CHECK_THROWS_AS(ConfigGrid(std::vector<QuantConfig>{}), ArgumentError);
  CHECK_THROWS_AS(ConfigGrid({kNf4Config, kNf4Config}), ArgumentError);
}

TEST_CASE("tiny knapsack") {
  MckpInstance inst{{{4, 1}, {3, 1}}, {{2, 4}, {2, 4}}};
  const auto s = solve_mckp(inst, 6.0);
  CHECK(s.total_error == 4.0);
  CHECK(s.total_storage_bits == Rational(6));
  CHECK(s.optimal);
  CHECK(((s.assignment == std::vector<std::size_t>{1, 0}) || (s.assignment == std::vector<std::size_t>{0, 1})));
  CHECK(brute_force_mckp(inst, 6.0).total_error == 4.0);

  const auto loose = solve_mckp(inst, 8.0);
  CHECK(loose.assignment == std::vector<std::size_t>{1, 1});
  CHECK_THROWS_AS(solve_mckp(inst, 3.9), InfeasibleError);
  try {
    solve_mckp(inst, 3.9);
  } catch (const InfeasibleError& e) {
    CHECK(e.min_storage_bits() == 4.0);
  }
  CHECK_THROWS_AS(brute_force_mckp(inst, 3.9), InfeasibleError);
  CHECK_THROWS_AS(solve_mckp(inst, 0.0), ArgumentError);
}

TEST_CASE("single class picks the cheapest feasible item") {
  MckpInstance inst{{{5, 2, 1, 3}}, {{1, 2, 9, 3}}};
  const auto s = solve_mckp(inst, 3.0);
  CHECK(s.assignment == std::vector<std::size_t>{1});
  CHECK(brute_force_mckp(inst, 3.0).assignment == std::vector<std::size_t>{1});
}

TEST_CASE("branch and bound matches brute force on random instances") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = random_instance(rng, 5, 4);
    const double budget = median_budget(inst);
    const auto fast = solve_mckp(inst, budget);
    const auto slow = brute_force_mckp(inst, budget);
    CHECK(fast.optimal);
    CHECK(fast.total_error == slow.total_error);
    check_consistent(inst, fast);
    check_consistent(inst, slow);

    MckpOptions no_prune;
    no_prune.prune_dominated = false;
    CHECK(solve_mckp(inst, budget, no_prune).total_error == slow.total_error);
  }
}

TEST_CASE("optimal error is non-increasing in the budget") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = random_instance(rng, 7, 5);
    const double lo = min_total_weight(inst).to_double();
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 20; ++k) {
      const double budget = lo * (1.0 + 0.15 * k);
      const auto s = solve_mckp(inst, budget);
      CHECK(s.total_error <= prev);
      prev = s.total_error;
    }
  }
}

TEST_CASE("generous budget gives every class its cheapest-error item") {
  std::mt19937_64 rng(3);
  const auto inst = random_instance(rng, 6, 5);
  const auto s = solve_mckp(inst, 1e9);
  for (std::size_t i = 0; i < inst.num_classes(); ++i) {
    const auto& c = inst.cost[i];
    CHECK(s.assignment[i] == static_cast<std::size_t>(std::min_element(c.begin(), c.end()) - c.begin()));
  }
}

TEST_CASE("node limit reports a non-optimal incumbent") {
  std::mt19937_64 rng(4);
  const auto inst = random_instance(rng, 30, 8);
  MckpOptions o;
  o.node_limit = 1;
  const auto s = solve_mckp(inst, median_budget(random_instance(rng, 1, 1)) + min_total_weight(inst).to_double() * 1.3);
  check_consistent(inst, s);
  const auto limited = solve_mckp(inst, s.budget_bits, o);
  check_consistent(inst, limited);
  CHECK(limited.total_error >= s.total_error);
}

TEST_CASE("brute force guard") {
  std::mt19937_64 rng(5);
  const auto inst = random_instance(rng, 12, 4);
  CHECK_THROWS_AS(brute_force_mckp(inst, 1e9), ArgumentError);
}

TEST_CASE("sweep table storage is exact and errors match lq_decompose") {
  const auto w = gaussians(2, 64, 64, 10);
  const auto grid = small_grid();
  SweepOptions o;
  o.rank = 4;
  o.max_iters = 5;
  const SweepTable t = sweep(w, {}, grid, o);
  CHECK(t.is_complete());
  CHECK_NOTHROW(t.validate());
  CHECK(t.storage[0][2] == Rational(16904));
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t c = 0; c < grid.size(); ++c) {
      CHECK(t.storage[i][c] == Rational(4096) * storage_bits_per_param(grid[c]));
    }
  }
  const double e = lq_decompose(w[1], nullptr, cell_options(o, grid[4])).final_error();
  CHECK(t.errors[1][4] == e * e);
  // More first-level bits never hurt with the other fields fixed.
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(t.errors[i][2] <= t.errors[i][1]);
    CHECK(t.errors[i][1] <= t.errors[i][0]);
  }
}

TEST_CASE("parallel sweep equals serial sweep and resume reuses rows") {
  const auto w = gaussians(3, 32, 48, 20);
  const auto grid = small_grid();
  SweepOptions o;
  o.rank = 4;
  o.max_iters = 4;
  const SweepTable serial = sweep(w, {}, grid, o);
  o.workers = 3;
  std::size_t calls = 0;
  o.on_row_complete = [&](const SweepTable& snap) {
    ++calls;
    CHECK_NOTHROW(snap.validate());
  };
  const SweepTable parallel = sweep(w, {}, grid, o);
  CHECK(calls == 3);
  CHECK(parallel.errors == serial.errors);

  SweepTable partial = serial;
  partial.completed[1] = false;
  partial.errors[0][0] = 12345.0;  // a completed row is copied, not recomputed
  o.on_row_complete = nullptr;
  const SweepTable resumed = sweep(w, {}, grid, o, &partial);
  CHECK(resumed.errors[0][0] == 12345.0);
  CHECK(resumed.errors[1] == serial.errors[1]);
}

TEST_CASE("sweep argument checks") {
  const auto w = gaussians(2, 16, 16, 1);
  const std::vector<FisherDiag> one = {gen_fisher(FisherKind::uniform, 16, 16, 0)};
  SweepOptions o;
  o.rank = 2;
  CHECK_THROWS_AS(sweep(w, one, small_grid(), o), ArgumentError);
  const std::vector<FisherDiag> wrong = {gen_fisher(FisherKind::uniform, 16, 16, 0),
                                         gen_fisher(FisherKind::uniform, 8, 16, 0)};
  CHECK_THROWS_AS(sweep(w, wrong, small_grid(), o), ArgumentError);
}

TEST_CASE("tables reject mixing weighted and plain errors") {
  const std::vector<MatrixShape> shapes = {{"a", 8, 8}};
  SweepTable a = make_table(shapes, small_grid(), false, 4, 0);
  const SweepTable b = make_table(shapes, small_grid(), true, 4, 0);
  CHECK_THROWS_AS(a.append(b), ArgumentError);
  const SweepTable c = make_table(shapes, small_grid(), false, 8, 0);
  CHECK_THROWS_AS(a.append(c), ArgumentError);
  CHECK_NOTHROW(a.append(make_table(shapes, small_grid(), false, 4, 0)));
  CHECK(a.num_matrices() == 2);
}

TEST_CASE("sweep table JSON round trip") {
  const auto w = gaussians(2, 16, 32, 3);
  SweepOptions o;
  o.rank = 2;
  o.max_iters = 3;
  const SweepTable t = sweep(w, {}, small_grid(), o);
  const SweepTable back = sweep_table_from_json(to_json(t));
  CHECK(back.sizes == t.sizes);
  CHECK(back.errors == t.errors);
  CHECK(back.storage == t.storage);
  CHECK(back.configs == t.configs);
  CHECK(back.rank == t.rank);
  CHECK(to_json(back) == to_json(t));
  CHECK_THROWS_AS(sweep_table_from_json("{"), FormatError);
  CHECK_THROWS_AS(sweep_table_from_json("{\"sizes\": [1]}"), FormatError);

  const auto s = solve_mckp(t, budget_bits_for(t, 3.0));
  const auto s2 = alloc_solution_from_json(to_json(s));
  CHECK(s2.assignment == s.assignment);
  CHECK(s2.total_error == s.total_error);
  CHECK(s2.total_storage_bits == s.total_storage_bits);
  CHECK(s2.optimal == s.optimal);
}

TEST_CASE("config grid JSON") {
  const auto g = config_grid_from_json(R"([[4,8,"fp32",64,256],[2,2,1,16,16]])");
  CHECK(g.size() == 2);
  CHECK(g[1] == parse_quant_config("2,2,fp16,16,16"));
  CHECK(config_grid_from_json(to_json(g)).configs()[0] == g[0]);
  CHECK(config_grid_from_json(R"({"configs": [[3,8,"bf16",64,256]]})")[0].scale_format == FloatFormat::bf16);
  CHECK_THROWS_AS(config_grid_from_json("[[4,8,\"fp8\",64,256]]"), FormatError);
  CHECK_THROWS_AS(config_grid_from_json("[]"), FormatError);
}

TEST_CASE("lq_lora_init with a single config equals a direct decomposition") {
  const auto w = gaussians(1, 32, 32, 40);
  InitOptions o;
  o.sweep.rank = 4;
  o.sweep.max_iters = 5;
  o.budget_bits_per_param = 5.0;
  const auto r = lq_lora_init(w, {}, ConfigGrid({kNf4Config}), o);
  const auto direct = lq_decompose(w[0], nullptr, cell_options(o.sweep, kNf4Config));
  REQUIRE(r.decompositions.size() == 1);
  CHECK(r.decompositions[0].q == direct.q);
  CHECK(r.decompositions[0].error_trace == direct.error_trace);
}

TEST_CASE("lq_lora_init on three matrices is brute-force optimal") {
  const auto w = gaussians(3, 64, 64, 50);
  InitOptions o;
  o.sweep.rank = 8;
  o.sweep.max_iters = 5;
  o.budget_bits_per_param = 3.0;
  const auto r = lq_lora_init(w, {}, small_grid(), o);
  CHECK(r.solution.optimal);
  CHECK(r.solution.total_storage_bits.to_double() <= 3.0 * 3 * 4096);
  CHECK(r.solution.total_error == brute_force_mckp(r.table, r.solution.budget_bits).total_error);
  for (std::size_t i = 0; i < 3; ++i) {
    const double e = r.decompositions[i].final_error();
    CHECK(e * e == doctest::Approx(r.table.errors[i][r.solution.assignment[i]]).epsilon(1e-12));
    CHECK(r.decompositions[i].q.config() == r.table.configs[r.solution.assignment[i]]);
  }
}

TEST_CASE("Fisher-weighted init runs end to end") {
  const auto w = gaussians(2, 32, 32, 60);
  const std::vector<FisherDiag> f = {gen_fisher(FisherKind::random_nonneg, 32, 32, 1),
                                     gen_fisher(FisherKind::random_nonneg, 32, 32, 2)};
  InitOptions o;
  o.sweep.rank = 4;
  o.sweep.max_iters = 3;
  const auto r = lq_lora_init(w, f, small_grid(), o);
  CHECK(r.table.fisher_weighted);
  CHECK(r.solution.optimal);
}

TEST_CASE("effective bits for the model presets") {
  for (auto [name, want] : {std::pair{"llama2-7b-linear", 2.9506736320535}, std::pair{"llama2-70b-linear", 2.8483500761144}}) {
    const auto p = preset(name);
    const std::vector<double> bits(p.matrices.size(), 2.75);
    const auto r = storage_report(p.matrices, bits, 64, lora_bits_per_param(LoraFormat::nf8).to_double());
    CHECK(r.effective_bits() == doctest::Approx(want).epsilon(1e-12));
    CHECK(std::fabs(r.effective_bits() - (std::string_view(name) == "llama2-7b-linear" ? 2.95 : 2.85)) <= 0.01);
    CHECK(r.quantized_params == p.total_params());
    // Recompute from raw dims.
    double lora = 0.0;
    for (const auto& m : p.matrices) lora += 64.0 * double(m.rows + m.cols);
    const double expected = (2.75 * double(p.total_params()) + lora * 8.126953125) / double(p.total_params());
    CHECK(std::fabs(r.effective_bits() - expected) <= 1e-9);
  }
  CHECK(lora_bits_per_param(LoraFormat::nf8) == Rational(8322, 1024));
  CHECK(lora_bits_per_param(LoraFormat::fp16) == Rational(16));
}

TEST_CASE("report without LoRA is the storage-weighted mean") {
  const std::vector<MatrixShape> shapes = {{"a", 10, 10}, {"b", 10, 30}};
  const std::vector<double> bits = {2.0, 4.0};
  const auto r = storage_report(shapes, bits, 0, 16.0);
  CHECK(r.effective_bits() == doctest::Approx((200.0 + 1200.0) / 400.0));
  CHECK(r.lora_params == 0);
  CHECK(r.quantized_bytes() == doctest::Approx(1400.0 / 8));
  CHECK_FALSE(format_report(r).empty());
  CHECK_THROWS_AS(storage_report(shapes, std::vector<double>{2.0}, 0, 16.0), ArgumentError);
}

TEST_CASE("report for an allocation requires shapes") {
  SweepTable t = make_table(std::vector<MatrixShape>{{"a", 8, 8}}, small_grid(), false, 4, 0);
  AllocSolution s;
  s.assignment = {2};
  const auto r = storage_report(s, t, 4, 16.0);
  CHECK(r.quantized_bits_per_param() == doctest::Approx(4.126953125));
  t.shapes.clear();
  CHECK_THROWS_AS(storage_report(s, t, 4, 16.0), ArgumentError);
}

TEST_CASE("branch and bound matches a capacity DP on larger integer instances") {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> wdist(1, 40);
  std::uniform_real_distribution<double> noise(0.9, 1.1);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 20 + rng() % 20, m = 2 + rng() % 10;
    MckpInstance inst;
    std::vector<std::vector<int>> w(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> c(m);
      std::vector<Rational> wr(m);
      for (std::size_t j = 0; j < m; ++j) {
        w[i].push_back(wdist(rng));
        // Costs fall with weight, with small noise: many near-equivalent assignments.
        c[j] = 100.0 * std::exp2(-0.15 * w[i][j]) * (trial % 2 ? noise(rng) : 1.0);
        wr[j] = Rational(w[i][j]);
      }
      inst.cost.push_back(std::move(c));
      inst.weight.push_back(std::move(wr));
    }
    const int lo = static_cast<int>(min_total_weight(inst).num());
    const int cap = lo + static_cast<int>(rng() % (20 * n));
    // dp[x] = min cost using exactly weight x over the classes so far.
    std::vector<double> dp(static_cast<std::size_t>(cap) + 1, std::numeric_limits<double>::infinity());
    dp[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> next(dp.size(), std::numeric_limits<double>::infinity());
      for (std::size_t x = 0; x < dp.size(); ++x) {
        if (!std::isfinite(dp[x])) continue;
        for (std::size_t j = 0; j < m; ++j) {
          const std::size_t y = x + static_cast<std::size_t>(w[i][j]);
          if (y < next.size()) next[y] = std::min(next[y], dp[x] + inst.cost[i][j]);
        }
      }
      dp = std::move(next);
    }
    const double want = *std::min_element(dp.begin(), dp.end());
    const auto got = solve_mckp(inst, cap);
    CHECK(got.optimal);
    CHECK(got.total_error == doctest::Approx(want).epsilon(1e-12));
    check_consistent(inst, got);
  }
}
