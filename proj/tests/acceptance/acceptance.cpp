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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lqdec/lqdec.hpp"
#include "oracles.hpp"

#ifdef LQDEC_HAVE_CLI
#include "cli.hpp"
#endif

using namespace lqdec;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<Outcome()> body;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---------------------------------------------------------------- 1

Outcome storage_rate() {
  Outcome o;
  const Rational nf4 = storage_bits_per_param(parse_quant_config("4,8,fp32,64,256"));
  const Rational nf3 = storage_bits_per_param(parse_quant_config("3,8,fp32,64,256"));
  if (nf4 != Rational::from_double(4.126953125)) o.fail("4-bit config gives " + nf4.to_string());
  if (nf3 != Rational::from_double(3.126953125)) o.fail("3-bit config gives " + nf3.to_string());
  if (fmt("%.3f", nf4.to_double()) != "4.127" || fmt("%.3f", nf3.to_double()) != "3.127") o.fail("printed values");
  if (o.pass) o.detail = nf4.to_string() + " = 4.126953125, " + nf3.to_string() + " = 3.126953125";
  return o;
}

// ---------------------------------------------------------------- 2

Outcome effective_bits() {
  Outcome o;
  const double lora = lora_bits_per_param(LoraFormat::nf8).to_double();
  std::string detail;
  for (auto [name, want] : {std::pair{"llama2-7b-linear", 2.95}, std::pair{"llama2-70b-linear", 2.85}}) {
    const ModelPreset p = preset(name);
    const std::vector<double> bits(p.matrices.size(), 2.75);
    const double got = storage_report(p.matrices, bits, 64, lora).effective_bits();
    if (!(std::fabs(got - want) <= 0.01)) o.fail(std::string(name) + fmt(" gives %.6f", got));
    detail += std::string(detail.empty() ? "" : ", ") + name + fmt(" %.4f", got);
  }
  if (o.pass) o.detail = detail;
  return o;
}

// ---------------------------------------------------------------- 3

Outcome codebooks() {
  Outcome o;
  for (int b : {2, 3, 4, 8}) {
    const Codebook& cb = codebook(b);
    const std::size_t n = std::size_t{1} << b;
    if (cb.size() != n) o.fail(fmt("b=%g has wrong length", b));
    for (std::size_t i = 1; i < cb.size(); ++i) {
      if (!(cb[i] > cb[i - 1])) o.fail(fmt("b=%g not strictly increasing", b));
    }
    if (cb[0] != -1.0 || cb[n - 1] != 1.0 || cb[(n / 2) - 1] != 0.0) o.fail(fmt("b=%g endpoint/zero levels", b));
  }
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> lg(-10.0, std::log10(0.05));
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double p;
    switch (i % 4) {
      case 0:
        p = std::pow(10.0, lg(rng));
        break;
      case 1:
        p = 1.0 - std::pow(10.0, lg(rng));
        break;
      default:
        do p = u(rng);
        while (p <= 0.0);
    }
    worst = std::max(worst, std::fabs(inverse_normal_cdf(p) - oracle::bisect_inverse_cdf(p)));
  }
  if (!(worst <= 1e-9)) o.fail(fmt("inverse CDF max deviation %.3e", worst));
  if (o.pass) o.detail = fmt("4 codebooks ok; inverse CDF max |dev| %.2e over 1e4 p", worst);
  return o;
}

// ---------------------------------------------------------------- 4

Outcome round_trips() {
  Outcome o;
  std::mt19937_64 rng(404);
  for (int bits : {2, 3, 4, 8}) {
    for (int v = 0; v < 1000; ++v) {
      std::vector<std::uint8_t> codes(rng() % 512);
      for (auto& c : codes) c = static_cast<std::uint8_t>(rng() & ((1u << bits) - 1));
      const auto bytes = pack_bits<std::uint8_t>(codes, bits);
      if (bytes.size() != packed_size(codes.size(), bits) || unpack_bits(bytes, bits, codes.size()) != codes) {
        o.fail(fmt("pack/unpack mismatch at b=%g vector %g", bits, v));
      }
    }
  }
  const char* grid_cfgs[] = {"4,8,fp32,64,256", "3,8,fp32,64,256", "2,8,fp32,64,256", "8,8,fp32,64,256",
                             "2,2,fp32,16,16",  "3,4,fp32,32,64",  "4,3,fp32,16,7"};
  for (const char* text : grid_cfgs) {
    MatrixParams p;
    p.grid = parse_quant_config(text);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const DenseMatrix w = gen_matrix(MatrixKind::on_grid, 96, 160, seed, p);
      if (!dequantize(quantize_nf(w, p.grid)).bit_equal(w)) o.fail(std::string("on-grid not exact for ") + text);
    }
  }
  const char* cfgs[] = {"4,8,fp32,64,256", "3,8,fp32,64,256", "2,8,fp32,64,256", "8,8,fp32,64,256",
                        "4,4,fp32,32,64"};
  for (int i = 0; i < 50; ++i) {
    const QuantConfig cfg = parse_quant_config(cfgs[i % 5]);
    const DenseMatrix w = gen_matrix(i % 2 ? MatrixKind::gaussian : MatrixKind::decaying_spectrum, 64 + i, 96,
                                     5000 + static_cast<std::uint64_t>(i));
    const QuantizedMatrix q = quantize_nf(w, cfg);
    const QuantizedMatrix q2 = quantize_nf(dequantize(q), cfg);
    if (!std::ranges::equal(q.codes(), q2.codes()) || !std::ranges::equal(q.scale_codes(), q2.scale_codes())) {
      o.fail(fmt("requantization changed codes for matrix %g", i));
    }
  }
  if (o.pass) o.detail = "4000 pack round trips, 28 on-grid fixtures exact, 50/50 idempotent";
  return o;
}

// ---------------------------------------------------------------- 5

bool trace_ok(const LqResult& r) {
  const auto& t = r.error_trace;
  for (std::size_t i = 1; i + 1 < t.size(); ++i)
    if (t[i] > t[i - 1]) return false;
  if (t.size() >= 2 && t.back() > t[t.size() - 2] && r.reason != StopReason::error_increased) return false;
  return true;
}

Outcome lq_vs_quantize() {
  Outcome o;
  const QuantConfig cfg = parse_quant_config("3,8,fp32,64,256");
  int wins = 0;
  double worst_ratio = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DenseMatrix w = gen_matrix(MatrixKind::gaussian, 512, 512, seed);
    LqOptions opts;
    opts.config = cfg;
    opts.rank = 64;
    opts.svd.seed = seed;
    const LqResult r = lq_decompose(w, nullptr, opts);
    const double q_only = quantize_only_error(w, nullptr, cfg);
    wins += r.final_error() < q_only;
    worst_ratio = std::max(worst_ratio, r.final_error() / q_only);
    if (!trace_ok(r)) o.fail(fmt("error trace rises before the stop for seed %g", double(seed)));
  }
  if (wins != 20) o.fail(fmt("LQ below quantize-only in %g/20 seeds", wins));
  if (o.pass) o.detail = fmt("20/20 seeds; worst LQ/quantize-only ratio %.4f", worst_ratio);
  return o;
}

// ---------------------------------------------------------------- 6

Outcome rank_monotone() {
  Outcome o;
  const QuantConfig cfg = parse_quant_config("3,8,fp32,64,256");
  std::string detail;
  for (std::uint64_t f = 0; f < 5; ++f) {
    MatrixParams p;
    p.rho = 0.97;
    const DenseMatrix w = gen_matrix(f < 3 ? MatrixKind::gaussian : MatrixKind::decaying_spectrum, 256, 384, 600 + f, p);
    double e[3];
    const std::size_t ranks[3] = {32, 64, 128};
    for (int k = 0; k < 3; ++k) {
      LqOptions opts;
      opts.config = cfg;
      opts.rank = ranks[k];
      opts.svd.seed = f;
      e[k] = lq_decompose(w, nullptr, opts).final_error();
    }
    if (!(e[2] <= e[1] && e[1] <= e[0])) o.fail(fmt("fixture %g: r32 %.6g r64 %.6g", double(f), e[0], e[1]) + fmt(" r128 %.6g", e[2]));
    if (f == 0) detail = fmt("fixture 0: %.4g >= %.4g >= %.4g", e[0], e[1], e[2]);
  }
  if (o.pass) o.detail = "5/5 fixtures; " + detail;
  return o;
}

// ---------------------------------------------------------------- 7

Outcome mckp_exact() {
  Outcome o;
  std::mt19937_64 rng(777);
  const ConfigGrid grid = ConfigGrid::default_grid();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int matched = 0, infeasible_ok = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    const std::size_t m = 1 + rng() % 6;
    std::vector<std::size_t> picks(grid.size());
    for (std::size_t i = 0; i < picks.size(); ++i) picks[i] = i;
    std::shuffle(picks.begin(), picks.end(), rng);
    MckpInstance inst;
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t size = 64 * static_cast<std::int64_t>(1 + rng() % 64);
      std::vector<double> cost(m);
      std::vector<Rational> weight(m);
      for (std::size_t c = 0; c < m; ++c) {
        weight[c] = Rational(size) * storage_bits_per_param(grid[picks[c]]);
        cost[c] = trial % 5 == 0 ? std::floor(unit(rng) * 8) : unit(rng) * 1000.0;  // some with ties
      }
      inst.cost.push_back(std::move(cost));
      inst.weight.push_back(std::move(weight));
    }
    double lo = 0.0, hi = 0.0;
    for (const auto& row : inst.weight) {
      lo += std::min_element(row.begin(), row.end())->to_double();
      hi += std::max_element(row.begin(), row.end())->to_double();
    }
    const double budget = lo + unit(rng) * (hi - lo) * 1.1;
    const AllocSolution fast = solve_mckp(inst, budget);
    const AllocSolution slow = brute_force_mckp(inst, budget);
    if (fast.total_error == slow.total_error && fast.optimal && fast.total_storage_bits.to_double() <= budget) {
      ++matched;
    } else {
      o.fail(fmt("instance %g: solver %.17g vs enumeration %.17g", trial, fast.total_error, slow.total_error));
    }
    const double too_small = lo * (0.5 + 0.49 * unit(rng));
    bool raised = false;
    try {
      (void)solve_mckp(inst, too_small);
    } catch (const InfeasibleError& e) {
      raised = std::fabs(e.min_storage_bits() - lo) <= 1e-9 * lo;
    }
    infeasible_ok += raised;
  }
  if (infeasible_ok != 200) o.fail(fmt("%g/200 infeasible budgets raised the infeasibility error", infeasible_ok));
  if (o.pass) o.detail = fmt("%g/200 optimal objectives match enumeration; %g/200 infeasible budgets rejected", matched, infeasible_ok);
  return o;
}

// ---------------------------------------------------------------- 8

Outcome weighted_factorization() {
  Outcome o;
  std::mt19937_64 rng(888);
  std::uniform_int_distribution<int> dim(8, 64);
  std::uniform_int_distribution<int> eighths(2, 24);
  SvdOptions exact{SvdMethod::exact};
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t rows = static_cast<std::size_t>(dim(rng)), cols = static_cast<std::size_t>(dim(rng));
    const std::size_t rank = 1 + rng() % (std::min(rows, cols) / 2);
    const DenseMatrix a = gen_matrix(MatrixKind::gaussian, rows, cols, 9000 + static_cast<std::uint64_t>(trial));
    // Multiples of 1/8 keep every (r_i c_j)^2 exactly representable.
    Eigen::VectorXd r(static_cast<Eigen::Index>(rows)), c(static_cast<Eigen::Index>(cols));
    for (auto& v : r) v = eighths(rng) / 8.0;
    for (auto& v : c) v = eighths(rng) / 8.0;
    DenseMatrix fv(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        const double s = r(static_cast<Eigen::Index>(i)) * c(static_cast<Eigen::Index>(j));
        fv(i, j) = static_cast<float>(s * s);
      }
    const FisherDiag f(std::move(fv));
    const double got = weighted_error(a, DenseMatrix(rows, cols), factorize(a, &f, rank, exact), &f);
    const double want = oracle::two_sided_weighted_optimum(to_eigen(a), r, c, rank);
    const double rel = std::fabs(got - want) / want;
    worst = std::max(worst, rel);
    if (!(rel <= 1e-7)) o.fail(fmt("triple %g: relative gap %.3e", trial, rel));
  }
  double worst_ones = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t rows = static_cast<std::size_t>(dim(rng)), cols = static_cast<std::size_t>(dim(rng));
    const std::size_t rank = 1 + rng() % (std::min(rows, cols) / 2);
    const DenseMatrix a = gen_matrix(MatrixKind::gaussian, rows, cols, 9500 + static_cast<std::uint64_t>(trial));
    const FisherDiag ones = gen_fisher(FisherKind::uniform, rows, cols, 0);
    const DenseMatrix zero(rows, cols);
    const double w = weighted_error(a, zero, factorize(a, &ones, rank, exact), &ones);
    const double u = weighted_error(a, zero, factorize(a, nullptr, rank, exact), nullptr);
    const double rel = std::fabs(w - u) / u;
    worst_ones = std::max(worst_ones, rel);
    if (!(rel <= 1e-9)) o.fail(fmt("unit Fisher case %g: relative gap %.3e", trial, rel));
  }
  if (o.pass) o.detail = fmt("50/50 within %.2e of the oracle; unit-Fisher gap %.2e", worst, worst_ones);
  return o;
}

// ---------------------------------------------------------------- 9

Outcome randomized_svd() {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    MatrixParams p;
    p.rho = 0.9;
    const DenseMatrix a = gen_matrix(MatrixKind::decaying_spectrum, 256, 256, 30 + seed, p);
    const Eigen::MatrixXd ae = to_eigen(a);
    for (std::size_t r : {8u, 16u, 32u}) {
      SvdOptions rnd;
      rnd.seed = seed;
      const double e_rand = (ae - svd_truncated(a, r, rnd).product()).norm();
      const double e_exact = (ae - svd_truncated(a, r, SvdOptions{SvdMethod::exact}).product()).norm();
      worst = std::max(worst, e_rand / e_exact);
      if (!(e_rand <= 1.05 * e_exact)) o.fail(fmt("seed %g r=%g ratio %.4f", double(seed), double(r), e_rand / e_exact));
    }
  }
  if (o.pass) o.detail = fmt("15/15 cases; worst randomized/exact ratio %.6f", worst);
  return o;
}

// ---------------------------------------------------------------- 10

Outcome end_to_end_init() {
  Outcome o;
#ifndef LQDEC_HAVE_CLI
  o.fail("command-line tool not built");
#else
  const fs::path dir = fs::temp_directory_path() / "lqdec_acceptance_init";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::vector<std::string> args = {"init"};
  std::vector<DenseMatrix> matrices;
  for (int i = 0; i < 3; ++i) {
    matrices.push_back(gen_matrix(MatrixKind::gaussian, 128, 128, 300 + static_cast<std::uint64_t>(i)));
    const fs::path p = dir / ("w" + std::to_string(i) + ".lqt");
    write_tensor(p, matrices.back());
    args.insert(args.end(), {"--in", p.string()});
  }
  write_text_file(dir / "grid.json",
                  R"([[2,8,"fp32",64,256],[3,8,"fp32",64,256],[4,8,"fp32",64,256],)"
                  R"([2,4,"fp16",16,16],[3,4,"bf16",32,64],[4,2,"bf16",64,256]])");
  args.insert(args.end(), {"--grid", (dir / "grid.json").string(), "--budget", "3.0", "--rank", "64", "--out-dir",
                           (dir / "out").string()});
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (code != 0) {
    o.fail("init exited with " + std::to_string(code) + ": " + err.str());
    return o;
  }
  const SweepTable t = sweep_table_from_json(read_text_file(dir / "out" / "table.json"));
  const AllocSolution s = alloc_solution_from_json(read_text_file(dir / "out" / "solution.json"));
  const double budget = 3.0 * 3 * 128 * 128;
  if (!(s.total_storage_bits.to_double() <= budget)) o.fail("assignment exceeds the budget");
  if (!s.optimal) o.fail("solver did not prove optimality");
  const AllocSolution ref = brute_force_mckp(t, budget);
  if (ref.total_error != s.total_error) o.fail(fmt("objective %.17g vs enumeration %.17g", s.total_error, ref.total_error));
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const fs::path m = dir / "out" / "matrices" / ("w" + std::to_string(i));
    const QuantizedMatrix q = read_quantized(m / "q.lqq");
    const LowRankFactors f{read_tensor(m / "l1.lqt"), read_tensor(m / "l2.lqt")};
    if (!(q.config() == t.configs[s.assignment[i]])) o.fail(fmt("matrix %g artifact has the wrong config", double(i)));
    const double e = weighted_error(matrices[i], dequantize(q), f, nullptr);
    const double want = std::sqrt(t.errors[i][s.assignment[i]]);
    const double rel = std::fabs(e - want) / want;
    worst = std::max(worst, rel);
    if (!(rel <= 1e-6)) o.fail(fmt("matrix %g: recomputed error off by %.3e relative", double(i), rel));
  }
  std::string assignment;
  for (auto a : s.assignment) assignment += (assignment.empty() ? "" : " ") + t.configs[a].to_string();
  if (o.pass) {
    o.detail = fmt("storage %.0f <= %.0f bits, optimal, max artifact error gap %.1e; ",
                   s.total_storage_bits.to_double(), budget, worst) + "configs [" + assignment + "]";
  }
#endif
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "storage-rate", 0.001, storage_rate},
      {2, "effective-bits", 1.0, effective_bits},
      {3, "codebook-and-quantile", 10.0, codebooks},
      {4, "quantization-round-trips", 30.0, round_trips},
      {5, "lq-beats-quantize-only", 300.0, lq_vs_quantize},
      {6, "rank-monotonicity", 300.0, rank_monotone},
      {7, "mckp-exactness", 60.0, mckp_exact},
      {8, "weighted-factorization", 60.0, weighted_factorization},
      {9, "randomized-svd-quality", 30.0, randomized_svd},
      {10, "end-to-end-init", 120.0, end_to_end_init},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass && secs >= c.time_limit_s) o.fail(fmt("took %.3fs, limit %.3fs", secs, c.time_limit_s));
    failed += !o.pass;
    std::printf("%s [%2d] %-26s %9.3fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
