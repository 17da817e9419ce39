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
#include <cmath>

#include "doctest.h"
#include "lqdec/error.hpp"
#include "lqdec/generators.hpp"
#include "lqdec/lq.hpp"

using namespace lqdec;

namespace {

double fro(const DenseMatrix& m) { return to_eigen(m).norm(); }

void check_trace_shape(const LqResult& r) {
  REQUIRE_FALSE(r.error_trace.empty());
  const auto& t = r.error_trace;
  for (double e : t) CHECK(e >= 0.0);
  CHECK(r.chosen_iteration < t.size());
  CHECK(r.final_error() == *std::min_element(t.begin(), t.end()));
  // Only the last recorded entry may rise, and only when that is the stop reason.
  for (std::size_t i = 1; i + 1 < t.size(); ++i) CHECK(t[i] <= t[i - 1]);
  if (t.size() >= 2 && t.back() > t[t.size() - 2]) CHECK(r.reason == StopReason::error_increased);
}

}  // namespace

TEST_CASE("exact low-rank input stops at zero error") {
  MatrixParams p;
  p.rank = 8;
  const DenseMatrix w = gen_matrix(MatrixKind::low_rank, 64, 48, 2, p);
  LqOptions o;
  o.rank = 8;
  const auto r = lq_decompose(w, nullptr, o);
  CHECK(r.error_trace.front() <= 1e-4 * fro(w));
  CHECK(r.reason == StopReason::zero_error);
  check_trace_shape(r);
}

TEST_CASE("on-grid fixture with rank one") {
  const DenseMatrix w = gen_matrix(MatrixKind::on_grid, 64, 64, 4);
  LqOptions o;
  o.rank = 1;
  o.max_iters = 1;
  const auto r = lq_decompose(w, nullptr, o);
  REQUIRE(r.error_trace.size() == 1);
  CHECK(r.reason == StopReason::max_iters);
  // Error of the returned pair never exceeds quantizing the residual alone.
  const Eigen::MatrixXd resid = to_eigen(w) - r.factors.product();
  const double q_only = quantize_only_error(from_eigen(resid), nullptr, o.config);
  CHECK(r.final_error() <= q_only * (1 + 1e-6) + 1e-6);
}

TEST_CASE("LQ beats quantize-only on Gaussian matrices") {
  const QuantConfig cfg = parse_quant_config("3,8,fp32,64,256");
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const DenseMatrix w = gen_matrix(MatrixKind::gaussian, 128, 128, seed);
    LqOptions o;
    o.config = cfg;
    o.rank = 16;
    o.svd.seed = seed;
    const auto r = lq_decompose(w, nullptr, o);
    check_trace_shape(r);
    CHECK(r.final_error() < quantize_only_error(w, nullptr, cfg));
  }
}

TEST_CASE("final error is consistent with the returned snapshot") {
  const DenseMatrix w = gen_matrix(MatrixKind::gaussian, 64, 96, 3);
  const FisherDiag f = gen_fisher(FisherKind::random_nonneg, 64, 96, 3);
  for (const FisherDiag* fp : {static_cast<const FisherDiag*>(nullptr), &f}) {
    LqOptions o;
    o.rank = 8;
    o.max_iters = 6;
    const auto r = lq_decompose(w, fp, o);
    check_trace_shape(r);
    const double recomputed = weighted_error(w, dequantize(r.q), r.factors, fp);
    CHECK(recomputed == doctest::Approx(r.final_error()).epsilon(1e-9));
  }
}

TEST_CASE("rank helps on a fixed fixture") {
  const DenseMatrix w = gen_matrix(MatrixKind::gaussian, 128, 128, 7);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t rank : {4u, 16u, 64u}) {
    LqOptions o;
    o.rank = rank;
    o.svd.method = SvdMethod::exact;
    const double e = lq_decompose(w, nullptr, o).final_error();
    CHECK(e <= prev);
    prev = e;
  }
}

TEST_CASE("deterministic for a fixed seed") {
  const DenseMatrix w = gen_matrix(MatrixKind::gaussian, 48, 64, 1);
  LqOptions o;
  o.rank = 4;
  o.max_iters = 5;
  o.svd.seed = 99;
  const auto a = lq_decompose(w, nullptr, o);
  const auto b = lq_decompose(w, nullptr, o);
  CHECK(a.error_trace == b.error_trace);
  CHECK(a.q == b.q);
  CHECK(a.factors.left.bit_equal(b.factors.left));
}

TEST_CASE("quantized initialization") {
  const DenseMatrix w = gen_matrix(MatrixKind::gaussian, 64, 64, 5);
  LqOptions o;
  o.rank = 8;
  o.init = LqInit::quantized;
  const auto r = lq_decompose(w, nullptr, o);
  check_trace_shape(r);
  CHECK(r.final_error() < quantize_only_error(w, nullptr, o.config));
  CHECK(parse_lq_init("quantized") == LqInit::quantized);
  CHECK(parse_lq_init("zero") == LqInit::zero);
  CHECK_THROWS_AS(parse_lq_init("random"), ArgumentError);
}

TEST_CASE("invalid arguments") {
  const DenseMatrix w = gen_matrix(MatrixKind::gaussian, 8, 8, 5);
  LqOptions o;
  o.rank = 9;
  CHECK_THROWS_AS(lq_decompose(w, nullptr, o), ArgumentError);
  o.rank = 0;
  CHECK_THROWS_AS(lq_decompose(w, nullptr, o), ArgumentError);
  o.rank = 2;
  o.max_iters = 0;
  CHECK_THROWS_AS(lq_decompose(w, nullptr, o), ArgumentError);
  o.max_iters = 3;
  o.config.first_bits = 5;
  CHECK_THROWS_AS(lq_decompose(w, nullptr, o), ArgumentError);
  const FisherDiag f = gen_fisher(FisherKind::uniform, 8, 7, 0);
  CHECK_THROWS_AS(lq_decompose(w, &f, LqOptions{kNf4Config, 2}), ArgumentError);
}

TEST_CASE("stop reason names") {
  CHECK(to_string(StopReason::error_increased) == "error-increased");
  CHECK(to_string(StopReason::max_iters) == "max-iters");
  CHECK(to_string(StopReason::zero_error) == "zero-error");
}
