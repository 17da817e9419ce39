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

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lqdec/lqdec.hpp"

namespace lqdec::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

#ifndef LQDEC_VERSION
#define LQDEC_VERSION "unknown"
#endif

// Record of one invocation, written next to the command's outputs.
class Manifest {
 public:
  Manifest(std::string command, const std::vector<std::string>& args) : start_(Clock::now()) {
    doc_["command"] = std::move(command);
    doc_["version"] = LQDEC_VERSION;
    doc_["args"] = args;
    doc_["inputs"] = json::array();
    doc_["params"] = json::object();
    doc_["outputs"] = json::array();
  }

  void input(const fs::path& p) { doc_["inputs"].push_back(p.string()); }
  void output(const fs::path& p) { doc_["outputs"].push_back(p.string()); }
  template <class T>
  void param(const std::string& key, const T& value) {
    doc_["params"][key] = value;
  }
  void result(const std::string& key, json value) { doc_["results"][key] = std::move(value); }

  void write(const fs::path& path) {
    doc_["timing"]["elapsed_seconds"] = std::chrono::duration<double>(Clock::now() - start_).count();
    write_text_file(path, doc_.dump(2) + "\n");
  }

 private:
  json doc_;
  Clock::time_point start_;
};

fs::path manifest_beside(const fs::path& out) { return fs::path(out.string() + ".manifest.json"); }

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

// Writes to a temporary file, then renames it over `path`.
void write_atomically(const fs::path& path, std::string_view text) {
  ensure_parent(path);
  const fs::path tmp = fs::path(path.string() + ".tmp");
  write_text_file(tmp, text);
  fs::rename(tmp, path);
}

QuantConfig config_flag(const std::string& text, const char* flag) {
  try {
    return parse_quant_config(text);
  } catch (const ArgumentError& e) {
    throw ArgumentError(std::string(flag) + ": " + e.what());
  }
}

ConfigGrid grid_flag(const std::string& text, Manifest& m) {
  if (text == "default") return ConfigGrid::default_grid();
  m.input(text);
  try {
    return config_grid_from_json(read_text_file(text));
  } catch (const FormatError& e) {
    throw FormatError("--grid " + text + ": " + e.what());
  } catch (const ArgumentError& e) {
    throw FormatError("--grid " + text + ": " + e.what());
  }
}

std::size_t default_workers() {
  if (const char* env = std::getenv("LQDEC_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw ArgumentError(std::string("LQDEC_WORKERS must be a non-negative integer, got \"") + env + "\"");
  }
  return 1;
}

// Restates an infeasible budget in the flag's unit (bits per parameter).
[[noreturn]] void rethrow_infeasible(const InfeasibleError& e, double budget_bpp, std::uint64_t params) {
  std::ostringstream msg;
  msg << "--budget " << budget_bpp << " bits/param is below the smallest achievable "
      << e.min_storage_bits() / static_cast<double>(params) << " bits/param (" << e.what() << ")";
  throw InfeasibleError(msg.str(), e.min_storage_bits());
}

std::uint64_t total_params(const SweepTable& t) {
  std::uint64_t n = 0;
  for (auto v : t.sizes) n += v;
  return n;
}

std::vector<DenseMatrix> read_matrices(const std::vector<std::string>& paths, Manifest& m) {
  std::vector<DenseMatrix> out;
  for (const auto& p : paths) {
    m.input(p);
    out.push_back(read_tensor(p));
  }
  return out;
}

std::vector<FisherDiag> read_fishers(const std::vector<std::string>& paths, std::size_t expected, Manifest& m) {
  if (!paths.empty() && paths.size() != expected) {
    throw ArgumentError("--fisher: got " + std::to_string(paths.size()) + " files for " + std::to_string(expected) +
                        " matrices");
  }
  std::vector<FisherDiag> out;
  for (const auto& p : paths) {
    m.input(p);
    out.push_back(read_fisher(p));
  }
  return out;
}

// File stems as matrix labels; repeated stems get an index suffix.
std::vector<std::string> labels_for(const std::vector<std::string>& paths) {
  std::vector<std::string> stems;
  std::map<std::string, int> count;
  for (const auto& p : paths) {
    std::string stem = fs::path(p).stem().string();
    if (stem.empty()) stem = "matrix";
    ++count[stem];
    stems.push_back(std::move(stem));
  }
  for (std::size_t i = 0; i < stems.size(); ++i) {
    if (count[stems[i]] > 1) stems[i] += "_" + std::to_string(i);
  }
  return stems;
}

void relabel(SweepTable& t, const std::vector<std::string>& labels) {
  for (std::size_t i = 0; i < t.shapes.size() && i < labels.size(); ++i) t.shapes[i].label = labels[i];
}

void write_decomposition(const fs::path& dir, const LqResult& r, const LqOptions& o, Manifest& m) {
  fs::create_directories(dir);
  write_quantized(dir / "q.lqq", r.q);
  write_tensor(dir / "l1.lqt", r.factors.left);
  write_tensor(dir / "l2.lqt", r.factors.right);
  write_text_file(dir / "trace.json", trace_json(r, o) + "\n");
  for (const char* name : {"q.lqq", "l1.lqt", "l2.lqt", "trace.json"}) m.output(dir / name);
}

// ---------------------------------------------------------------- commands

struct GenMatrixArgs {
  std::string kind = "gaussian";
  std::size_t rows = 0, cols = 0;
  std::uint64_t seed = 0;
  double rho = 0.9;
  std::size_t rank = 1;
  std::string grid_config = kNf4Config.to_string();
  std::string out;
};

int cmd_gen_matrix(const GenMatrixArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  Manifest m("gen matrix", args);
  MatrixParams p;
  p.rho = a.rho;
  p.rank = a.rank;
  p.grid = config_flag(a.grid_config, "--grid-config");
  const MatrixKind kind = parse_matrix_kind(a.kind);
  const DenseMatrix w = gen_matrix(kind, a.rows, a.cols, a.seed, p);
  ensure_parent(a.out);
  write_tensor(a.out, w);
  m.param("kind", std::string(to_string(kind)));
  m.param("rows", a.rows);
  m.param("cols", a.cols);
  m.param("seed", a.seed);
  if (kind == MatrixKind::decaying_spectrum) m.param("rho", a.rho);
  if (kind == MatrixKind::low_rank) m.param("rank", a.rank);
  if (kind == MatrixKind::on_grid) m.param("grid_config", p.grid.to_string());
  m.output(a.out);
  m.write(manifest_beside(a.out));
  out << "wrote " << a.out << " (" << a.rows << "x" << a.cols << ")\n";
  return kOk;
}

struct GenFisherArgs {
  std::string kind = "uniform";
  std::size_t rows = 0, cols = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen_fisher(const GenFisherArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  Manifest m("gen fisher", args);
  const FisherKind kind = parse_fisher_kind(a.kind);
  ensure_parent(a.out);
  write_fisher(a.out, gen_fisher(kind, a.rows, a.cols, a.seed));
  m.param("kind", std::string(to_string(kind)));
  m.param("rows", a.rows);
  m.param("cols", a.cols);
  m.param("seed", a.seed);
  m.output(a.out);
  m.write(manifest_beside(a.out));
  out << "wrote " << a.out << "\n";
  return kOk;
}

struct GenPresetArgs {
  std::string name;
  std::string out;
};

int cmd_gen_preset(const GenPresetArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  Manifest m("gen preset", args);
  const ModelPreset p = preset(a.name);
  ensure_parent(a.out);
  write_text_file(a.out, to_json(p) + "\n");
  m.param("name", a.name);
  m.output(a.out);
  m.write(manifest_beside(a.out));
  out << "wrote " << a.out << " (" << p.matrices.size() << " matrices, " << p.total_params() << " params)\n";
  return kOk;
}

struct QuantizeArgs {
  std::string in;
  std::string config = kNf4Config.to_string();
  std::string out;
};

int cmd_quantize(const QuantizeArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  Manifest m("quantize", args);
  const QuantConfig cfg = config_flag(a.config, "--config");
  m.input(a.in);
  const DenseMatrix w = read_tensor(a.in);
  const QuantizedMatrix q = quantize_nf(w, cfg);
  ensure_parent(a.out);
  write_quantized(a.out, q);

  const ContainerBytes bytes = exact_container_bytes(w.rows(), w.cols(), cfg);
  const Rational bpp = storage_bits_per_param(cfg);
  json summary;
  summary["rows"] = w.rows();
  summary["cols"] = w.cols();
  summary["config"] = cfg.to_string();
  summary["bits_per_param"] = bpp.to_double();
  summary["bits_per_param_exact"] = bpp.to_string();
  summary["container_bytes"] = {{"header", bytes.header},
                                {"codes", bytes.codes},
                                {"scale_codes", bytes.scale_codes},
                                {"group_scales", bytes.group_scales},
                                {"total", bytes.total()}};
  summary["relative_error"] = relative_frobenius_error(dequantize(q), w);
  m.param("config", cfg.to_string());
  m.result("summary", summary);
  m.output(a.out);
  m.write(manifest_beside(a.out));
  out << summary.dump(2) << "\n";
  return kOk;
}

struct DequantizeArgs {
  std::string in;
  std::string out;
};

int cmd_dequantize(const DequantizeArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  Manifest m("dequantize", args);
  m.input(a.in);
  const QuantizedMatrix q = read_quantized(a.in);
  ensure_parent(a.out);
  write_tensor(a.out, dequantize(q));
  m.output(a.out);
  m.write(manifest_beside(a.out));
  out << "wrote " << a.out << " (" << q.rows() << "x" << q.cols() << ")\n";
  return kOk;
}

struct SolverArgs {
  std::size_t rank = 64;
  std::size_t max_iters = 50;
  std::uint64_t seed = 0;
  std::string svd = "randomized";
};

void add_solver_flags(CLI::App* app, SolverArgs& s) {
  app->add_option("--rank", s.rank, "Low-rank component rank")->capture_default_str();
  app->add_option("--max-iters", s.max_iters, "Alternation limit per decomposition")->capture_default_str();
  app->add_option("--seed", s.seed, "Seed for the randomized SVD")->capture_default_str();
  app->add_option("--svd", s.svd, "exact or randomized")->capture_default_str();
}

void record_solver(Manifest& m, const SolverArgs& s) {
  m.param("rank", s.rank);
  m.param("max_iters", s.max_iters);
  m.param("seed", s.seed);
  m.param("svd", s.svd);
}

struct DecomposeArgs {
  std::string in;
  std::string fisher;
  std::string config = kNf4Config.to_string();
  std::string init = "zero";
  SolverArgs solver;
  std::string out_dir;
};

int cmd_decompose(const DecomposeArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  Manifest m("decompose", args);
  LqOptions o;
  o.config = config_flag(a.config, "--config");
  o.rank = a.solver.rank;
  o.max_iters = a.solver.max_iters;
  o.init = parse_lq_init(a.init);
  o.svd.method = parse_svd_method(a.solver.svd);
  o.svd.seed = a.solver.seed;

  m.input(a.in);
  const DenseMatrix w = read_tensor(a.in);
  std::optional<FisherDiag> f;
  if (!a.fisher.empty()) {
    m.input(a.fisher);
    f = read_fisher(a.fisher);
  }
  const LqResult r = lq_decompose(w, f ? &*f : nullptr, o);
  write_decomposition(a.out_dir, r, o, m);

  m.param("config", o.config.to_string());
  m.param("init", std::string(to_string(o.init)));
  record_solver(m, a.solver);
  json summary = {{"final_error", r.final_error()},
                  {"iterations", r.error_trace.size()},
                  {"chosen_iteration", r.chosen_iteration},
                  {"stop_reason", std::string(to_string(r.reason))},
                  {"quantize_only_error", quantize_only_error(w, f ? &*f : nullptr, o.config)}};
  m.result("summary", summary);
  m.write(fs::path(a.out_dir) / "manifest.json");
  out << summary.dump(2) << "\n";
  return kOk;
}

struct SweepArgs {
  std::vector<std::string> in;
  std::vector<std::string> fisher;
  std::string grid = "default";
  SolverArgs solver;
  std::optional<std::size_t> workers;
  bool resume = false;
  std::string out;
};

SweepOptions sweep_options(const SolverArgs& s, std::optional<std::size_t> workers) {
  SweepOptions o;
  o.rank = s.rank;
  o.max_iters = s.max_iters;
  o.svd.method = parse_svd_method(s.svd);
  o.svd.seed = s.seed;
  o.workers = workers ? *workers : default_workers();
  return o;
}

int cmd_sweep(const SweepArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  Manifest m("sweep", args);
  const ConfigGrid grid = grid_flag(a.grid, m);
  SweepOptions o = sweep_options(a.solver, a.workers);
  const auto matrices = read_matrices(a.in, m);
  const auto fishers = read_fishers(a.fisher, matrices.size(), m);
  const auto labels = labels_for(a.in);

  std::optional<SweepTable> resume;
  if (a.resume && fs::exists(a.out)) {
    resume = sweep_table_from_json(read_text_file(a.out));
  }
  o.on_row_complete = [&](const SweepTable& snapshot) {
    SweepTable t = snapshot;
    relabel(t, labels);
    write_atomically(a.out, to_json(t) + "\n");
  };
  SweepTable t = sweep(matrices, fishers, grid, o, resume ? &*resume : nullptr);
  relabel(t, labels);
  write_atomically(a.out, to_json(t) + "\n");

  m.param("grid", a.grid);
  m.param("grid_size", grid.size());
  m.param("workers", o.workers);
  m.param("fisher_weighted", !fishers.empty());
  m.param("resumed", resume.has_value());
  record_solver(m, a.solver);
  m.output(a.out);
  m.write(manifest_beside(a.out));
  out << "wrote " << a.out << " (" << t.num_matrices() << " matrices x " << t.num_configs() << " configs)\n";
  return kOk;
}

struct AllocateArgs {
  std::string table;
  double budget = 0.0;
  bool verify = false;
  bool no_prune = false;
  std::uint64_t node_limit = MckpOptions{}.node_limit;
  std::string out;
};

int cmd_allocate(const AllocateArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  Manifest m("allocate", args);
  m.input(a.table);
  const SweepTable t = sweep_table_from_json(read_text_file(a.table));
  if (!t.is_complete()) throw FormatError(a.table + ": sweep table has unfinished rows; resume the sweep first");
  MckpOptions mo;
  mo.prune_dominated = !a.no_prune;
  mo.node_limit = a.node_limit;
  const double budget = budget_bits_for(t, a.budget);
  AllocSolution s;
  try {
    s = solve_mckp(t, budget, mo);
  } catch (const InfeasibleError& e) {
    rethrow_infeasible(e, a.budget, total_params(t));
  }
  if (a.verify) {
    const AllocSolution ref = brute_force_mckp(t, budget);
    if (ref.total_error != s.total_error) {
      throw NumericalError("allocation " + std::to_string(s.total_error) + " differs from exhaustive optimum " +
                           std::to_string(ref.total_error));
    }
    m.result("verified_against_brute_force", true);
  }
  ensure_parent(a.out);
  write_text_file(a.out, to_json(s) + "\n");
  m.param("budget_bits_per_param", a.budget);
  m.param("budget_bits", budget);
  m.param("prune_dominated", mo.prune_dominated);
  m.param("node_limit", mo.node_limit);
  m.output(a.out);
  m.write(manifest_beside(a.out));
  out << "total_error " << s.total_error << "  storage_bits " << s.total_storage_bits.to_double() << " / "
      << budget << "  optimal " << (s.optimal ? "true" : "false") << "\n";
  return kOk;
}

struct InitArgs {
  std::vector<std::string> in;
  std::vector<std::string> fisher;
  std::string grid = "default";
  SolverArgs solver;
  std::optional<std::size_t> workers;
  double budget = 3.0;
  std::size_t lora_rank = 0;
  std::string lora_format = "nf8";
  bool resume = false;
  std::string out_dir;
};

int cmd_init(const InitArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  Manifest m("init", args);
  const ConfigGrid grid = grid_flag(a.grid, m);
  InitOptions o;
  o.sweep = sweep_options(a.solver, a.workers);
  o.budget_bits_per_param = a.budget;
  const LoraFormat lora = parse_lora_format(a.lora_format);
  const auto matrices = read_matrices(a.in, m);
  const auto fishers = read_fishers(a.fisher, matrices.size(), m);
  const auto labels = labels_for(a.in);

  const fs::path dir = a.out_dir;
  fs::create_directories(dir);
  const fs::path table_path = dir / "table.json";
  std::optional<SweepTable> resume;
  if (a.resume && fs::exists(table_path)) resume = sweep_table_from_json(read_text_file(table_path));
  o.sweep.on_row_complete = [&](const SweepTable& snapshot) {
    SweepTable t = snapshot;
    relabel(t, labels);
    write_atomically(table_path, to_json(t) + "\n");
  };

  InitResult r;
  try {
    r = lq_lora_init(matrices, fishers, grid, o, resume ? &*resume : nullptr);
  } catch (const InfeasibleError& e) {
    std::uint64_t params = 0;
    for (const auto& w : matrices) params += w.size();
    rethrow_infeasible(e, a.budget, params);
  }
  relabel(r.table, labels);
  write_atomically(table_path, to_json(r.table) + "\n");
  write_text_file(dir / "solution.json", to_json(r.solution) + "\n");
  m.output(table_path);
  m.output(dir / "solution.json");

  for (std::size_t i = 0; i < r.decompositions.size(); ++i) {
    const LqOptions lo = cell_options(o.sweep, r.table.configs[r.solution.assignment[i]]);
    write_decomposition(dir / "matrices" / labels[i], r.decompositions[i], lo, m);
  }
  const std::size_t rank = a.lora_rank == 0 ? a.solver.rank : a.lora_rank;
  const StorageReport rep = storage_report(r.solution, r.table, rank, lora_bits_per_param(lora).to_double());
  write_text_file(dir / "report.json", to_json(rep) + "\n");
  m.output(dir / "report.json");

  m.param("grid", a.grid);
  m.param("grid_size", grid.size());
  m.param("budget_bits_per_param", a.budget);
  m.param("workers", o.sweep.workers);
  m.param("fisher_weighted", !fishers.empty());
  m.param("lora_format", std::string(to_string(lora)));
  record_solver(m, a.solver);
  m.result("total_error", r.solution.total_error);
  m.result("optimal", r.solution.optimal);
  m.write(dir / "manifest.json");

  out << "assignment:\n";
  for (std::size_t i = 0; i < r.solution.assignment.size(); ++i) {
    out << "  " << labels[i] << "  " << r.table.configs[r.solution.assignment[i]].to_string() << "\n";
  }
  out << format_report(rep);
  return kOk;
}

struct ReportArgs {
  std::string preset;
  std::optional<double> uniform_bits;
  std::string table;
  std::string solution;
  std::size_t rank = 64;
  std::string lora_format = "nf8";
  std::string out;
};

int cmd_report(const ReportArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  Manifest m("report", args);
  const LoraFormat lora = parse_lora_format(a.lora_format);
  const double lora_bits = lora_bits_per_param(lora).to_double();
  StorageReport rep;
  if (!a.preset.empty()) {
    if (!a.uniform_bits) throw ArgumentError("--preset requires --uniform-bits");
    if (!a.table.empty() || !a.solution.empty()) {
      throw ArgumentError("--preset cannot be combined with --table/--solution");
    }
    const ModelPreset p = preset(a.preset);
    const std::vector<double> bits(p.matrices.size(), *a.uniform_bits);
    rep = storage_report(p.matrices, bits, a.rank, lora_bits);
    m.param("preset", a.preset);
    m.param("uniform_bits", *a.uniform_bits);
  } else if (!a.table.empty() && !a.solution.empty()) {
    m.input(a.table);
    m.input(a.solution);
    const SweepTable t = sweep_table_from_json(read_text_file(a.table));
    const AllocSolution s = alloc_solution_from_json(read_text_file(a.solution));
    rep = storage_report(s, t, a.rank, lora_bits);
  } else {
    throw ArgumentError("report needs --preset with --uniform-bits, or --table with --solution");
  }
  m.param("rank", a.rank);
  m.param("lora_format", std::string(to_string(lora)));
  if (!a.out.empty()) {
    ensure_parent(a.out);
    write_text_file(a.out, to_json(rep) + "\n");
    m.output(a.out);
    m.write(manifest_beside(a.out));
  }
  out << format_report(rep);
  return kOk;
}

struct BenchArgs {
  std::size_t rows = 1024, cols = 1024;
  std::vector<std::size_t> batches = {1, 8, 32, 128};
  std::string config = kNf4Config.to_string();
  std::size_t rank = 64;
  std::size_t repeats = 5;
  std::uint64_t seed = 0;
  std::string out;
};

template <class F>
double median_seconds(std::size_t repeats, F&& f) {
  std::vector<double> t;
  for (std::size_t i = 0; i < repeats; ++i) {
    const auto start = Clock::now();
    f();
    t.push_back(std::chrono::duration<double>(Clock::now() - start).count());
  }
  std::nth_element(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(t.size() / 2), t.end());
  return t[t.size() / 2];
}

int cmd_bench(const BenchArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  Manifest m("bench", args);
  if (a.repeats < 1) throw ArgumentError("--repeats must be >= 1");
  const QuantConfig cfg = config_flag(a.config, "--config");
  const DenseMatrix w = gen_matrix(MatrixKind::gaussian, a.rows, a.cols, a.seed);
  const QuantizedMatrix q = quantize_nf(w, cfg);
  const DenseMatrix wq = dequantize(q);
  std::optional<LowRankFactors> factors;
  if (a.rank > 0) {
    factors = LowRankFactors{gen_matrix(MatrixKind::gaussian, a.rows, a.rank, a.seed + 1),
                             gen_matrix(MatrixKind::gaussian, a.rank, a.cols, a.seed + 2)};
  }
  const LowRankFactors* fp = factors ? &*factors : nullptr;

  json results = json::array();
  double worst = 0.0;
  for (std::size_t n : a.batches) {
    const DenseMatrix x = gen_matrix(MatrixKind::gaussian, n, a.rows, a.seed + 3 + n);
    DenseMatrix fused, dense;
    const double t_fused = median_seconds(a.repeats, [&] { fused = matmul_dequant(x, q, fp); });
    const double t_dense = median_seconds(a.repeats, [&] { dense = matmul_dense(x, wq, fp); });
    const double t_dequant = median_seconds(a.repeats, [&] { (void)dequantize(q); });
    const double rel = relative_frobenius_error(fused, dense);
    worst = std::max(worst, rel);
    results.push_back({{"batch", n},
                       {"quantized_seconds", t_fused},
                       {"dense_seconds", t_dense},
                       {"dequantize_seconds", t_dequant},
                       {"relative_error", rel}});
  }
  json doc = {{"rows", a.rows},       {"cols", a.cols},       {"config", cfg.to_string()},
              {"rank", a.rank},       {"repeats", a.repeats}, {"seed", a.seed},
              {"results", results},   {"max_relative_error", worst}};
  if (!a.out.empty()) {
    ensure_parent(a.out);
    write_text_file(a.out, doc.dump(2) + "\n");
    m.output(a.out);
    m.param("config", cfg.to_string());
    m.result("max_relative_error", worst);
    m.write(manifest_beside(a.out));
  }
  out << doc.dump(2) << "\n";
  if (worst > 1e-5) {
    throw NumericalError("quantized matmul deviates from the dense reference by " + std::to_string(worst));
  }
  return kOk;
}

struct ReplayArgs {
  std::string manifest;
};

int run_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_replay(const ReplayArgs& a, std::ostream& out, std::ostream& err) {
  json doc;
  try {
    doc = json::parse(read_text_file(a.manifest));
  } catch (const json::exception& e) {
    throw FormatError(a.manifest + ": " + e.what());
  }
  if (!doc.contains("args") || !doc["args"].is_array()) throw FormatError(a.manifest + ": no \"args\" array");
  const auto replay = doc["args"].get<std::vector<std::string>>();
  if (!replay.empty() && replay.front() == "replay") throw FormatError(a.manifest + ": refusing to replay a replay");
  return run_args(replay, out, err);
}

// ------------------------------------------------------------- dispatcher

int run_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"lqdec: low-rank plus quantized matrix decomposition"};
  app.name("lqdec");
  app.require_subcommand(1);
  app.set_version_flag("--version", LQDEC_VERSION);

  auto* gen = app.add_subcommand("gen", "Generate fixture matrices, Fisher diagonals and presets");
  gen->require_subcommand(1);

  GenMatrixArgs gm;
  auto* gen_m = gen->add_subcommand("matrix", "Write a synthetic matrix as LQT1");
  gen_m->add_option("--kind", gm.kind, "gaussian, decaying-spectrum, low-rank or on-grid")->capture_default_str();
  gen_m->add_option("--rows", gm.rows)->required();
  gen_m->add_option("--cols", gm.cols)->required();
  gen_m->add_option("--seed", gm.seed)->capture_default_str();
  gen_m->add_option("--rho", gm.rho, "Spectrum decay for decaying-spectrum")->capture_default_str();
  gen_m->add_option("--rank", gm.rank, "Rank for low-rank")->capture_default_str();
  gen_m->add_option("--grid-config", gm.grid_config, "Config the on-grid fixture targets")->capture_default_str();
  gen_m->add_option("--out", gm.out)->required();

  GenFisherArgs gf;
  auto* gen_f = gen->add_subcommand("fisher", "Write a Fisher diagonal as LQT1");
  gen_f->add_option("--kind", gf.kind, "uniform, separable or random-nonneg")->capture_default_str();
  gen_f->add_option("--rows", gf.rows)->required();
  gen_f->add_option("--cols", gf.cols)->required();
  gen_f->add_option("--seed", gf.seed)->capture_default_str();
  gen_f->add_option("--out", gf.out)->required();

  GenPresetArgs gp;
  auto* gen_p = gen->add_subcommand("preset", "Write a model shape preset as JSON");
  gen_p->add_option("--name", gp.name, "llama2-7b-linear or llama2-70b-linear")->required();
  gen_p->add_option("--out", gp.out)->required();

  QuantizeArgs qa;
  auto* quant = app.add_subcommand("quantize", "NF-quantize an LQT1 matrix into an LQQ1 container");
  quant->add_option("--in", qa.in)->required();
  quant->add_option("--config", qa.config, "b0,b1,b2,B0,B1")->capture_default_str();
  quant->add_option("--out", qa.out)->required();

  DequantizeArgs da;
  auto* deq = app.add_subcommand("dequantize", "Expand an LQQ1 container back to LQT1");
  deq->add_option("--in", da.in)->required();
  deq->add_option("--out", da.out)->required();

  DecomposeArgs dc;
  auto* dec = app.add_subcommand("decompose", "Quantized plus low-rank decomposition of one matrix");
  dec->add_option("--in", dc.in)->required();
  dec->add_option("--fisher", dc.fisher, "Optional Fisher diagonal (LQT1)");
  dec->add_option("--config", dc.config, "b0,b1,b2,B0,B1")->capture_default_str();
  dec->add_option("--init", dc.init, "zero or quantized")->capture_default_str();
  add_solver_flags(dec, dc.solver);
  dec->add_option("--out-dir", dc.out_dir)->required();

  SweepArgs sw;
  auto* swp = app.add_subcommand("sweep", "Decomposition error for every (matrix, config) pair");
  swp->add_option("--in", sw.in, "Matrices (LQT1), repeatable")->required();
  swp->add_option("--fisher", sw.fisher, "Fisher diagonals matching --in, repeatable");
  swp->add_option("--grid", sw.grid, "default or a JSON config list")->capture_default_str();
  add_solver_flags(swp, sw.solver);
  swp->add_option("--workers", sw.workers, "Worker threads (default: LQDEC_WORKERS or 1; 0 = all cores)");
  swp->add_flag("--resume", sw.resume, "Continue from the completed rows of an existing --out table");
  swp->add_option("--out", sw.out)->required();

  AllocateArgs al;
  auto* alc = app.add_subcommand("allocate", "Pick one config per matrix under a storage budget");
  alc->add_option("--table", al.table)->required();
  alc->add_option("--budget", al.budget, "Average bits per quantized parameter")->required();
  alc->add_flag("--verify", al.verify, "Check the optimum by exhaustive enumeration");
  alc->add_flag("--no-prune", al.no_prune, "Disable dominance pruning");
  alc->add_option("--node-limit", al.node_limit)->capture_default_str();
  alc->add_option("--out", al.out)->required();

  InitArgs in;
  auto* ini = app.add_subcommand("init", "Sweep, allocate and decompose a set of matrices");
  ini->add_option("--in", in.in, "Matrices (LQT1), repeatable")->required();
  ini->add_option("--fisher", in.fisher, "Fisher diagonals matching --in, repeatable");
  ini->add_option("--grid", in.grid, "default or a JSON config list")->capture_default_str();
  add_solver_flags(ini, in.solver);
  ini->add_option("--workers", in.workers, "Worker threads (default: LQDEC_WORKERS or 1; 0 = all cores)");
  ini->add_option("--budget", in.budget, "Average bits per quantized parameter")->capture_default_str();
  ini->add_option("--lora-rank", in.lora_rank, "Rank used in the storage report (default: --rank)");
  ini->add_option("--lora-format", in.lora_format, "nf8 or fp16")->capture_default_str();
  ini->add_flag("--resume", in.resume, "Reuse completed rows of <out-dir>/table.json");
  ini->add_option("--out-dir", in.out_dir)->required();

  ReportArgs rp;
  auto* rep = app.add_subcommand("report", "Storage breakdown and effective bits");
  rep->add_option("--preset", rp.preset, "llama2-7b-linear or llama2-70b-linear");
  rep->add_option("--uniform-bits", rp.uniform_bits, "Quantized bits per parameter for every preset matrix");
  rep->add_option("--table", rp.table);
  rep->add_option("--solution", rp.solution);
  rep->add_option("--rank", rp.rank, "LoRA rank")->capture_default_str();
  rep->add_option("--lora-format", rp.lora_format, "nf8 or fp16")->capture_default_str();
  rep->add_option("--out", rp.out, "Optional JSON output");

  BenchArgs bn;
  auto* bch = app.add_subcommand("bench", "Time quantized against dense matrix products");
  bch->add_option("--rows", bn.rows)->capture_default_str();
  bch->add_option("--cols", bn.cols)->capture_default_str();
  bch->add_option("--batch", bn.batches, "Batch sizes")->delimiter(',')->capture_default_str();
  bch->add_option("--config", bn.config)->capture_default_str();
  bch->add_option("--rank", bn.rank, "0 disables the low-rank term")->capture_default_str();
  bch->add_option("--repeats", bn.repeats)->capture_default_str();
  bch->add_option("--seed", bn.seed)->capture_default_str();
  bch->add_option("--out", bn.out, "Optional JSON output");

  ReplayArgs ra;
  auto* rpl = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  rpl->add_option("--manifest", ra.manifest)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (gen_m->parsed()) return cmd_gen_matrix(gm, args, out);
  if (gen_f->parsed()) return cmd_gen_fisher(gf, args, out);
  if (gen_p->parsed()) return cmd_gen_preset(gp, args, out);
  if (quant->parsed()) return cmd_quantize(qa, args, out);
  if (deq->parsed()) return cmd_dequantize(da, args, out);
  if (dec->parsed()) return cmd_decompose(dc, args, out);
  if (swp->parsed()) return cmd_sweep(sw, args, out);
  if (alc->parsed()) return cmd_allocate(al, args, out);
  if (ini->parsed()) return cmd_init(in, args, out);
  if (rep->parsed()) return cmd_report(rp, args, out);
  if (bch->parsed()) return cmd_bench(bn, args, out);
  if (rpl->parsed()) return cmd_replay(ra, out, err);
  err << app.help();
  return kUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run_args(args, out, err);
  } catch (const ArgumentError& e) {
    err << "lqdec: error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    err << "lqdec: format error: " << e.what() << "\n";
    return kFormat;
  } catch (const InfeasibleError& e) {
    err << "lqdec: infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const NumericalError& e) {
    err << "lqdec: numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "lqdec: file error: " << e.what() << "\n";
    return kFormat;
  } catch (const std::exception& e) {
    err << "lqdec: internal error: " << e.what() << "\n";
    return kNumerical;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace lqdec::cli
