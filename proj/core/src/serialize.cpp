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

#include "lqdec/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lqdec/error.hpp"

namespace lqdec {
namespace {

using nlohmann::json;

json config_json(const QuantConfig& c) {
  return json::array({c.first_bits, c.second_bits, std::string(to_string(c.scale_format)), c.block_size,
                      c.group_size});
}

QuantConfig config_from(const json& j) {
  if (!j.is_array() || j.size() != 5) throw FormatError("config must be a 5-element array");
  QuantConfig c;
  c.first_bits = j[0].get<int>();
  c.second_bits = j[1].get<int>();
  if (j[2].is_string()) {
    c.scale_format = parse_float_format(j[2].get<std::string>());
  } else {
    const int tag = j[2].get<int>();
    if (tag < 0 || tag > 2) throw FormatError("scale format tag must be 0, 1 or 2");
    c.scale_format = static_cast<FloatFormat>(tag);
  }
  c.block_size = j[3].get<std::uint32_t>();
  c.group_size = j[4].get<std::uint32_t>();
  c.validate();
  return c;
}

json parse(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  } catch (const ArgumentError& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string to_json(const SweepTable& t) {
  json j;
  j["sizes"] = t.sizes;
  j["configs"] = json::array();
  for (const auto& c : t.configs) j["configs"].push_back(config_json(c));
  j["errors"] = t.errors;
  json storage = json::array();
  for (const auto& row : t.storage) {
    json r = json::array();
    for (const auto& v : row) r.push_back(v.to_double());
    storage.push_back(std::move(r));
  }
  j["storage_bits"] = std::move(storage);
  j["fisher_weighted"] = t.fisher_weighted;
  j["rank"] = t.rank;
  j["seed"] = t.seed;
  json shapes = json::array();
  for (const auto& s : t.shapes) shapes.push_back({{"label", s.label}, {"rows", s.rows}, {"cols", s.cols}});
  j["shapes"] = std::move(shapes);
  std::vector<bool> completed(t.completed.begin(), t.completed.end());
  j["completed"] = completed;
  return j.dump(1);
}

SweepTable sweep_table_from_json(std::string_view text) {
  const json j = parse(text, "sweep table");
  return guarded("sweep table", [&] {
    SweepTable t;
    t.sizes = j.at("sizes").get<std::vector<std::uint64_t>>();
    for (const auto& c : j.at("configs")) t.configs.push_back(config_from(c));
    t.errors = j.at("errors").get<std::vector<std::vector<double>>>();
    t.fisher_weighted = j.at("fisher_weighted").get<bool>();
    t.rank = j.at("rank").get<std::size_t>();
    t.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("shapes")) {
      for (const auto& s : j["shapes"]) {
        t.shapes.push_back({s.value("label", std::string()), s.at("rows").get<std::size_t>(),
                            s.at("cols").get<std::size_t>()});
      }
    }
    if (j.contains("completed")) {
      for (bool b : j["completed"].get<std::vector<bool>>()) t.completed.push_back(b);
    } else {
      t.completed.assign(t.sizes.size(), true);
    }
    // Storage is recomputed exactly and must agree with the stored numbers.
    const auto stored = j.at("storage_bits").get<std::vector<std::vector<double>>>();
    if (stored.size() != t.sizes.size()) throw FormatError("sweep table: storage_bits has the wrong row count");
    t.storage.resize(t.sizes.size());
    for (std::size_t i = 0; i < t.sizes.size(); ++i) {
      if (stored[i].size() != t.configs.size()) throw FormatError("sweep table: storage_bits row has the wrong width");
      for (std::size_t c = 0; c < t.configs.size(); ++c) {
        Rational exact = Rational(static_cast<std::int64_t>(t.sizes[i])) * storage_bits_per_param(t.configs[c]);
        if (std::fabs(exact.to_double() - stored[i][c]) > 1e-9 * std::max(1.0, std::fabs(stored[i][c]))) {
          throw FormatError("sweep table: storage_bits[" + std::to_string(i) + "][" + std::to_string(c) +
                            "] disagrees with size * bits-per-param");
        }
        t.storage[i].push_back(exact);
      }
    }
    t.validate();
    return t;
  });
}

std::string to_json(const AllocSolution& s) {
  json j;
  j["assignment"] = s.assignment;
  j["total_error"] = s.total_error;
  j["total_storage_bits"] = s.total_storage_bits.to_double();
  j["budget_bits"] = s.budget_bits;
  j["optimal"] = s.optimal;
  j["nodes"] = s.nodes;
  return j.dump(1);
}

AllocSolution alloc_solution_from_json(std::string_view text) {
  const json j = parse(text, "allocation");
  return guarded("allocation", [&] {
    AllocSolution s;
    s.assignment = j.at("assignment").get<std::vector<std::size_t>>();
    s.total_error = j.at("total_error").get<double>();
    const double bits = j.at("total_storage_bits").get<double>();
    s.total_storage_bits = Rational::from_double(bits);
    s.budget_bits = j.at("budget_bits").get<double>();
    s.optimal = j.at("optimal").get<bool>();
    s.nodes = j.value("nodes", std::uint64_t{0});
    return s;
  });
}

ConfigGrid config_grid_from_json(std::string_view text) {
  const json j = parse(text, "config grid");
  return guarded("config grid", [&] {
    const json& list = j.is_array() ? j : j.at("configs");
    std::vector<QuantConfig> configs;
    for (const auto& c : list) configs.push_back(config_from(c));
    return ConfigGrid(std::move(configs));
  });
}

std::string to_json(const ConfigGrid& g) {
  json j;
  j["configs"] = json::array();
  for (const auto& c : g.configs()) j["configs"].push_back(config_json(c));
  return j.dump(1);
}

std::string to_json(const ModelPreset& p) {
  json j;
  j["name"] = p.name;
  j["total_params"] = p.total_params();
  j["matrices"] = json::array();
  for (const auto& m : p.matrices) j["matrices"].push_back({{"label", m.label}, {"rows", m.rows}, {"cols", m.cols}});
  return j.dump(1);
}

ModelPreset model_preset_from_json(std::string_view text) {
  const json j = parse(text, "preset");
  return guarded("preset", [&] {
    ModelPreset p;
    p.name = j.value("name", std::string("custom"));
    for (const auto& m : j.at("matrices")) {
      MatrixShape s{m.value("label", std::string()), m.at("rows").get<std::size_t>(), m.at("cols").get<std::size_t>()};
      if (s.rows == 0 || s.cols == 0) throw FormatError("preset: matrix dimensions must be positive");
      p.matrices.push_back(std::move(s));
    }
    return p;
  });
}

std::string to_json(const StorageReport& r) {
  json j;
  j["quantized_params"] = r.quantized_params;
  j["lora_params"] = r.lora_params;
  j["quantized_bits"] = r.quantized_bits;
  j["lora_bits"] = r.lora_bits;
  j["quantized_bytes"] = r.quantized_bytes();
  j["lora_bytes"] = r.lora_bytes();
  j["quantized_bits_per_param"] = r.quantized_bits_per_param();
  j["lora_rank"] = r.rank;
  j["lora_bits_per_param"] = r.lora_bits_per_param;
  j["effective_bits"] = r.effective_bits();
  return j.dump(1);
}

std::string trace_json(const LqResult& r, const LqOptions& opts) {
  json j;
  j["config"] = opts.config.to_string();
  j["rank"] = opts.rank;
  j["max_iters"] = opts.max_iters;
  j["init"] = std::string(to_string(opts.init));
  j["svd_method"] = std::string(to_string(opts.svd.method));
  j["seed"] = opts.svd.seed;
  j["error_trace"] = r.error_trace;
  j["chosen_iteration"] = r.chosen_iteration;
  j["final_error"] = r.final_error();
  j["converged_reason"] = std::string(to_string(r.reason));
  return j.dump(1);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ArgumentError("cannot open " + path.string() + " for writing");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  if (!out) throw ArgumentError("failed writing " + path.string());
}

}  // namespace lqdec
