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

#include "lqdec/report.hpp"

#include <cstdio>
#include <string>

#include "lqdec/error.hpp"
#include "lqdec/quant_config.hpp"

namespace lqdec {

LoraFormat parse_lora_format(std::string_view text) {
  if (text == "fp16") return LoraFormat::fp16;
  if (text == "nf8") return LoraFormat::nf8;
  throw ArgumentError("unknown LoRA format \"" + std::string(text) + "\" (expected fp16 or nf8)");
}

std::string_view to_string(LoraFormat f) noexcept { return f == LoraFormat::fp16 ? "fp16" : "nf8"; }

Rational lora_bits_per_param(LoraFormat f) {
  if (f == LoraFormat::fp16) return Rational(16);
  return storage_bits_per_param({8, 8, FloatFormat::fp32, 64, 256});
}

double StorageReport::effective_bits() const noexcept {
  if (quantized_params == 0) return 0.0;
  return (quantized_bits + lora_bits) / static_cast<double>(quantized_params);
}

double StorageReport::quantized_bits_per_param() const noexcept {
  if (quantized_params == 0) return 0.0;
  return quantized_bits / static_cast<double>(quantized_params);
}

StorageReport storage_report(std::span<const MatrixShape> shapes, std::span<const double> bits_per_param,
                             std::size_t lora_rank, double lora_bits) {
  if (shapes.size() != bits_per_param.size()) {
    throw ArgumentError("storage_report: " + std::to_string(bits_per_param.size()) + " bit rates for " +
                        std::to_string(shapes.size()) + " matrices");
  }
  StorageReport r;
  r.rank = lora_rank;
  r.lora_bits_per_param = lora_bits;
  long double quant = 0;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (shapes[i].rows == 0 || shapes[i].cols == 0) {
      throw ArgumentError("storage_report: matrix " + std::to_string(i) + " has no shape");
    }
    r.quantized_params += shapes[i].params();
    r.lora_params += static_cast<std::uint64_t>(lora_rank) * (shapes[i].rows + shapes[i].cols);
    quant += static_cast<long double>(shapes[i].params()) * bits_per_param[i];
  }
  r.quantized_bits = static_cast<double>(quant);
  r.lora_bits = static_cast<double>(static_cast<long double>(r.lora_params) * lora_bits);
  return r;
}

StorageReport storage_report(const AllocSolution& solution, const SweepTable& table, std::size_t lora_rank,
                             double lora_bits) {
  if (table.shapes.size() != table.sizes.size() || table.shapes.empty()) {
    throw ArgumentError("storage_report: the sweep table carries no matrix shapes");
  }
  if (solution.assignment.size() != table.num_matrices()) {
    throw ArgumentError("storage_report: solution and table cover different matrices");
  }
  std::vector<double> bits;
  for (std::size_t c : solution.assignment) {
    if (c >= table.num_configs()) throw ArgumentError("storage_report: assignment index out of range");
    bits.push_back(storage_bits_per_param(table.configs[c]).to_double());
  }
  return storage_report(table.shapes, bits, lora_rank, lora_bits);
}

std::string format_report(const StorageReport& r) {
  char buf[512];
  std::string out;
  auto line = [&](const char* label, const char* params, const char* bits, const char* bytes) {
    std::snprintf(buf, sizeof buf, "%-12s %16s %20s %18s\n", label, params, bits, bytes);
    out += buf;
  };
  char p[64], b[64], y[64];
  line("component", "params", "bits", "bytes");
  std::snprintf(p, sizeof p, "%llu", static_cast<unsigned long long>(r.quantized_params));
  std::snprintf(b, sizeof b, "%.0f", r.quantized_bits);
  std::snprintf(y, sizeof y, "%.0f", r.quantized_bytes());
  line("quantized", p, b, y);
  std::snprintf(p, sizeof p, "%llu", static_cast<unsigned long long>(r.lora_params));
  std::snprintf(b, sizeof b, "%.0f", r.lora_bits);
  std::snprintf(y, sizeof y, "%.0f", r.lora_bytes());
  line("lora", p, b, y);
  std::snprintf(buf, sizeof buf, "quantized bits/param  %.6f\nlora rank             %zu\nlora bits/param       %.9f\neffective bits/param  %.6f\n",
                r.quantized_bits_per_param(), r.rank, r.lora_bits_per_param, r.effective_bits());
  out += buf;
  return out;
}

}  // namespace lqdec
