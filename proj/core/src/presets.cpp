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

#include "lqdec/presets.hpp"

#include "lqdec/error.hpp"

namespace lqdec {
namespace {

struct LayerEntry {
  const char* label;
  std::size_t rows;
  std::size_t cols;
};

ModelPreset repeat_layers(std::string name, std::size_t layers, std::initializer_list<LayerEntry> block) {
  ModelPreset p{std::move(name), {}};
  p.matrices.reserve(layers * block.size());
  for (std::size_t l = 0; l < layers; ++l) {
    for (const auto& e : block) {
      p.matrices.push_back({"layers." + std::to_string(l) + "." + e.label, e.rows, e.cols});
    }
  }
  return p;
}

}  // namespace

std::uint64_t ModelPreset::total_params() const noexcept {
  std::uint64_t total = 0;
  for (const auto& m : matrices) total += m.params();
  return total;
}

std::vector<std::string_view> preset_names() { return {"llama2-7b-linear", "llama2-70b-linear"}; }

ModelPreset preset(std::string_view name) {
  if (name == "llama2-7b-linear") {
    return repeat_layers(std::string(name), 32,
                         {{"self_attn.q_proj", 4096, 4096},
                          {"self_attn.k_proj", 4096, 4096},
                          {"self_attn.v_proj", 4096, 4096},
                          {"self_attn.o_proj", 4096, 4096},
                          {"mlp.gate_proj", 4096, 11008},
                          {"mlp.up_proj", 4096, 11008},
                          {"mlp.down_proj", 11008, 4096}});
  }
  if (name == "llama2-70b-linear") {
    return repeat_layers(std::string(name), 80,
                         {{"self_attn.q_proj", 8192, 8192},
                          {"self_attn.o_proj", 8192, 8192},
                          {"self_attn.k_proj", 8192, 1024},
                          {"self_attn.v_proj", 8192, 1024},
                          {"mlp.gate_proj", 8192, 28672},
                          {"mlp.up_proj", 8192, 28672},
                          {"mlp.down_proj", 28672, 8192}});
  }
  throw ArgumentError("unknown preset \"" + std::string(name) + "\" (expected llama2-7b-linear or llama2-70b-linear)");
}

}  // namespace lqdec
