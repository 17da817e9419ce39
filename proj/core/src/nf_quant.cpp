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

#include "lqdec/nf_quant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lqdec/bitpack.hpp"
#include "lqdec/codebook.hpp"
#include "lqdec/error.hpp"
#include "lqdec/float_format.hpp"

namespace lqdec {

UnsignedRtn rtn_quantize_unsigned(std::span<const double> values, int bits, std::size_t group_size) {
  if (bits < 1 || bits > 16) throw ArgumentError("rtn_quantize_unsigned: bits must be in [1, 16]");
  if (group_size < 1) throw ArgumentError("rtn_quantize_unsigned: group size must be >= 1");
  UnsignedRtn out;
  out.bits = bits;
  out.group_size = group_size;
  out.codes.assign(values.size(), 0);
  out.group_max.assign((values.size() + group_size - 1) / group_size, 0.0);
  const double top = out.top_code();
  for (std::size_t g = 0; g < out.group_max.size(); ++g) {
    const std::size_t begin = g * group_size;
    const std::size_t end = std::min(values.size(), begin + group_size);
    double mx = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double v = values[i];
      if (!std::isfinite(v) || v < 0.0) {
        throw ArgumentError("rtn_quantize_unsigned: entry " + std::to_string(i) + " is negative or non-finite");
      }
      mx = std::max(mx, v);
    }
    out.group_max[g] = mx;
    if (mx == 0.0) continue;
    for (std::size_t i = begin; i < end; ++i) {
      const double c = std::round(values[i] * top / mx);  // half away from zero
      out.codes[i] = static_cast<std::uint32_t>(std::clamp(c, 0.0, top));
    }
  }
  return out;
}

QuantizedMatrix::QuantizedMatrix(std::size_t rows, std::size_t cols, QuantConfig config,
                                 std::vector<std::uint8_t> codes, std::vector<std::uint8_t> scale_codes,
                                 std::vector<float> group_scales)
    : rows_(rows),
      cols_(cols),
      config_(config),
      codes_(std::move(codes)),
      scale_codes_(std::move(scale_codes)),
      group_scales_(std::move(group_scales)) {
  config_.validate();
  const std::size_t n = rows_ * cols_;
  if (codes_.size() != packed_size(n, config_.first_bits)) {
    throw FormatError("quantized matrix: code stream has " + std::to_string(codes_.size()) + " bytes, expected " +
                      std::to_string(packed_size(n, config_.first_bits)));
  }
  if (scale_codes_.size() != packed_size(num_blocks(), config_.second_bits)) {
    throw FormatError("quantized matrix: scale-code stream has " + std::to_string(scale_codes_.size()) +
                      " bytes, expected " + std::to_string(packed_size(num_blocks(), config_.second_bits)));
  }
  if (group_scales_.size() != num_groups()) {
    throw FormatError("quantized matrix: " + std::to_string(group_scales_.size()) + " group scales, expected " +
                      std::to_string(num_groups()));
  }
  for (float v : group_scales_) {
    if (!std::isfinite(v) || v < 0.0f) throw FormatError("quantized matrix: group scale is negative or non-finite");
  }
}

std::uint32_t QuantizedMatrix::code(std::size_t i) const noexcept {
  return read_packed(codes_, config_.first_bits, i);
}

std::uint32_t QuantizedMatrix::scale_code(std::size_t block) const noexcept {
  return read_packed(scale_codes_, config_.second_bits, block);
}

double QuantizedMatrix::block_scale(std::size_t block) const noexcept {
  const double top = static_cast<double>((1u << config_.second_bits) - 1u);
  const double group = group_scales_[block / config_.group_size];
  return static_cast<double>(scale_code(block)) * group / top;
}

QuantizedMatrix quantize_nf(const DenseMatrix& m, const QuantConfig& cfg) {
  cfg.validate();
  require_finite(m.data(), "quantize_nf input");
  const auto data = m.data();
  const std::size_t n = data.size();
  const std::size_t block = cfg.block_size;
  const std::size_t num_blocks = QuantizedMatrix::num_blocks_for(n, cfg);
  const Codebook& cb = codebook(cfg.first_bits);
  const auto zero = static_cast<std::uint8_t>(cb.zero_index());

  std::vector<double> absmax(num_blocks, 0.0);
  std::vector<std::uint8_t> codes(n, zero);
  for (std::size_t b = 0; b < num_blocks; ++b) {
    const std::size_t begin = b * block;
    const std::size_t end = std::min(n, begin + block);
    float s = 0.0f;
    for (std::size_t i = begin; i < end; ++i) s = std::max(s, std::fabs(data[i]));
    absmax[b] = s;
    if (s == 0.0f) continue;
    const double sd = s;
    for (std::size_t i = begin; i < end; ++i) {
      codes[i] = static_cast<std::uint8_t>(cb.nearest(static_cast<double>(data[i]) / sd));
    }
  }

  UnsignedRtn second = rtn_quantize_unsigned(absmax, cfg.second_bits, cfg.group_size);
  for (std::size_t b = 0; b < num_blocks; ++b) {
    if (second.codes[b] != 0) continue;
    const std::size_t begin = b * block;
    std::fill(codes.begin() + static_cast<std::ptrdiff_t>(begin),
              codes.begin() + static_cast<std::ptrdiff_t>(std::min(n, begin + block)), zero);
  }

  std::vector<float> group_scales(second.group_max.size());
  for (std::size_t g = 0; g < group_scales.size(); ++g) {
    group_scales[g] = round_to_format(static_cast<float>(second.group_max[g]), cfg.scale_format);
  }

  return QuantizedMatrix(m.rows(), m.cols(), cfg, pack_bits<std::uint8_t>(codes, cfg.first_bits),
                         pack_bits<std::uint32_t>(second.codes, cfg.second_bits), std::move(group_scales));
}

void dequantize_rows(const QuantizedMatrix& q, std::size_t row_begin, std::span<float> out) {
  const std::size_t cols = q.cols();
  if (cols == 0) return;
  if (out.size() % cols != 0 || row_begin + out.size() / cols > q.rows()) {
    throw ArgumentError("dequantize_rows: output span does not cover whole rows inside the matrix");
  }
  const auto levels = codebook(q.config().first_bits).levels();
  const std::size_t block = q.config().block_size;
  const std::size_t first = row_begin * cols;
  std::size_t cur_block = static_cast<std::size_t>(-1);
  double scale = 0.0;
  for (std::size_t j = 0; j < out.size(); ++j) {
    const std::size_t i = first + j;
    const std::size_t b = i / block;
    if (b != cur_block) {
      cur_block = b;
      scale = q.block_scale(b);
    }
    out[j] = static_cast<float>(scale * levels[q.code(i)]);
  }
}

DenseMatrix dequantize(const QuantizedMatrix& q) {
  DenseMatrix out(q.rows(), q.cols());
  dequantize_rows(q, 0, out.mutable_data());
  return out;
}

}  // namespace lqdec
