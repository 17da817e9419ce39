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

#include "lqdec/container.hpp"

#include <limits>

#include "byte_io.hpp"
#include "lqdec/bitpack.hpp"
#include "lqdec/error.hpp"
#include "lqdec/float_format.hpp"
#include "lqdec/tensor_io.hpp"

namespace lqdec {

ContainerBytes exact_container_bytes(std::size_t rows, std::size_t cols, const QuantConfig& cfg) {
  cfg.validate();
  const std::size_t n = rows * cols;
  ContainerBytes b;
  b.codes = packed_size(n, cfg.first_bits);
  b.scale_codes = packed_size(QuantizedMatrix::num_blocks_for(n, cfg), cfg.second_bits);
  b.group_scales = QuantizedMatrix::num_groups_for(n, cfg) * static_cast<std::size_t>(bit_width(cfg.scale_format) / 8);
  return b;
}

std::vector<std::uint8_t> encode_quantized(const QuantizedMatrix& q) {
  const QuantConfig& cfg = q.config();
  detail::ByteWriter w;
  w.reserve(exact_container_bytes(q.rows(), q.cols(), cfg).total());
  w.magic("LQQ1");
  w.u16(kContainerVersion);
  w.u64(q.rows());
  w.u64(q.cols());
  w.u8(static_cast<std::uint8_t>(cfg.first_bits));
  w.u8(static_cast<std::uint8_t>(cfg.second_bits));
  w.u8(static_cast<std::uint8_t>(cfg.scale_format));
  w.u32(cfg.block_size);
  w.u32(cfg.group_size);
  w.bytes(q.codes());
  w.bytes(q.scale_codes());
  for (float v : q.group_scales()) {
    switch (cfg.scale_format) {
      case FloatFormat::fp32:
        w.f32(v);
        break;
      case FloatFormat::fp16:
        w.u16(to_half_bits(v));
        break;
      case FloatFormat::bf16:
        w.u16(to_bfloat_bits(v));
        break;
    }
  }
  return std::move(w).take();
}

QuantizedMatrix decode_quantized(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, "LQQ1");
  r.expect_magic("LQQ1");
  if (auto v = r.u16(); v != kContainerVersion) {
    throw FormatError("LQQ1: unsupported version " + std::to_string(v));
  }
  const std::uint64_t rows = r.u64();
  const std::uint64_t cols = r.u64();
  if (rows != 0 && cols > std::numeric_limits<std::uint64_t>::max() / 8 / rows) {
    throw FormatError("LQQ1: dimensions overflow");
  }
  QuantConfig cfg;
  cfg.first_bits = r.u8();
  cfg.second_bits = r.u8();
  const std::uint8_t fmt = r.u8();
  if (fmt > 2) throw FormatError("LQQ1: unknown scale format tag " + std::to_string(fmt));
  cfg.scale_format = static_cast<FloatFormat>(fmt);
  cfg.block_size = r.u32();
  cfg.group_size = r.u32();
  try {
    cfg.validate();
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("LQQ1: ") + e.what());
  }
  const ContainerBytes layout = exact_container_bytes(rows, cols, cfg);
  if (r.remaining() < layout.payload()) throw FormatError("LQQ1: truncated payload");
  auto codes = r.take(layout.codes);
  auto scale_codes = r.take(layout.scale_codes);
  const std::size_t groups = QuantizedMatrix::num_groups_for(rows * cols, cfg);
  std::vector<float> scales(groups);
  for (auto& v : scales) {
    switch (cfg.scale_format) {
      case FloatFormat::fp32:
        v = r.f32();
        break;
      case FloatFormat::fp16:
        v = from_half_bits(r.u16());
        break;
      case FloatFormat::bf16:
        v = from_bfloat_bits(r.u16());
        break;
    }
  }
  r.expect_end();
  return QuantizedMatrix(rows, cols, cfg, {codes.begin(), codes.end()}, {scale_codes.begin(), scale_codes.end()},
                         std::move(scales));
}

void write_quantized(const std::filesystem::path& path, const QuantizedMatrix& q) {
  write_file_bytes(path, encode_quantized(q));
}

QuantizedMatrix read_quantized(const std::filesystem::path& path) {
  auto bytes = read_file_bytes(path);
  try {
    return decode_quantized(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace lqdec
