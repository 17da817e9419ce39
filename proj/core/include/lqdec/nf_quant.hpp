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

#ifndef LQDEC_NF_QUANT_HPP
#define LQDEC_NF_QUANT_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lqdec/quant_config.hpp"
#include "lqdec/tensor.hpp"

namespace lqdec {

/// Unsigned round-to-nearest quantization of a nonnegative vector in groups.
///
/// Each group of `group_size` values stores its maximum; a value v is coded
/// as round_half_away(v * (2^bits - 1) / max), so the maximum itself maps to
/// the top code. All-zero groups keep max 0 and all-zero codes.
struct UnsignedRtn {
  int bits = 8;
  std::size_t group_size = 1;
  std::vector<std::uint32_t> codes;
  std::vector<double> group_max;

  std::uint32_t top_code() const noexcept { return (1u << bits) - 1u; }
  /// max / (2^bits - 1), the step between adjacent codes.
  double scale(std::size_t group) const noexcept { return group_max[group] / top_code(); }
  double dequantize(std::size_t i) const noexcept {
    return static_cast<double>(codes[i]) * group_max[i / group_size] / top_code();
  }
};

/// Throws ArgumentError on a negative or non-finite entry, or bad bits/size.
UnsignedRtn rtn_quantize_unsigned(std::span<const double> values, int bits, std::size_t group_size);

/// Blockwise NormalFloat matrix with double-quantized block scales.
///
/// The matrix is flattened row-major and cut into blocks of block_size
/// entries (the last block may be short). Each entry stores a first_bits NF
/// code; each block stores a second_bits unsigned code of its absmax; each
/// group of group_size blocks stores its largest absmax in scale_format.
class QuantizedMatrix {
 public:
  QuantizedMatrix() = default;
  /// Validates stream sizes and code ranges; throws FormatError on mismatch.
  QuantizedMatrix(std::size_t rows, std::size_t cols, QuantConfig config, std::vector<std::uint8_t> codes,
                  std::vector<std::uint8_t> scale_codes, std::vector<float> group_scales);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return rows_ * cols_; }
  const QuantConfig& config() const noexcept { return config_; }

  std::size_t num_blocks() const noexcept { return num_blocks_for(size(), config_); }
  std::size_t num_groups() const noexcept { return num_groups_for(size(), config_); }

  /// Packed first-level NF codes.
  std::span<const std::uint8_t> codes() const noexcept { return codes_; }
  /// Packed second-level absmax codes.
  std::span<const std::uint8_t> scale_codes() const noexcept { return scale_codes_; }
  /// Per-group absmax of the block scales, already rounded to scale_format.
  std::span<const float> group_scales() const noexcept { return group_scales_; }

  std::uint32_t code(std::size_t i) const noexcept;
  std::uint32_t scale_code(std::size_t block) const noexcept;
  /// Reconstructed absmax of `block`: scale_code * group_scale / (2^b1 - 1).
  double block_scale(std::size_t block) const noexcept;

  static std::size_t num_blocks_for(std::size_t n, const QuantConfig& cfg) noexcept {
    return (n + cfg.block_size - 1) / cfg.block_size;
  }
  static std::size_t num_groups_for(std::size_t n, const QuantConfig& cfg) noexcept {
    return (num_blocks_for(n, cfg) + cfg.group_size - 1) / cfg.group_size;
  }

  friend bool operator==(const QuantizedMatrix&, const QuantizedMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  QuantConfig config_;
  std::vector<std::uint8_t> codes_;
  std::vector<std::uint8_t> scale_codes_;
  std::vector<float> group_scales_;
};

/// NF-quantizes `m` with double quantization of the block absmax values.
///
/// Entries of a block with absmax s > 0 get the level nearest to u / s (ties
/// to the lower index). Blocks whose absmax is zero, or whose absmax code
/// rounds to zero at the second level, store the zero level throughout, so
/// their reconstruction is exactly zero.
QuantizedMatrix quantize_nf(const DenseMatrix& m, const QuantConfig& cfg);

DenseMatrix dequantize(const QuantizedMatrix& q);

/// Dequantizes rows [row_begin, row_begin + out.size() / cols) into `out`.
void dequantize_rows(const QuantizedMatrix& q, std::size_t row_begin, std::span<float> out);

}  // namespace lqdec

#endif  // LQDEC_NF_QUANT_HPP
