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

#ifndef LQDEC_CODEBOOK_HPP
#define LQDEC_CODEBOOK_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace lqdec {

/// NormalFloat codebook: 2^bits normalized Gaussian quantiles in [-1, 1].
///
/// Probabilities are 2^(bits-1) evenly spaced points on [delta, 1/2] and
/// 2^(bits-1) + 1 evenly spaced points on [1/2, 1 - delta] with the shared
/// midpoint counted once, delta = (1/30 + 1/32) / 2. Levels are the normal
/// quantiles of those probabilities divided by the quantile of 1 - delta.
class Codebook {
 public:
  int bits() const noexcept { return bits_; }
  std::size_t size() const noexcept { return levels_.size(); }
  std::span<const double> levels() const noexcept { return levels_; }
  std::span<const double> probabilities() const noexcept { return probs_; }
  double operator[](std::size_t i) const noexcept { return levels_[i]; }

  /// Index of the exact zero level, 2^(bits-1) - 1.
  std::uint32_t zero_index() const noexcept { return (1u << (bits_ - 1)) - 1; }

  /// Index of the level nearest to `x`; ties go to the lower index.
  std::uint32_t nearest(double x) const noexcept;

  friend Codebook build_codebook(int bits);

 private:
  int bits_ = 0;
  std::vector<double> probs_;
  std::vector<double> levels_;
};

/// Offset of the outermost probabilities from 0 and 1.
inline constexpr double kNfDelta = 0.5 * (1.0 / 30.0 + 1.0 / 32.0);

/// Builds a fresh codebook. Throws ArgumentError unless bits is 2, 3, 4 or 8.
Codebook build_codebook(int bits);

/// Shared immutable codebook for `bits` (built once, thread-safe).
const Codebook& codebook(int bits);

}  // namespace lqdec

#endif  // LQDEC_CODEBOOK_HPP
