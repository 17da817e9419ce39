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

#include "lqdec/codebook.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "lqdec/error.hpp"
#include "lqdec/normal.hpp"
#include "lqdec/quant_config.hpp"

namespace lqdec {

std::uint32_t Codebook::nearest(double x) const noexcept {
  auto it = std::lower_bound(levels_.begin(), levels_.end(), x);
  if (it == levels_.begin()) return 0;
  if (it == levels_.end()) return static_cast<std::uint32_t>(levels_.size() - 1);
  const auto hi = static_cast<std::uint32_t>(it - levels_.begin());
  const double d_lo = x - levels_[hi - 1];
  const double d_hi = levels_[hi] - x;
  return d_hi < d_lo ? hi : hi - 1;
}

Codebook build_codebook(int bits) {
  if (!is_supported_bits(bits)) {
    throw ArgumentError("codebook bits must be one of 2,3,4,8, got " + std::to_string(bits));
  }
  const std::size_t half = std::size_t{1} << (bits - 1);
  Codebook cb;
  cb.bits_ = bits;
  cb.probs_.reserve(2 * half);
  // [delta, 1/2], both endpoints included
  for (std::size_t i = 0; i < half; ++i) {
    const double t = half == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(half - 1);
    cb.probs_.push_back(kNfDelta + t * (0.5 - kNfDelta));
  }
  // (1/2, 1 - delta], midpoint already present
  for (std::size_t i = 1; i <= half; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(half);
    cb.probs_.push_back(0.5 + t * (0.5 - kNfDelta));
  }
  cb.probs_[half - 1] = 0.5;
  cb.probs_.back() = 1.0 - kNfDelta;

  const double norm = inverse_normal_cdf(1.0 - kNfDelta);
  cb.levels_.resize(cb.probs_.size());
  for (std::size_t i = 0; i < cb.probs_.size(); ++i) {
    cb.levels_[i] = inverse_normal_cdf(cb.probs_[i]) / norm;
  }
  // Pin the symmetric endpoints and the median exactly.
  cb.levels_.front() = -1.0;
  cb.levels_[half - 1] = 0.0;
  cb.levels_.back() = 1.0;
  return cb;
}

const Codebook& codebook(int bits) {
  static const std::array<Codebook, 4> books = {build_codebook(2), build_codebook(3), build_codebook(4),
                                                build_codebook(8)};
  switch (bits) {
    case 2:
      return books[0];
    case 3:
      return books[1];
    case 4:
      return books[2];
    case 8:
      return books[3];
    default:
      throw ArgumentError("codebook bits must be one of 2,3,4,8, got " + std::to_string(bits));
  }
}

}  // namespace lqdec
