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

#ifndef LQDEC_NORMAL_HPP
#define LQDEC_NORMAL_HPP

namespace lqdec {

/// Standard normal quantile function. Uses Wichura's AS 241 (PPND16)
/// rational approximation, accurate to about 1e-16 relative.
/// Throws ArgumentError unless 0 < p < 1.
double inverse_normal_cdf(double p);

/// Standard normal CDF, 0.5 * erfc(-x / sqrt(2)).
double normal_cdf(double x) noexcept;

}  // namespace lqdec

#endif  // LQDEC_NORMAL_HPP
