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

#ifndef LQDEC_ERROR_HPP
#define LQDEC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lqdec {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument: bad dimensions, out-of-range config, negative weights.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Malformed or truncated file / container.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// No assignment fits inside the storage budget.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double min_storage_bits)
      : Error(what), min_storage_bits_(min_storage_bits) {}

  double min_storage_bits() const noexcept { return min_storage_bits_; }

 private:
  double min_storage_bits_;
};

/// A numerical routine produced a non-finite or otherwise unusable result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

namespace detail {
[[noreturn]] void throw_argument(const std::string& msg);
[[noreturn]] void throw_format(const std::string& msg);
}  // namespace detail

}  // namespace lqdec

#endif  // LQDEC_ERROR_HPP
