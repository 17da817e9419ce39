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

// Little-endian byte stream helpers shared by the LQT1 and LQQ1 codecs.

#ifndef LQDEC_SRC_BYTE_IO_HPP
#define LQDEC_SRC_BYTE_IO_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lqdec/error.hpp"

namespace lqdec::detail {

class ByteWriter {
 public:
  void magic(std::string_view m) { out_.insert(out_.end(), m.begin(), m.end()); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void reserve(std::size_t n) { out_.reserve(n); }

  std::vector<std::uint8_t> take() && { return std::move(out_); }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> in, std::string what) : in_(in), what_(std::move(what)) {}

  void expect_magic(std::string_view m) {
    auto got = take(m.size());
    if (std::memcmp(got.data(), m.data(), m.size()) != 0) {
      throw FormatError(what_ + ": bad magic, expected \"" + std::string(m) + "\"");
    }
  }
  std::uint8_t u8() { return take(1)[0]; }
  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  float f32() { return std::bit_cast<float>(u32()); }

  std::span<const std::uint8_t> take(std::size_t n) {
    if (n > in_.size() - pos_) throw FormatError(what_ + ": truncated payload");
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const noexcept { return in_.size() - pos_; }
  void expect_end() const {
    if (remaining() != 0) {
      throw FormatError(what_ + ": " + std::to_string(remaining()) + " trailing bytes");
    }
  }
  const std::string& what() const noexcept { return what_; }

 private:
  std::uint64_t le(int n) {
    auto b = take(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  std::string what_;
};

}  // namespace lqdec::detail

#endif  // LQDEC_SRC_BYTE_IO_HPP
