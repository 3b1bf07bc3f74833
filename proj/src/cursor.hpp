// Copyright 2026 The vectx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VECTX_SRC_CURSOR_HPP
#define VECTX_SRC_CURSOR_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "vectx/error.hpp"

namespace vectx::detail {

// Hand-rolled scanner shared by the type, transform, value and program
// parsers. Columns are reported 1-based, offset by `column_base`.
class Cursor {
 public:
  explicit Cursor(std::string_view text, std::size_t line = 0,
                  std::size_t column_base = 1)
      : text_(text), line_(line), column_base_(column_base) {}

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\r' || text_[pos_] == '\n')) {
      ++pos_;
    }
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool consume(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  bool consume(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  static bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool ident_char(char c) {
    return ident_start(c) || (c >= '0' && c <= '9');
  }
  static bool digit(char c) { return c >= '0' && c <= '9'; }

  bool at_identifier() { return ident_start(peek()); }

  std::string identifier() {
    if (!at_identifier()) fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  // Program-level name: an identifier that may carry trailing primes (g').
  std::string word() {
    skip_space();
    std::size_t start = pos_;
    if (pos_ < text_.size() && !ident_start(text_[pos_])) fail("expected a name");
    while (pos_ < text_.size() && (ident_char(text_[pos_]) || text_[pos_] == '\'')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::size_t positive_int() {
    skip_space();
    std::size_t start = pos_;
    if (!digit(peek())) fail("expected a positive integer");
    std::size_t value = 0;
    while (pos_ < text_.size() && digit(text_[pos_])) {
      std::size_t next = value * 10 + static_cast<std::size_t>(text_[pos_] - '0');
      if (next / 10 != value) fail_at(start, "integer out of range");
      value = next;
      ++pos_;
    }
    if (value == 0) fail_at(start, "sizes must be at least 1");
    return value;
  }

  std::int64_t integer() {
    skip_space();
    std::size_t start = pos_;
    bool negative = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    if (pos_ >= text_.size() || !digit(text_[pos_])) fail_at(start, "expected an integer");
    std::uint64_t magnitude = 0;
    while (pos_ < text_.size() && digit(text_[pos_])) {
      magnitude = magnitude * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
      if (magnitude > (std::uint64_t{1} << 63)) fail_at(start, "integer out of range");
      ++pos_;
    }
    if (!negative && magnitude == (std::uint64_t{1} << 63)) {
      fail_at(start, "integer out of range");
    }
    return negative ? static_cast<std::int64_t>(0 - magnitude)
                    : static_cast<std::int64_t>(magnitude);
  }

  std::size_t pos() const { return pos_; }
  std::string_view rest() const { return text_.substr(pos_); }

  [[noreturn]] void fail(const std::string &msg) const { fail_at(pos_, msg); }

  [[noreturn]] void fail_at(std::size_t at, const std::string &msg) const {
    throw ParseError(msg, line_, column_base_ + at);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t column_base_;
};

}  // namespace vectx::detail

#endif  // VECTX_SRC_CURSOR_HPP
