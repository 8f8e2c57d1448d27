// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace nlprov {

enum class Kind { Number, String };

// A database value. Strings are trimmed and compared byte-wise; numbers are
// fixed-point decimals (int64 mantissa, base-10 scale) compared numerically.
class Value {
 public:
  Value() = default;
  static Value str(std::string_view s);
  static Value num(std::int64_t v);
  // Throws Error(ParseError) when text is not a decimal literal.
  static Value num(std::string_view text);
  static bool looks_numeric(std::string_view text);

  Kind kind() const { return kind_; }
  bool is_number() const { return kind_ == Kind::Number; }
  const std::string& text() const { return text_; }
  double as_double() const;

  bool operator==(const Value& o) const {
    return kind_ == o.kind_ && text_ == o.text_;
  }
  std::strong_ordering operator<=>(const Value& o) const;

 private:
  Kind kind_ = Kind::String;
  std::string text_;
  std::int64_t mant_ = 0;
  int scale_ = 0;
};

std::string trim(std::string_view s);

struct ValueHash {
  std::size_t operator()(const Value& v) const {
    return std::hash<std::string>()(v.text()) ^ (v.is_number() ? 0x9e3779b9u : 0u);
  }
};

}  // namespace nlprov
