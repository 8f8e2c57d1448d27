// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlprov/value.hpp"

#include <cctype>
#include <string>

#include "nlprov/error.hpp"

namespace nlprov {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::MalformedTree: return "MALFORMED_TREE";
    case Errc::ArityMismatch: return "ARITY_MISMATCH";
    case Errc::TypeMismatch: return "TYPE_MISMATCH";
    case Errc::InvalidParams: return "INVALID_PARAMS";
    case Errc::UnknownRelation: return "UNKNOWN_RELATION";
    case Errc::UnmappedHead: return "UNMAPPED_HEAD";
    case Errc::LeafNotFound: return "LEAF_NOT_FOUND";
    case Errc::TemplateMismatch: return "TEMPLATE_MISMATCH";
    case Errc::UnhandledShape: return "UNHANDLED_SHAPE";
    case Errc::NoSiblingMapping: return "NO_SIBLING_MAPPING";
    case Errc::LookupFailed: return "LOOKUP_FAILED";
    case Errc::RangeOnNonNumeric: return "RANGE_ON_NON_NUMERIC";
    case Errc::ParseError: return "PARSE_ERROR";
    case Errc::InvalidQuery: return "INVALID_QUERY";
    case Errc::InvalidMapping: return "INVALID_MAPPING";
    case Errc::IoError: return "IO_ERROR";
    case Errc::NotFound: return "NOT_FOUND";
  }
  return "UNKNOWN";
}

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

Value Value::str(std::string_view s) {
  Value v;
  v.kind_ = Kind::String;
  v.text_ = trim(s);
  return v;
}

Value Value::num(std::int64_t x) {
  Value v;
  v.kind_ = Kind::Number;
  v.mant_ = x;
  v.scale_ = 0;
  v.text_ = std::to_string(x);
  return v;
}

bool Value::looks_numeric(std::string_view raw) {
  std::string t = trim(raw);
  if (t.empty()) return false;
  size_t i = 0;
  if (t[0] == '-' || t[0] == '+') i = 1;
  bool digits = false, dot = false;
  for (; i < t.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(t[i]))) {
      digits = true;
    } else if (t[i] == '.' && !dot) {
      dot = true;
    } else {
      return false;
    }
  }
  return digits;
}

Value Value::num(std::string_view raw) {
  std::string t = trim(raw);
  if (!looks_numeric(t)) throw Error(Errc::ParseError, "not a number: '" + t + "'");
  bool neg = t[0] == '-';
  size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
  __int128 m = 0;
  int scale = 0;
  bool after = false;
  for (; i < t.size(); ++i) {
    if (t[i] == '.') {
      after = true;
      continue;
    }
    m = m * 10 + (t[i] - '0');
    if (after) ++scale;
    if (m > static_cast<__int128>(INT64_MAX))
      throw Error(Errc::ParseError, "number out of range: '" + t + "'");
  }
  while (scale > 0 && m % 10 == 0) {
    m /= 10;
    --scale;
  }
  Value v;
  v.kind_ = Kind::Number;
  v.mant_ = static_cast<std::int64_t>(neg ? -m : m);
  v.scale_ = scale;
  std::string digits = std::to_string(m == 0 ? 0 : static_cast<std::int64_t>(m));
  if (scale > 0) {
    while (static_cast<int>(digits.size()) <= scale) digits.insert(digits.begin(), '0');
    digits.insert(digits.end() - scale, '.');
  }
  v.text_ = (neg && m != 0 ? "-" : "") + digits;
  return v;
}

double Value::as_double() const {
  if (!is_number()) return 0.0;
  double d = static_cast<double>(mant_);
  for (int i = 0; i < scale_; ++i) d /= 10.0;
  return d;
}

std::strong_ordering Value::operator<=>(const Value& o) const {
  if (kind_ != o.kind_) return kind_ <=> o.kind_;
  if (kind_ == Kind::String) return text_.compare(o.text_) <=> 0;
  __int128 a = mant_, b = o.mant_;
  for (int s = scale_; s < o.scale_; ++s) a *= 10;
  for (int s = o.scale_; s < scale_; ++s) b *= 10;
  if (a < b) return std::strong_ordering::less;
  if (a > b) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace nlprov
