// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace nlprov {

enum class Errc {
  MalformedTree,
  ArityMismatch,
  TypeMismatch,
  InvalidParams,
  UnknownRelation,
  UnmappedHead,
  LeafNotFound,
  TemplateMismatch,
  UnhandledShape,
  NoSiblingMapping,
  LookupFailed,
  RangeOnNonNumeric,
  ParseError,
  InvalidQuery,
  InvalidMapping,
  IoError,
  NotFound,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace nlprov
