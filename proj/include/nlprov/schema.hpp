// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nlprov/value.hpp"

namespace nlprov {

struct Attribute {
  std::string name;
  Kind kind = Kind::String;
  std::vector<std::string> aliases;
  std::string category;  // e.g. "title", "year", "venue"; empty when untagged

  bool operator==(const Attribute&) const = default;
};

struct Relation {
  std::string name;
  std::vector<Attribute> attrs;

  int index_of(std::string_view attr) const;
  bool operator==(const Relation&) const = default;
};

// Text form, one relation per line:
//   pub(wid:number, cid:number, ptitle:string:"paper|title"@title, pyear:number@year)
struct Schema {
  std::vector<Relation> relations;

  static Schema parse(std::string_view text);
  std::string to_text() const;
  const Relation* find(std::string_view name) const;
  const Relation& at(std::string_view name) const;
  bool operator==(const Schema&) const = default;
};

using Tuple = std::vector<Value>;

struct Database {
  Schema schema;
  std::map<std::string, std::vector<Tuple>> tables;

  const std::vector<Tuple>& table(std::string_view name) const;
  // Throws ARITY_MISMATCH / TYPE_MISMATCH naming the offending row and column.
  void validate() const;
  std::size_t total_tuples() const;
  std::map<std::string, std::size_t> row_counts() const;
  bool operator==(const Database&) const = default;
};

}  // namespace nlprov
