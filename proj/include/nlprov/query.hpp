// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nlprov/schema.hpp"
#include "nlprov/value.hpp"

namespace nlprov {

struct Term {
  bool is_var = true;
  std::string var;
  Value constant;

  static Term variable(std::string name) { return Term{true, std::move(name), {}}; }
  static Term constant_of(Value v) { return Term{false, "", std::move(v)}; }
  std::string to_string() const;
  bool operator==(const Term&) const = default;
};

enum class CmpOp { EQ, LT, GT };

struct Atom {
  std::string relation;
  std::vector<Term> terms;
  bool operator==(const Atom&) const = default;
};

struct Constraint {
  Term lhs;
  CmpOp op = CmpOp::EQ;
  Term rhs;
  bool holds(const Value& l, const Value& r) const;
  bool operator==(const Constraint&) const = default;
};

struct AttrRef {
  std::string relation;
  std::string attribute;
  int position = -1;
};

// Datalog form: query(oname) :- org(oid, oname), ..., pyear > 2005
struct ConjunctiveQuery {
  std::string head_name = "query";
  std::vector<std::string> head_vars;
  std::vector<Atom> atoms;
  std::vector<Constraint> constraints;

  static ConjunctiveQuery parse(std::string_view text);
  std::string to_string() const;
  std::set<std::string> variables() const;
  bool has_var(std::string_view v) const;
  void validate(const Schema& schema) const;
  // First atom position where `var` occurs.
  std::optional<AttrRef> attribute_of(std::string_view var, const Schema& schema) const;
  // Constants compared against `var` in constraints, with the operator used.
  std::vector<std::pair<CmpOp, Value>> constants_for(std::string_view var) const;

  bool operator==(const ConjunctiveQuery&) const = default;
};

struct UnionQuery {
  std::vector<ConjunctiveQuery> cqs;

  // One CQ per non-empty, non-comment line.
  static UnionQuery parse(std::string_view text);
  std::string to_string() const;
  void validate(const Schema& schema) const;
  bool operator==(const UnionQuery&) const = default;
};

}  // namespace nlprov
