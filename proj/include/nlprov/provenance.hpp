// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nlprov/mapping.hpp"
#include "nlprov/query.hpp"
#include "nlprov/schema.hpp"

namespace nlprov {

struct Assignment {
  std::size_t source_cq = 0;
  std::vector<std::size_t> atom_tuples;  // row index per atom
  std::map<std::string, Value> var_values;
  std::vector<Value> head;

  const Value& at(const std::string& var) const;
};

using Pair = std::pair<int, Value>;  // (word id, value)

struct Monomial {
  std::vector<Pair> pairs;  // sorted by word id

  const Value* find(int wid) const;
  std::string text() const;
  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;
};

struct Polynomial {
  std::vector<Value> answer;
  std::vector<Monomial> monomials;
  std::vector<std::size_t> sources;  // assignment index per monomial, when known

  // Canonical text: monomials sorted, joined by " + ".
  std::string text() const;
  std::vector<Monomial> sorted() const;
};

std::string tuple_text(const std::vector<Value>& t);

// Satisfying assignments in depth-first join order (atoms in query order).
std::vector<Assignment> evaluate(const ConjunctiveQuery& cq, const Database& db,
                                 std::size_t source_cq = 0);
std::vector<Assignment> evaluate(const UnionQuery& q, const Database& db);

// One polynomial per distinct head tuple, ordered by answer.
std::vector<Polynomial> build_provenance(const std::vector<Assignment>& assignments,
                                         const UnionQuery& q, const UnionWordMapping& mapping,
                                         const DependencyTree& tree);

// Sum of several per-answer polynomials.
Polynomial combine(const std::vector<Polynomial>& polys);

bool same_multiset(std::vector<Monomial> a, std::vector<Monomial> b);

}  // namespace nlprov
