// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlprov/circuit.hpp"
#include "nlprov/mapping.hpp"
#include "nlprov/provenance.hpp"
#include "nlprov/query.hpp"
#include "nlprov/schema.hpp"
#include "nlprov/tree.hpp"

namespace nlprov {

// Everything sentence generation needs to know about a question.
struct NlContext {
  DependencyTree tree;
  TreeConfig cfg;
  std::map<int, int> wid_of_node;
  std::map<int, int> node_of_wid;
  // "relation.attribute" of the variable each mapped node stands for.
  std::map<int, std::string> attr_of_node;
  std::map<std::string, std::string> category_of_attr;
  std::map<std::string, Kind> kind_of_attr;
  // Constant texts compared against each attribute in some constraint.
  std::map<std::string, std::set<std::string>> constants_of_attr;
  // Attributes compared with < or > somewhere in the query.
  std::set<std::string> ranged_attrs;
  // Words standing for the same attribute in different union members
  // ("VLDB or SIGMOD") share the smallest of their word ids.
  std::map<int, int> alias_of_wid;
  std::map<std::string, std::string> connectors{{"year", "in"}, {"venue", "in"}, {"location", "in"}};
  std::string copula = "is the";
  std::set<std::string> quoted_categories{"title"};

  static NlContext build(const DependencyTree& tree, const UnionQuery& q,
                         const UnionWordMapping& mapping, const Schema& schema,
                         const TreeConfig& cfg = {});

  std::string category_of_node(int node) const;
  bool quoted(int wid) const;
  // Numeric when the attribute is declared numeric.
  bool numeric(int wid) const;
  // The question word a word id stands for, e.g. "authors".
  std::string word_of(int wid) const;
  int alias(int wid) const;
  bool has_alternatives(int wid) const;
};

enum class AKind { Kept, Replaced, Inserted, Block };

struct ANode {
  AKind kind = AKind::Kept;
  std::string text;
  std::string suffix;  // trailing connector, e.g. the copula
  double key = 0;      // word position; decides order among siblings
  std::vector<int> wids;  // traced words; the first one is preferred for display
  std::size_t shown = static_cast<std::size_t>(-1);  // index in wids of the value shown
  bool quoted = false;
  std::vector<ANode> children;
  std::vector<std::vector<ANode>> alts;  // Block only

  nlohmann::json to_json() const;
};

using WordValues = std::map<int, Value>;
WordValues word_values(const Monomial& m);

// Answer tree for a single assignment, rooted at the question's object.
ANode answer_tree(const NlContext& ctx, const WordValues& a);

struct Sentence {
  std::string pretty;     // one line per alternative, indented by nesting
  std::string canonical;  // single spaces
};

std::string render(const ANode& n);
Sentence render_forest(const std::vector<ANode>& forest);
std::string collapse_spaces(std::string_view s);

std::string single_sentence(const NlContext& ctx, const Monomial& m);

// Factorized (or summarized) sentence. A top level SUM yields one sentence per
// alternative. The answer tree follows the first assignment of each.
Sentence factorized_sentence(const NlContext& ctx, const CNode& circuit);

// The first monomial in expansion order, without expanding the rest.
Monomial first_term(const CNode& c);

}  // namespace nlprov
