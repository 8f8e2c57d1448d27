// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nlprov/mapping.hpp"
#include "nlprov/provenance.hpp"
#include "nlprov/tree.hpp"

namespace nlprov {

enum class NodeType { Sum, Product, Leaf };
enum class SynOp { None, CountDistinct, Range };

struct CNode {
  NodeType type = NodeType::Leaf;
  int wid = 0;
  Value value;
  std::vector<CNode> children;
  // set on summarized leaves: the distinct values the leaf stands for
  SynOp syn = SynOp::None;
  std::vector<Value> syn_values;

  static CNode leaf(int wid, Value v);
  static CNode sum(std::vector<CNode> kids);
  static CNode product(std::vector<CNode> kids);
  bool is_leaf() const { return type == NodeType::Leaf; }
  bool operator==(const CNode&) const = default;
};

using Circuit = CNode;

// Descendant order over mapped words, kept both by tree node and by word id.
struct QuestionOrder {
  std::map<int, int> node_of_wid;
  std::map<int, int> wid_of_node;
  std::set<std::pair<int, int>> pairs;  // (descendant node, ancestor node), reflexive

  bool leq_nodes(int x, int y) const { return pairs.count({x, y}) != 0; }
  bool leq(int wx, int wy) const;
  std::vector<int> wids() const;
};

QuestionOrder question_order(const DependencyTree& tree, const UnionWordMapping& mapping);
// Word ids keyed straight onto tree nodes (used by synthetic runs).
QuestionOrder question_order(const DependencyTree& tree, const std::map<int, int>& node_of_wid);

// Flattens SUM-in-SUM and PRODUCT-in-PRODUCT and removes unary nodes.
void canonicalize(CNode& n);
CNode identity(const std::vector<Monomial>& monomials);
std::vector<Monomial> expand(const CNode& c);
// Negated distance from `root`; throws NotFound if `target` is not inside.
int level(const CNode& root, const CNode* target);

struct FactorizationMetrics {
  int length = 0;
  int readability = 0;
};
FactorizationMetrics metrics(const CNode& c);

// Throws LEAF_NOT_FOUND when the circuit does not account for every
// assignment monomial.
bool is_compatible(const CNode& c, const QuestionOrder& order,
                   const std::vector<Monomial>& assignments);

CNode greedy_factorize(const QuestionOrder& order, const std::vector<Monomial>& monomials);
CNode greedy_factorize(const DependencyTree& tree, const UnionWordMapping& mapping,
                       const Polynomial& poly);
// Runs the frontier rounds on `f` treating `processed` as already handled.
void greedy_continue(CNode& f, const QuestionOrder& order, std::set<int> processed);

// Abstract factorization: the chain of word ids that are comparable with every
// other mapped word, outermost first. Their values are pulled in this order.
struct FactorTemplate {
  std::vector<int> chain;
  std::string text() const;
};
FactorTemplate derive_template(const CNode& factorized, const QuestionOrder& order);
// Throws TEMPLATE_MISMATCH when the template does not fit the monomials.
CNode apply_template(const FactorTemplate& t, const std::vector<Monomial>& monomials,
                     const QuestionOrder& order);
// Falls back to greedy_factorize on TEMPLATE_MISMATCH.
CNode factorize_with_template(const FactorTemplate& t, const std::vector<Monomial>& monomials,
                              const QuestionOrder& order);

// '·' for product, " + " for sum, leaves as [value].
std::string to_text(const CNode& c);
using LeafResolver = std::function<Pair(const std::string& value_text)>;
CNode parse_circuit(std::string_view text, const LeafResolver& resolve);
// Resolver over the pairs of a polynomial; fails on unknown or ambiguous text.
LeafResolver resolver_for(const std::vector<Monomial>& monomials);

}  // namespace nlprov
