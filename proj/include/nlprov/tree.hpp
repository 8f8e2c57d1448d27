// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace nlprov {

struct DepNode {
  int id = 0;
  std::string word;
  std::string pos;
  std::string rel;
  int parent = -1;
  std::vector<int> children;
};

// Node ids double as token positions: rendering orders words by id.
class DependencyTree {
 public:
  DependencyTree() = default;
  // Each node lists its parent id (-1 for the root). Children keep the order
  // in which they appear in `nodes`.
  explicit DependencyTree(std::vector<DepNode> nodes);

  static DependencyTree from_conll(std::string_view text);
  static DependencyTree from_json(const nlohmann::json& j);
  std::string to_conll() const;
  nlohmann::json to_json() const;

  int root() const { return root_; }
  bool has(int id) const { return index_.count(id) != 0; }
  const DepNode& node(int id) const;
  std::vector<int> preorder() const;
  std::vector<int> subtree(int id) const;
  bool is_leaf(int id) const { return node(id).children.empty(); }
  // True when `desc` is a proper or equal descendant of `anc`.
  bool descends(int desc, int anc) const;
  std::size_t size() const { return nodes_.size(); }
  std::string text() const;

  bool operator==(const DependencyTree& o) const;

 private:
  std::vector<DepNode> nodes_;
  std::map<int, std::size_t> index_;
  int root_ = -1;
};

struct TreeConfig {
  std::set<std::string> mod_rels{"prep", "rcmod", "advmod", "nn", "amod"};
  std::string verb_prefix = "VB";
  std::set<std::string> logical_words{"and", "or"};
  std::set<std::string> det_rels{"det"};

  bool is_mod(const DepNode& n) const { return mod_rels.count(n.rel) != 0; }
  bool is_verb(const DepNode& n) const { return n.pos.rfind(verb_prefix, 0) == 0; }
  bool is_logical(const DepNode& n) const;
};

struct ValidationReport {
  bool ok = false;
  int object = -1;
  int modifier = -1;
  bool modifier_is_verb = false;
  std::string message;
};

ValidationReport validate_question_tree(const DependencyTree& tree,
                                        const TreeConfig& cfg = {});
// Throws Error(MalformedTree) when validation fails.
ValidationReport require_question_tree(const DependencyTree& tree,
                                       const TreeConfig& cfg = {});

}  // namespace nlprov
