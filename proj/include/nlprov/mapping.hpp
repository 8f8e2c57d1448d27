// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlprov/query.hpp"
#include "nlprov/tree.hpp"

namespace nlprov {

// Partial map from tree node id to a variable of one CQ.
struct WordMapping {
  std::map<int, std::string> entries;

  std::optional<std::string> var_of(int node) const;
  std::optional<int> node_of(const std::string& var) const;
  // Checks node existence, variable existence and injectivity.
  void validate(const DependencyTree& tree, const ConjunctiveQuery& cq) const;
  bool operator==(const WordMapping&) const = default;
};

struct UnionWordMapping {
  std::vector<WordMapping> per_cq;

  // Word ids number the nodes mapped by any member, 1.. in node id order.
  std::map<int, int> word_ids() const;
  std::map<int, int> nodes_by_word() const;
  void validate(const DependencyTree& tree, const UnionQuery& q) const;

  static UnionWordMapping from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  bool operator==(const UnionWordMapping&) const = default;
};

// Exchanges the variables of two nodes in every member mapping.
UnionWordMapping swap_nodes(UnionWordMapping m, int a, int b);

}  // namespace nlprov
