// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlprov/mapping.hpp"

#include <set>

#include "nlprov/error.hpp"

namespace nlprov {

std::optional<std::string> WordMapping::var_of(int node) const {
  auto it = entries.find(node);
  if (it == entries.end()) return std::nullopt;
  return it->second;
}

std::optional<int> WordMapping::node_of(const std::string& var) const {
  for (auto& [n, v] : entries)
    if (v == var) return n;
  return std::nullopt;
}

void WordMapping::validate(const DependencyTree& tree, const ConjunctiveQuery& cq) const {
  std::set<std::string> seen;
  for (auto& [n, v] : entries) {
    if (!tree.has(n)) throw Error(Errc::InvalidMapping, "mapped node " + std::to_string(n) + " not in tree");
    if (!cq.has_var(v)) throw Error(Errc::InvalidMapping, "mapped variable " + v + " not in query");
    if (!seen.insert(v).second)
      throw Error(Errc::InvalidMapping, "variable " + v + " mapped from two nodes");
  }
}

std::map<int, int> UnionWordMapping::word_ids() const {
  std::set<int> nodes;
  for (auto& m : per_cq)
    for (auto& [n, _] : m.entries) nodes.insert(n);
  std::map<int, int> out;
  int next = 1;
  for (int n : nodes) out[n] = next++;
  return out;
}

std::map<int, int> UnionWordMapping::nodes_by_word() const {
  std::map<int, int> out;
  for (auto& [n, w] : word_ids()) out[w] = n;
  return out;
}

void UnionWordMapping::validate(const DependencyTree& tree, const UnionQuery& q) const {
  if (per_cq.size() != q.cqs.size())
    throw Error(Errc::InvalidMapping, "mapping count " + std::to_string(per_cq.size()) +
                                          " differs from query count " + std::to_string(q.cqs.size()));
  for (std::size_t i = 0; i < per_cq.size(); ++i) per_cq[i].validate(tree, q.cqs[i]);
}

UnionWordMapping UnionWordMapping::from_json(const nlohmann::json& j) {
  UnionWordMapping u;
  auto one = [](const nlohmann::json& m) {
    WordMapping w;
    for (auto& [k, v] : m.items()) w.entries[std::stoi(k)] = v.get<std::string>();
    return w;
  };
  if (j.is_array()) {
    for (auto& m : j) u.per_cq.push_back(one(m));
  } else {
    u.per_cq.push_back(one(j));
  }
  return u;
}

nlohmann::json UnionWordMapping::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (auto& m : per_cq) {
    nlohmann::json o = nlohmann::json::object();
    for (auto& [n, v] : m.entries) o[std::to_string(n)] = v;
    arr.push_back(o);
  }
  return arr;
}

UnionWordMapping swap_nodes(UnionWordMapping m, int a, int b) {
  for (auto& w : m.per_cq) {
    auto va = w.var_of(a), vb = w.var_of(b);
    w.entries.erase(a);
    w.entries.erase(b);
    if (vb) w.entries[a] = *vb;
    if (va) w.entries[b] = *va;
  }
  return m;
}

}  // namespace nlprov
