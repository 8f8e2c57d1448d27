// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlprov/mapper.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>

#include "nlprov/error.hpp"

namespace nlprov {

namespace {

using Weight = std::int64_t;

Weight quantize(double w) { return static_cast<Weight>(std::llround(w * 1e6)); }

std::set<std::string> trigrams(const std::string& s) {
  std::string p = "##" + s + "#";
  std::set<std::string> out;
  for (std::size_t i = 0; i + 3 <= p.size(); ++i) out.insert(p.substr(i, 3));
  return out;
}

// Hungarian method on a square matrix, maximizing total weight.
Weight assignment(const std::vector<std::vector<Weight>>& w, std::vector<int>& match_of_row) {
  const int n = static_cast<int>(w.size());
  const Weight inf = std::numeric_limits<Weight>::max() / 4;
  std::vector<Weight> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      Weight delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        Weight cur = -w[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  match_of_row.assign(n, -1);
  Weight total = 0;
  for (int j = 1; j <= n; ++j)
    if (p[j]) {
      match_of_row[p[j] - 1] = j - 1;
      total += w[p[j] - 1][j - 1];
    }
  return total;
}

struct Graph {
  std::vector<int> nodes;
  std::vector<std::string> vars;
  std::map<std::pair<int, std::string>, Weight> w;

  Weight best() const {
    std::size_t n = std::max(nodes.size(), vars.size());
    if (n == 0) return 0;
    std::vector<std::vector<Weight>> m(n, std::vector<Weight>(n, 0));
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = 0; j < vars.size(); ++j) {
        auto it = w.find({nodes[i], vars[j]});
        if (it != w.end()) m[i][j] = it->second;
      }
    std::vector<int> match;
    return assignment(m, match);
  }

  Graph without(int node, const std::string& var) const {
    Graph g;
    for (int n : nodes)
      if (n != node) g.nodes.push_back(n);
    for (auto& v : vars)
      if (v != var) g.vars.push_back(v);
    for (auto& [k, x] : w)
      if (k.first != node && k.second != var) g.w.emplace(k, x);
    return g;
  }
};

}  // namespace

std::string normalize_word(std::string_view w) {
  std::string s;
  for (char c : w)
    if (std::isalnum(static_cast<unsigned char>(c)) || c == ' ')
      s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  s = trim(s);
  bool digits = !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  if (!digits)
    while (!s.empty() && std::isdigit(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.size() > 3 && s.back() == 's' && s[s.size() - 2] != 's') s.pop_back();
  return s;
}

double trigram_dice(std::string_view a, std::string_view b) {
  std::string x = normalize_word(a), y = normalize_word(b);
  if (x.empty() || y.empty()) return 0;
  if (x == y) return 1;
  auto ta = trigrams(x), tb = trigrams(y);
  std::size_t common = 0;
  for (auto& t : ta) common += tb.count(t);
  return 2.0 * static_cast<double>(common) / static_cast<double>(ta.size() + tb.size());
}

double similarity(std::string_view word, std::string_view variable) {
  return trigram_dice(word, variable);
}

double similarity(std::string_view word, std::string_view var, const ConjunctiveQuery& cq,
                  const Schema& schema) {
  double best = similarity(word, var);
  if (auto ref = cq.attribute_of(var, schema)) {
    const Relation& rel = schema.at(ref->relation);
    const Attribute& a = rel.attrs[static_cast<std::size_t>(ref->position)];
    std::string attr = normalize_word(a.name);
    std::string rname = normalize_word(rel.name);
    best = std::max(best, similarity(word, a.name));
    // Attribute names often carry a relation prefix (pubtitle, ptitle).
    for (std::size_t k = 1; k <= rname.size() && k < attr.size(); ++k)
      if (attr.compare(0, k, rname, 0, k) == 0) best = std::max(best, similarity(word, attr.substr(k)));
    for (auto& alias : a.aliases) {
      best = std::max(best, similarity(word, alias));
      std::size_t start = 0;
      while (start <= alias.size()) {
        auto sp = alias.find(' ', start);
        std::string tok = alias.substr(start, sp == std::string::npos ? std::string::npos : sp - start);
        if (!tok.empty()) best = std::max(best, similarity(word, tok));
        if (sp == std::string::npos) break;
        start = sp + 1;
      }
    }
  }
  for (auto& [op, v] : cq.constants_for(var)) best = std::max(best, similarity(word, v.text()));
  return best;
}

std::vector<CandidateEdge> candidate_edges(const DependencyTree& tree, const ConjunctiveQuery& cq,
                                           const Schema& schema, double beta) {
  std::vector<std::string> vars;
  for (auto& v : cq.variables()) {
    bool fixed = false;
    for (auto& [op, c] : cq.constants_for(v))
      if (op == CmpOp::EQ) fixed = true;
    bool in_head = std::find(cq.head_vars.begin(), cq.head_vars.end(), v) != cq.head_vars.end();
    if (!fixed || in_head) vars.push_back(v);
  }
  std::sort(vars.begin(), vars.end());
  std::vector<int> ids = tree.preorder();
  std::sort(ids.begin(), ids.end());
  std::vector<CandidateEdge> out;
  for (int id : ids)
    for (auto& v : vars) {
      double s = similarity(tree.node(id).word, v, cq, schema);
      if (s >= beta) out.push_back({id, v, s});
    }
  return out;
}

WordMapping max_weight_matching(const std::vector<CandidateEdge>& edges) {
  Graph g;
  std::set<int> nodes;
  std::set<std::string> vars;
  for (auto& e : edges) {
    nodes.insert(e.node);
    vars.insert(e.var);
    auto& slot = g.w[{e.node, e.var}];
    slot = std::max(slot, quantize(e.weight));
  }
  g.nodes.assign(nodes.begin(), nodes.end());
  g.vars.assign(vars.begin(), vars.end());
  Weight target = g.best();
  WordMapping m;
  std::vector<std::pair<int, std::string>> order;
  for (auto& [k, _] : g.w) order.push_back(k);
  Weight fixed = 0;
  for (auto& [node, var] : order) {
    auto it = g.w.find({node, var});
    if (it == g.w.end() || it->second <= 0) continue;
    Weight we = it->second;
    Graph rest = g.without(node, var);
    if (fixed + we + rest.best() == target) {
      m.entries[node] = var;
      fixed += we;
      g = std::move(rest);
    }
  }
  return m;
}

double matching_weight(const std::vector<CandidateEdge>& edges, const WordMapping& m) {
  double total = 0;
  for (auto& [node, var] : m.entries) {
    double best = 0;
    for (auto& e : edges)
      if (e.node == node && e.var == var) best = std::max(best, e.weight);
    total += best;
  }
  return total;
}

WordMapping map_words(const DependencyTree& tree, const ConjunctiveQuery& cq, const Schema& schema,
                      double beta) {
  if (!(beta > 0 && beta <= 1)) throw Error(Errc::InvalidParams, "beta must be in (0, 1]");
  return max_weight_matching(candidate_edges(tree, cq, schema, beta));
}

UnionWordMapping map_words(const DependencyTree& tree, const UnionQuery& q, const Schema& schema,
                           double beta) {
  UnionWordMapping m;
  for (auto& cq : q.cqs) m.per_cq.push_back(map_words(tree, cq, schema, beta));
  return m;
}

}  // namespace nlprov
