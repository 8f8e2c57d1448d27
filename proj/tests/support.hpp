// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
// Shared fixtures, generators and brute-force oracles for the test suites.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nlprov/circuit.hpp"
#include "nlprov/ingest.hpp"
#include "nlprov/provenance.hpp"
#include "nlprov/query.hpp"
#include "nlprov/tree.hpp"

#ifndef NLPROV_DATA_DIR
#define NLPROV_DATA_DIR "data"
#endif

namespace nlprov::testing {

inline std::string fixture_dir(const std::string& name) {
  return std::string(NLPROV_DATA_DIR) + "/fixtures/" + name;
}

inline const Fixture& fixture(const std::string& name) {
  static std::map<std::string, Fixture> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, load_fixture(fixture_dir(name))).first;
  return it->second;
}

// Hand-built circuits for the running example; the UPENN part is shared.
inline const char* kF1Tau =
    "[TAU]·([Tova M.]·([VLDB]·([2006]·[Querying...] + [2007]·[Monitoring...]) + "
    "[SIGMOD]·[2014]·([OASSIS...] + [A sample...])) + [Slava N.]·[OASSIS...]·[SIGMOD]·[2014])";
inline const char* kF2Tau =
    "[TAU]·([SIGMOD]·[2014]·([OASSIS...]·([Tova M.] + [Slava N.]) + [Tova M.]·[A sample...]) + "
    "[VLDB]·[Tova M.]·([2006]·[Querying...] + [2007]·[Monitoring...]))";
inline const char* kUpenn = "[UPENN]·[Susan D.]·[OASSIS...]·[SIGMOD]·[2014]";

inline Monomial mono(std::vector<Pair> pairs) {
  std::sort(pairs.begin(), pairs.end());
  return Monomial{std::move(pairs)};
}

// Random question shape over word ids 1..k: node i hangs under a random
// earlier node, so word 1 is the root.
struct RandomQuestion {
  DependencyTree tree;
  QuestionOrder order;
};

inline RandomQuestion random_question(int k, std::mt19937_64& rng) {
  std::vector<DepNode> nodes;
  for (int i = 1; i <= k; ++i) {
    int parent = i == 1 ? -1 : std::uniform_int_distribution<int>(1, i - 1)(rng);
    nodes.push_back({i, "w" + std::to_string(i), "NN", i == 1 ? "root" : "dep", parent, {}});
  }
  DependencyTree tree(nodes);
  std::map<int, int> node_of_wid;
  for (int i = 1; i <= k; ++i) node_of_wid[i] = i;
  return {tree, question_order(tree, node_of_wid)};
}

// Every monomial carries all k words; values come from a small pool so that
// sharing is frequent.
inline std::vector<Monomial> random_monomials(int k, int n, int pool, std::mt19937_64& rng) {
  std::vector<Monomial> out;
  std::uniform_int_distribution<int> pick(0, pool - 1);
  for (int i = 0; i < n; ++i) {
    std::vector<Pair> pairs;
    for (int w = 1; w <= k; ++w) pairs.emplace_back(w, Value::str(std::string(1, char('a' + pick(rng)))));
    out.push_back(mono(pairs));
  }
  return out;
}

// Leaf depths per expanded term, computed straight from the circuit shape.
inline void depth_terms(const CNode& c, int depth, std::vector<std::map<Pair, int>>& out) {
  if (c.is_leaf()) {
    out = {{{Pair{c.wid, c.value}, depth}}};
    return;
  }
  if (c.type == NodeType::Sum) {
    out.clear();
    for (auto& k : c.children) {
      std::vector<std::map<Pair, int>> part;
      depth_terms(k, depth + 1, part);
      out.insert(out.end(), part.begin(), part.end());
    }
    return;
  }
  std::vector<std::map<Pair, int>> acc{{}};
  for (auto& k : c.children) {
    std::vector<std::map<Pair, int>> part, next;
    depth_terms(k, depth + 1, part);
    for (auto& a : acc)
      for (auto& p : part) {
        auto m = a;
        m.insert(p.begin(), p.end());
        next.push_back(std::move(m));
      }
    acc = std::move(next);
  }
  out = std::move(acc);
}

// Compatibility by definition: whenever x is below y in the question, the
// value of x is never closer to the root than the value of y in any term.
inline bool compatible_by_definition(const CNode& c, const QuestionOrder& order) {
  std::vector<std::map<Pair, int>> terms;
  depth_terms(c, 0, terms);
  for (auto& t : terms)
    for (auto& [px, dx] : t)
      for (auto& [py, dy] : t)
        if (px.first != py.first && order.leq(px.first, py.first) && dx < dy) return false;
  return true;
}

inline int leaf_count(const CNode& c) {
  if (c.is_leaf()) return 1;
  int n = 0;
  for (auto& k : c.children) n += leaf_count(k);
  return n;
}

// Circuit text that keeps word ids, so equal values of different words stay apart.
inline std::string keyed_text(const CNode& c) {
  if (c.is_leaf()) return std::to_string(c.wid) + ":" + c.value.text();
  std::string out = c.type == NodeType::Sum ? "+(" : "*(";
  for (auto& k : c.children) out += keyed_text(k) + ",";
  return out + ")";
}

// Exhaustive enumeration of factorizations of a small multiset of monomials:
// sums over set partitions, common factors pulled out, and two-by-two
// products of sums. Circuits are returned canonicalized and deduplicated.
class FactorizationOracle {
 public:
  std::vector<CNode> all(const std::vector<Monomial>& ms) {
    std::vector<Monomial> key = ms;
    std::sort(key.begin(), key.end());
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::map<std::string, CNode> found;
    auto keep = [&](CNode c) {
      canonicalize(c);
      found.emplace(keyed_text(c), std::move(c));
    };
    if (key.size() == 1) {
      keep(product_of(key[0].pairs));
    } else {
      pull_out(key, keep);
      partitions(key, keep);
      if (key.size() == 4) products(key, keep);
    }
    std::vector<CNode> out;
    for (auto& [_, c] : found) out.push_back(std::move(c));
    memo_.emplace(key, out);
    return out;
  }

  // Minimal length over compatible factorizations.
  int min_compatible_length(const std::vector<Monomial>& ms, const QuestionOrder& order) {
    int best = -1;
    for (auto& c : all(ms))
      if (compatible_by_definition(c, order)) {
        int len = leaf_count(c);
        if (best < 0 || len < best) best = len;
      }
    return best;
  }

 private:
  static CNode product_of(const std::vector<Pair>& pairs) {
    std::vector<CNode> leaves;
    for (auto& p : pairs) leaves.push_back(CNode::leaf(p.first, p.second));
    return leaves.size() == 1 ? leaves[0] : CNode::product(std::move(leaves));
  }

  static std::vector<Pair> minus(const std::vector<Pair>& a, const std::vector<Pair>& b) {
    std::vector<Pair> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  }

  void pull_out(const std::vector<Monomial>& ms, const std::function<void(CNode)>& keep) {
    std::vector<Pair> common = ms[0].pairs;
    for (auto& m : ms) {
      std::vector<Pair> next;
      std::set_intersection(common.begin(), common.end(), m.pairs.begin(), m.pairs.end(),
                            std::back_inserter(next));
      common = std::move(next);
    }
    std::size_t n = common.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      std::vector<Pair> c;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) c.push_back(common[i]);
      std::vector<Monomial> rest;
      bool empty = false;
      for (auto& m : ms) {
        Monomial r{minus(m.pairs, c)};
        if (r.pairs.empty()) empty = true;
        rest.push_back(std::move(r));
      }
      if (empty) continue;
      for (auto& r : all(rest)) keep(CNode::product({product_of(c), r}));
    }
  }

  void partitions(const std::vector<Monomial>& ms, const std::function<void(CNode)>& keep) {
    std::size_t n = ms.size();
    std::vector<int> block(n, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
      if (i == n) {
        if (used < 2) return;
        std::vector<std::vector<Monomial>> parts(static_cast<std::size_t>(used));
        for (std::size_t j = 0; j < n; ++j) parts[static_cast<std::size_t>(block[j])].push_back(ms[j]);
        std::vector<CNode> acc;
        std::function<void(std::size_t)> choose = [&](std::size_t p) {
          if (p == parts.size()) {
            keep(CNode::sum(acc));
            return;
          }
          for (auto& c : all(parts[p])) {
            acc.push_back(c);
            choose(p + 1);
            acc.pop_back();
          }
        };
        choose(0);
        return;
      }
      for (int b = 0; b <= used; ++b) {
        block[i] = b;
        rec(i + 1, std::max(used, b + 1));
      }
    };
    rec(0, 0);
  }

  // (a1 + a2)·(b1 + b2) with the four cross terms matching the monomials.
  void products(const std::vector<Monomial>& ms, const std::function<void(CNode)>& keep) {
    std::vector<std::size_t> idx{0, 1, 2, 3};
    const auto& m0 = ms[0].pairs;
    std::size_t n = m0.size();
    do {
      if (idx[0] != 0) continue;
      for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
        std::vector<Pair> a1, b1;
        for (std::size_t i = 0; i < n; ++i) (mask >> i & 1 ? a1 : b1).push_back(m0[i]);
        const auto& m1 = ms[idx[1]].pairs;
        const auto& m2 = ms[idx[2]].pairs;
        const auto& m3 = ms[idx[3]].pairs;
        if (!std::includes(m1.begin(), m1.end(), a1.begin(), a1.end())) continue;
        if (!std::includes(m2.begin(), m2.end(), b1.begin(), b1.end())) continue;
        auto b2 = minus(m1, a1);
        auto a2 = minus(m2, b1);
        if (a2.empty() || b2.empty()) continue;
        std::vector<Pair> cross;
        std::set_union(a2.begin(), a2.end(), b2.begin(), b2.end(), std::back_inserter(cross));
        if (cross != m3 || cross.size() != a2.size() + b2.size()) continue;
        for (auto& fa : all({Monomial{a1}, Monomial{a2}}))
          for (auto& fb : all({Monomial{b1}, Monomial{b2}})) keep(CNode::product({fa, fb}));
      }
    } while (std::next_permutation(idx.begin(), idx.end()));
  }

  std::map<std::vector<Monomial>, std::vector<CNode>> memo_;
};

// Toy schema, databases and conjunctive queries for the evaluation oracle.
inline const char* kToySchema =
    "R(a:number, b:number)\n"
    "S(b:number, c:number)\n"
    "T(a:number, c:number, d:number)\n";

inline Database random_db(std::mt19937_64& rng) {
  Database db;
  db.schema = Schema::parse(kToySchema);
  std::uniform_int_distribution<int> val(0, 3), size(0, 10);
  int budget = 30;
  for (auto& r : db.schema.relations) {
    int n = std::min(size(rng), budget);
    budget -= n;
    auto& rows = db.tables[r.name];
    for (int i = 0; i < n; ++i) {
      Tuple t;
      for (std::size_t k = 0; k < r.attrs.size(); ++k) t.push_back(Value::num(val(rng)));
      rows.push_back(t);
    }
  }
  return db;
}

struct ToyQuery {
  std::string text;
  ConjunctiveQuery cq;
};

inline ToyQuery random_cq(const Schema& schema, std::mt19937_64& rng) {
  const char* vars[] = {"x", "y", "z", "u", "v"};
  std::uniform_int_distribution<int> atoms(2, 4), rel(0, 2), var(0, 4), val(0, 3), coin(0, 9), op(0, 2);
  std::ostringstream body;
  std::vector<std::string> used;
  int n = atoms(rng);
  for (int i = 0; i < n; ++i) {
    const Relation& r = schema.relations[static_cast<std::size_t>(rel(rng))];
    body << (i ? ", " : "") << r.name << "(";
    for (std::size_t k = 0; k < r.attrs.size(); ++k) {
      if (k) body << ", ";
      if (coin(rng) < 8) {
        std::string v = vars[var(rng)];
        used.push_back(v);
        body << v;
      } else {
        body << val(rng);
      }
    }
    body << ")";
  }
  if (used.empty()) {
    // guarantee a head variable
    body << ", R(x, " << val(rng) << ")";
    used.push_back("x");
  }
  int constraints = coin(rng) % 3;
  for (int i = 0; i < constraints; ++i) {
    const char* ops[] = {"=", "<", ">"};
    body << ", " << used[static_cast<std::size_t>(var(rng)) % used.size()] << " " << ops[op(rng)] << " "
         << val(rng);
  }
  std::string head = used[static_cast<std::size_t>(var(rng)) % used.size()];
  std::string other = used[static_cast<std::size_t>(var(rng)) % used.size()];
  if (other != head && coin(rng) < 5) head += ", " + other;
  std::string text = "query(" + head + ") :- " + body.str();
  return {text, ConjunctiveQuery::parse(text)};
}

// Every combination of one row per atom, kept when bindings agree and all
// constants and comparisons hold.
inline std::vector<std::vector<std::size_t>> cross_product_oracle(const ConjunctiveQuery& cq, const Database& db) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> pick(cq.atoms.size(), 0);
  auto cmp = [](const Value& a, CmpOp o, const Value& b) {
    double x = a.as_double(), y = b.as_double();
    return o == CmpOp::EQ ? x == y : o == CmpOp::LT ? x < y : x > y;
  };
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == cq.atoms.size()) {
      std::map<std::string, Value> bind;
      for (std::size_t a = 0; a < cq.atoms.size(); ++a) {
        const Tuple& row = db.table(cq.atoms[a].relation)[pick[a]];
        for (std::size_t k = 0; k < row.size(); ++k) {
          const Term& t = cq.atoms[a].terms[k];
          if (!t.is_var) {
            if (!(t.constant == row[k])) return;
            continue;
          }
          auto [it, fresh] = bind.emplace(t.var, row[k]);
          if (!fresh && !(it->second == row[k])) return;
        }
      }
      for (auto& c : cq.constraints) {
        Value l = c.lhs.is_var ? bind.at(c.lhs.var) : c.lhs.constant;
        Value r = c.rhs.is_var ? bind.at(c.rhs.var) : c.rhs.constant;
        if (!cmp(l, c.op, r)) return;
      }
      out.push_back(pick);
      return;
    }
    std::size_t n = db.table(cq.atoms[i].relation).size();
    for (std::size_t r = 0; r < n; ++r) {
      pick[i] = r;
      rec(i + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace nlprov::testing
