// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlprov/provenance.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <unordered_map>

#include "nlprov/error.hpp"

namespace nlprov {

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<Value>& k) const {
    std::size_t h = k.size();
    ValueHash vh;
    for (auto& v : k) h = h * 1000003u ^ vh(v);
    return h;
  }
};

using Index = std::unordered_map<std::vector<Value>, std::vector<std::size_t>, KeyHash>;

// Per-atom join plan: which term positions are already fixed when the atom
// is reached, and which constraints become checkable right after it.
struct AtomPlan {
  std::vector<int> key_pos;
  std::vector<int> key_var;  // var slot, or -1 for a constant
  std::vector<std::pair<int, int>> binds;  // (position, var slot) first seen here
  std::vector<std::pair<int, int>> repeats;  // (position, var slot) bound earlier in this atom
  std::vector<std::size_t> checks;
  Index index;
  bool indexed = false;
};

}  // namespace

const Value& Assignment::at(const std::string& var) const {
  auto it = var_values.find(var);
  if (it == var_values.end()) throw Error(Errc::NotFound, "assignment has no variable " + var);
  return it->second;
}

const Value* Monomial::find(int wid) const {
  for (auto& p : pairs)
    if (p.first == wid) return &p.second;
  return nullptr;
}

std::string Monomial::text() const {
  std::string out;
  for (auto& [w, v] : pairs) {
    if (!out.empty()) out += "\xC2\xB7";
    out += "(" + std::to_string(w) + "," + v.text() + ")";
  }
  return out;
}

std::vector<Monomial> Polynomial::sorted() const {
  std::vector<Monomial> m = monomials;
  std::sort(m.begin(), m.end());
  return m;
}

std::string Polynomial::text() const {
  std::string out;
  for (auto& m : sorted()) {
    if (!out.empty()) out += " + ";
    out += m.text();
  }
  return out;
}

std::string tuple_text(const std::vector<Value>& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? ", " : "") + t[i].text();
  return out + ")";
}

std::vector<Assignment> evaluate(const ConjunctiveQuery& cq, const Database& db,
                                 std::size_t source_cq) {
  for (auto& a : cq.atoms)
    if (!db.schema.find(a.relation) || !db.tables.count(a.relation))
      throw Error(Errc::UnknownRelation, "unknown relation '" + a.relation + "'");
  cq.validate(db.schema);

  std::map<std::string, int> slot;
  std::vector<std::string> names;
  for (auto& a : cq.atoms)
    for (auto& t : a.terms)
      if (t.is_var && !slot.count(t.var)) {
        slot[t.var] = static_cast<int>(names.size());
        names.push_back(t.var);
      }

  std::vector<AtomPlan> plan(cq.atoms.size());
  std::vector<bool> bound(names.size(), false);
  std::vector<bool> scheduled(cq.constraints.size(), false);
  auto ready = [&](const Constraint& c) {
    for (const Term* t : {&c.lhs, &c.rhs})
      if (t->is_var && !bound[slot.at(t->var)]) return false;
    return true;
  };
  // constraints over constants only
  for (std::size_t c = 0; c < cq.constraints.size(); ++c)
    if (ready(cq.constraints[c])) {
      scheduled[c] = true;
      if (!cq.constraints[c].holds(cq.constraints[c].lhs.constant, cq.constraints[c].rhs.constant))
        return {};
    }
  for (std::size_t i = 0; i < cq.atoms.size(); ++i) {
    AtomPlan& p = plan[i];
    std::vector<bool> local(names.size(), false);
    for (std::size_t k = 0; k < cq.atoms[i].terms.size(); ++k) {
      const Term& t = cq.atoms[i].terms[k];
      if (!t.is_var) {
        p.key_pos.push_back(static_cast<int>(k));
        p.key_var.push_back(-1);
        continue;
      }
      int s = slot.at(t.var);
      if (bound[s]) {
        p.key_pos.push_back(static_cast<int>(k));
        p.key_var.push_back(s);
      } else if (local[s]) {
        p.repeats.emplace_back(static_cast<int>(k), s);
      } else {
        local[s] = true;
        p.binds.emplace_back(static_cast<int>(k), s);
      }
    }
    for (auto& [_, s] : p.binds) bound[s] = true;
    for (std::size_t c = 0; c < cq.constraints.size(); ++c)
      if (!scheduled[c] && ready(cq.constraints[c])) {
        scheduled[c] = true;
        p.checks.push_back(c);
      }
  }

  std::vector<const Value*> val(names.size(), nullptr);
  std::vector<std::size_t> rows(cq.atoms.size());
  std::vector<Assignment> out;
  auto term_value = [&](const Term& t) -> const Value& {
    return t.is_var ? *val[slot.at(t.var)] : t.constant;
  };

  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == cq.atoms.size()) {
      Assignment a;
      a.source_cq = source_cq;
      a.atom_tuples = rows;
      for (std::size_t s = 0; s < names.size(); ++s) a.var_values.emplace(names[s], *val[s]);
      for (auto& h : cq.head_vars) a.head.push_back(*val[slot.at(h)]);
      out.push_back(std::move(a));
      return;
    }
    AtomPlan& p = plan[i];
    const auto& table = db.table(cq.atoms[i].relation);
    auto visit = [&](std::size_t r) {
      const Tuple& row = table[r];
      for (auto& [pos, s] : p.binds) val[s] = &row[pos];
      for (auto& [pos, s] : p.repeats)
        if (!(row[pos] == *val[s])) return;
      for (std::size_t c : p.checks) {
        const Constraint& con = cq.constraints[c];
        if (!con.holds(term_value(con.lhs), term_value(con.rhs))) return;
      }
      rows[i] = r;
      rec(i + 1);
    };
    if (p.key_pos.empty()) {
      for (std::size_t r = 0; r < table.size(); ++r) visit(r);
    } else {
      if (!p.indexed) {
        for (std::size_t r = 0; r < table.size(); ++r) {
          std::vector<Value> key;
          for (int pos : p.key_pos) key.push_back(table[r][pos]);
          p.index[key].push_back(r);
        }
        p.indexed = true;
      }
      std::vector<Value> key;
      for (std::size_t k = 0; k < p.key_pos.size(); ++k)
        key.push_back(p.key_var[k] < 0 ? cq.atoms[i].terms[p.key_pos[k]].constant
                                       : *val[p.key_var[k]]);
      auto it = p.index.find(key);
      if (it == p.index.end()) return;
      for (std::size_t r : it->second) visit(r);
    }
  };
  rec(0);
  return out;
}

std::vector<Assignment> evaluate(const UnionQuery& q, const Database& db) {
  std::vector<Assignment> out;
  for (std::size_t i = 0; i < q.cqs.size(); ++i) {
    auto part = evaluate(q.cqs[i], db, i);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return out;
}

std::vector<Polynomial> build_provenance(const std::vector<Assignment>& assignments,
                                         const UnionQuery& q, const UnionWordMapping& mapping,
                                         const DependencyTree& tree) {
  mapping.validate(tree, q);
  for (std::size_t i = 0; i < q.cqs.size(); ++i)
    for (auto& h : q.cqs[i].head_vars)
      if (!mapping.per_cq[i].node_of(h))
        throw Error(Errc::UnmappedHead, "no word maps to head variable " + h + " of query " +
                                            std::to_string(i + 1));
  auto wid = mapping.word_ids();
  std::map<std::vector<Value>, Polynomial> by_answer;
  for (std::size_t k = 0; k < assignments.size(); ++k) {
    const Assignment& a = assignments[k];
    if (a.source_cq >= mapping.per_cq.size())
      throw Error(Errc::InvalidMapping, "assignment from unknown query");
    Monomial m;
    for (auto& [node, var] : mapping.per_cq[a.source_cq].entries)
      m.pairs.emplace_back(wid.at(node), a.at(var));
    std::sort(m.pairs.begin(), m.pairs.end());
    Polynomial& p = by_answer[a.head];
    p.answer = a.head;
    p.monomials.push_back(std::move(m));
    p.sources.push_back(k);
  }
  std::vector<Polynomial> out;
  for (auto& [_, p] : by_answer) out.push_back(std::move(p));
  return out;
}

Polynomial combine(const std::vector<Polynomial>& polys) {
  Polynomial all;
  for (auto& p : polys) {
    all.monomials.insert(all.monomials.end(), p.monomials.begin(), p.monomials.end());
    all.sources.insert(all.sources.end(), p.sources.begin(), p.sources.end());
  }
  return all;
}

bool same_multiset(std::vector<Monomial> a, std::vector<Monomial> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace nlprov
