// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlprov/circuit.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>

#include "nlprov/error.hpp"

namespace nlprov {

namespace {

const char* kDot = "\xC2\xB7";

struct PairHash {
  std::size_t operator()(const Pair& p) const {
    return ValueHash()(p.second) * 31 + static_cast<std::size_t>(p.first);
  }
};

using PairCount = std::unordered_map<Pair, int, PairHash>;

struct Term {
  std::vector<Pair> pairs;
  std::vector<int> levels;
};

std::vector<Term> expand_terms(const CNode& n, int depth) {
  if (n.is_leaf()) return {Term{{Pair(n.wid, n.value)}, {-depth}}};
  if (n.type == NodeType::Sum) {
    std::vector<Term> out;
    for (auto& c : n.children) {
      auto part = expand_terms(c, depth + 1);
      out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
  }
  std::vector<Term> acc{Term{}};
  for (auto& c : n.children) {
    auto part = expand_terms(c, depth + 1);
    std::vector<Term> next;
    next.reserve(acc.size() * part.size());
    for (auto& a : acc)
      for (auto& b : part) {
        Term t = a;
        t.pairs.insert(t.pairs.end(), b.pairs.begin(), b.pairs.end());
        t.levels.insert(t.levels.end(), b.levels.begin(), b.levels.end());
        next.push_back(std::move(t));
      }
    acc = std::move(next);
  }
  return acc;
}

Monomial to_monomial(const Term& t) {
  Monomial m{t.pairs};
  std::sort(m.pairs.begin(), m.pairs.end());
  return m;
}

void count_leaves(const CNode& n, PairCount& freq, const std::set<int>* only) {
  if (n.is_leaf()) {
    if (!only || only->count(n.wid)) ++freq[Pair(n.wid, n.value)];
    return;
  }
  for (auto& c : n.children) count_leaves(c, freq, only);
}

// Greedy works on a compact copy of the circuit whose leaves are interned
// symbols, so rounds compare ints instead of values.
struct GNode {
  NodeType type = NodeType::Leaf;
  int sym = -1;
  std::vector<GNode> kids;
};

// Symbol key that borrows the value; the owner must outlive the table.
struct SymKey {
  int wid;
  const Value* value;
  bool operator==(const SymKey& o) const { return wid == o.wid && *value == *o.value; }
};

struct SymKeyHash {
  std::size_t operator()(const SymKey& k) const {
    return ValueHash()(*k.value) * 31 + static_cast<std::size_t>(k.wid);
  }
};

struct Symbols {
  std::vector<CNode> leaf;  // original leaf per symbol
  std::vector<int> wid;
  std::unordered_map<SymKey, int, SymKeyHash> index;

  int add(CNode n) {
    wid.push_back(n.wid);
    leaf.push_back(std::move(n));
    return static_cast<int>(leaf.size()) - 1;
  }
  int intern(int w, const Value& v) {
    auto [it, fresh] = index.try_emplace(SymKey{w, &v}, static_cast<int>(leaf.size()));
    if (fresh) add(CNode::leaf(w, v));
    return it->second;
  }
  int intern(const CNode& n) { return n.syn == SynOp::None ? intern(n.wid, n.value) : add(n); }
};

GNode to_gnode(const CNode& n, Symbols& syms) {
  GNode g;
  g.type = n.type;
  if (n.is_leaf()) {
    g.sym = syms.intern(n);
    return g;
  }
  g.kids.reserve(n.children.size());
  for (auto& c : n.children) g.kids.push_back(to_gnode(c, syms));
  return g;
}

GNode identity_gnode(const std::vector<Monomial>& monomials, Symbols& syms) {
  GNode sum;
  sum.type = NodeType::Sum;
  sum.kids.reserve(monomials.size());
  for (auto& m : monomials) {
    GNode prod;
    prod.type = NodeType::Product;
    prod.kids.reserve(m.pairs.size());
    for (auto& [w, v] : m.pairs) {
      GNode leaf;
      leaf.sym = syms.intern(w, v);
      prod.kids.push_back(std::move(leaf));
    }
    sum.kids.push_back(std::move(prod));
  }
  return sum;
}

CNode from_gnode(GNode&& g, const Symbols& syms) {
  if (g.type == NodeType::Leaf) return syms.leaf[g.sym];
  CNode n;
  n.type = g.type;
  n.children.reserve(g.kids.size());
  for (auto& k : g.kids) n.children.push_back(from_gnode(std::move(k), syms));
  return n;
}

void flatten(GNode& n) {
  if (n.type == NodeType::Leaf) return;
  bool flat = true;
  for (auto& c : n.kids) {
    flatten(c);
    if (c.type == n.type) flat = false;
  }
  if (!flat) {
    std::vector<GNode> kids;
    kids.reserve(n.kids.size());
    for (auto& c : n.kids) {
      if (c.type == n.type) {
        for (auto& g : c.kids) kids.push_back(std::move(g));
      } else {
        kids.push_back(std::move(c));
      }
    }
    n.kids = std::move(kids);
  }
  if (n.kids.size() == 1) {
    GNode only = std::move(n.kids[0]);
    n = std::move(only);
  }
}

struct RoundCtx {
  const Symbols& syms;
  const std::vector<char>& processed;  // by wid
  const std::vector<char>& frontier;   // by wid
  const std::vector<int>& rank;        // by symbol, -1 off the frontier
  const std::vector<int>& by_rank;
  const QuestionOrder& order;
};

void group_scope(GNode& s, int min_rank, const RoundCtx& ctx) {
  // (rank, summand) for every eligible frontier leaf
  std::vector<std::pair<int, std::size_t>> hits;
  for (std::size_t i = 0; i < s.kids.size(); ++i) {
    const GNode& ch = s.kids[i];
    if (ch.type != NodeType::Product) continue;
    std::vector<int> done;
    for (auto& g : ch.kids)
      if (g.type == NodeType::Leaf && ctx.processed[ctx.syms.wid[g.sym]]) done.push_back(ctx.syms.wid[g.sym]);
    for (auto& g : ch.kids) {
      if (g.type != NodeType::Leaf) continue;
      int r = ctx.rank[g.sym];
      if (r < min_rank) continue;
      // a processed word left in the summand must stay above what is taken out
      int w = ctx.syms.wid[g.sym];
      if (std::any_of(done.begin(), done.end(), [&](int p) { return ctx.order.leq(w, p); })) continue;
      hits.emplace_back(r, i);
    }
  }
  if (hits.empty()) return;
  std::sort(hits.begin(), hits.end());
  hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
  std::vector<char> taken(s.kids.size(), 0);
  std::vector<std::optional<GNode>> replacement(s.kids.size());
  std::vector<std::size_t> free;
  for (std::size_t k = 0; k < hits.size();) {
    std::size_t e = k;
    while (e < hits.size() && hits[e].first == hits[k].first) ++e;
    int r = hits[k].first;
    free.clear();
    for (std::size_t j = k; j < e; ++j)
      if (!taken[hits[j].second]) free.push_back(hits[j].second);
    k = e;
    if (free.size() < 2) continue;
    int key = ctx.by_rank[r];
    GNode ns;
    ns.type = NodeType::Sum;
    for (std::size_t m : free) {
      GNode p = std::move(s.kids[m]);
      for (auto it = p.kids.begin(); it != p.kids.end(); ++it)
        if (it->type == NodeType::Leaf && it->sym == key) {
          p.kids.erase(it);
          break;
        }
      if (p.kids.size() == 1) {
        GNode only = std::move(p.kids[0]);
        p = std::move(only);
      }
      if (p.type == NodeType::Sum) {
        for (auto& c : p.kids) ns.kids.push_back(std::move(c));
      } else {
        ns.kids.push_back(std::move(p));
      }
      taken[m] = 1;
    }
    group_scope(ns, r + 1, ctx);
    GNode leaf;
    leaf.sym = key;
    GNode np;
    np.type = NodeType::Product;
    np.kids.push_back(std::move(leaf));
    np.kids.push_back(std::move(ns));
    flatten(np);
    replacement[free.front()] = std::move(np);
  }
  std::vector<GNode> kids;
  for (std::size_t i = 0; i < s.kids.size(); ++i) {
    if (replacement[i]) {
      kids.push_back(std::move(*replacement[i]));
    } else if (!taken[i]) {
      kids.push_back(std::move(s.kids[i]));
    }
  }
  s.kids = std::move(kids);
}

void process_round(GNode& n, const RoundCtx& ctx) {
  if (n.type == NodeType::Leaf) return;
  for (auto& c : n.kids) process_round(c, ctx);
  if (n.type == NodeType::Sum) group_scope(n, 0, ctx);
}

// Occurrence count and first position in leaf order, per symbol.
void tally(const GNode& n, const std::vector<char>& frontier, const Symbols& syms,
           std::vector<int>& count, std::vector<int>& seen) {
  if (n.type == NodeType::Leaf) {
    if (!frontier[syms.wid[n.sym]]) return;
    if (count[n.sym]++ == 0) seen.push_back(n.sym);
    return;
  }
  for (auto& c : n.kids) tally(c, frontier, syms, count, seen);
}

CNode run_greedy(GNode g, const Symbols& syms, const QuestionOrder& order,
                 const std::set<int>& processed) {
  flatten(g);
  std::set<int> all;
  for (int w : order.wids()) all.insert(w);
  for (int w : syms.wid) all.insert(w);
  int max_wid = all.empty() ? 0 : *all.rbegin();
  for (int w : processed) max_wid = std::max(max_wid, w);
  std::vector<char> done(max_wid + 1, 0);
  for (int w : processed)
    if (w >= 0) done[w] = 1;
  std::size_t n = syms.leaf.size();
  for (;;) {
    std::vector<int> open;
    for (int w : all)
      if (!done[w]) open.push_back(w);
    if (open.empty()) break;
    std::vector<char> frontier(max_wid + 1, 0);
    for (int x : open) {
      bool maximal = true;
      for (int y : open)
        if (y != x && order.leq(x, y)) maximal = false;
      if (maximal) frontier[x] = 1;
    }
    std::vector<int> count(n, 0), by_rank;
    tally(g, frontier, syms, count, by_rank);
    // ties keep first appearance
    auto before = [&](int a, int b) {
      if (count[a] != count[b]) return count[a] > count[b];
      return syms.wid[a] < syms.wid[b];
    };
    if (!std::is_sorted(by_rank.begin(), by_rank.end(), before))
      std::stable_sort(by_rank.begin(), by_rank.end(), before);
    std::vector<int> rank(n, -1);
    for (std::size_t i = 0; i < by_rank.size(); ++i) rank[by_rank[i]] = static_cast<int>(i);
    RoundCtx ctx{syms, done, frontier, rank, by_rank, order};
    process_round(g, ctx);
    flatten(g);
    for (int x : open)
      if (frontier[x]) done[x] = 1;
  }
  return from_gnode(std::move(g), syms);
}

void leaf_text(const CNode& n, std::string& out) {
  if (n.syn == SynOp::None) {
    out += "[" + n.value.text() + "]";
    return;
  }
  out += n.syn == SynOp::Range ? "Range(" : "Size(";
  for (std::size_t i = 0; i < n.syn_values.size(); ++i)
    out += (i ? "," : "") + std::string("[") + n.syn_values[i].text() + "]";
  out += ")";
}

void text_rec(const CNode& n, bool in_product, std::string& out) {
  if (n.is_leaf()) {
    leaf_text(n, out);
    return;
  }
  if (n.type == NodeType::Product) {
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i) out += kDot;
      text_rec(n.children[i], true, out);
    }
    return;
  }
  if (in_product) out += "(";
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i) out += " + ";
    text_rec(n.children[i], false, out);
  }
  if (in_product) out += ")";
}

class CircuitParser {
 public:
  CircuitParser(std::string_view s, const LeafResolver& r) : s_(s), resolve_(r) {}

  CNode parse() {
    CNode n = expr();
    skip();
    if (i_ != s_.size()) fail("trailing text");
    canonicalize(n);
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    throw Error(Errc::ParseError, "circuit text at offset " + std::to_string(i_) + ": " + why);
  }
  void skip() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\n' || s_[i_] == '\t' || s_[i_] == '\r')) ++i_;
  }
  bool dot() {
    skip();
    if (s_.substr(i_, 2) == kDot) {
      i_ += 2;
      return true;
    }
    if (i_ < s_.size() && s_[i_] == '*') {
      ++i_;
      return true;
    }
    return false;
  }
  CNode expr() {
    std::vector<CNode> kids{term()};
    for (;;) {
      skip();
      if (i_ < s_.size() && s_[i_] == '+') {
        ++i_;
        kids.push_back(term());
      } else {
        break;
      }
    }
    if (kids.size() == 1) return std::move(kids[0]);
    return CNode::sum(std::move(kids));
  }
  CNode term() {
    std::vector<CNode> kids{factor()};
    while (dot()) kids.push_back(factor());
    if (kids.size() == 1) return std::move(kids[0]);
    return CNode::product(std::move(kids));
  }
  CNode factor() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end");
    if (s_[i_] == '(') {
      ++i_;
      CNode n = expr();
      skip();
      if (i_ >= s_.size() || s_[i_] != ')') fail("expected ')'");
      ++i_;
      return n;
    }
    if (s_[i_] == '[') {
      auto close = s_.find(']', i_);
      if (close == std::string_view::npos) fail("unterminated leaf");
      std::string v(s_.substr(i_ + 1, close - i_ - 1));
      i_ = close + 1;
      Pair p = resolve_(v);
      return CNode::leaf(p.first, p.second);
    }
    fail("expected '[' or '('");
  }

  std::string_view s_;
  const LeafResolver& resolve_;
  std::size_t i_ = 0;
};

}  // namespace

CNode CNode::leaf(int wid, Value v) {
  CNode n;
  n.type = NodeType::Leaf;
  n.wid = wid;
  n.value = std::move(v);
  return n;
}

CNode CNode::sum(std::vector<CNode> kids) {
  CNode n;
  n.type = NodeType::Sum;
  n.children = std::move(kids);
  return n;
}

CNode CNode::product(std::vector<CNode> kids) {
  CNode n;
  n.type = NodeType::Product;
  n.children = std::move(kids);
  return n;
}

bool QuestionOrder::leq(int wx, int wy) const {
  if (wx == wy) return true;
  auto a = node_of_wid.find(wx), b = node_of_wid.find(wy);
  if (a == node_of_wid.end() || b == node_of_wid.end()) return false;
  return leq_nodes(a->second, b->second);
}

std::vector<int> QuestionOrder::wids() const {
  std::vector<int> out;
  for (auto& [w, _] : node_of_wid) out.push_back(w);
  return out;
}

QuestionOrder question_order(const DependencyTree& tree, const std::map<int, int>& node_of_wid) {
  QuestionOrder o;
  o.node_of_wid = node_of_wid;
  for (auto& [w, n] : node_of_wid) o.wid_of_node[n] = w;
  // A conjunct ranks beside its head conjunct rather than below it.
  for (auto& [x, _] : o.wid_of_node) {
    o.pairs.emplace(x, x);
    for (int cur = x; tree.node(cur).parent >= 0; cur = tree.node(cur).parent) {
      int up = tree.node(cur).parent;
      if (tree.node(cur).rel != "conj" && o.wid_of_node.count(up)) o.pairs.emplace(x, up);
    }
  }
  return o;
}

QuestionOrder question_order(const DependencyTree& tree, const UnionWordMapping& mapping) {
  return question_order(tree, mapping.nodes_by_word());
}

void canonicalize(CNode& n) {
  if (n.is_leaf()) return;
  bool flat = true;
  for (auto& c : n.children) {
    canonicalize(c);
    if (c.type == n.type) flat = false;
  }
  if (flat && n.children.size() != 1) return;
  std::vector<CNode> kids;
  kids.reserve(n.children.size());
  for (auto& c : n.children) {
    if (c.type == n.type) {
      for (auto& g : c.children) kids.push_back(std::move(g));
    } else {
      kids.push_back(std::move(c));
    }
  }
  n.children = std::move(kids);
  if (n.children.size() == 1) {
    CNode only = std::move(n.children[0]);
    n = std::move(only);
  }
}

CNode identity(const std::vector<Monomial>& monomials) {
  std::vector<CNode> terms;
  for (auto& m : monomials) {
    std::vector<CNode> leaves;
    for (auto& [w, v] : m.pairs) leaves.push_back(CNode::leaf(w, v));
    if (leaves.size() == 1) {
      terms.push_back(std::move(leaves[0]));
    } else {
      terms.push_back(CNode::product(std::move(leaves)));
    }
  }
  if (terms.size() == 1) return std::move(terms[0]);
  return CNode::sum(std::move(terms));
}

std::vector<Monomial> expand(const CNode& c) {
  std::vector<Monomial> out;
  for (auto& t : expand_terms(c, 0)) out.push_back(to_monomial(t));
  return out;
}

int level(const CNode& root, const CNode* target) {
  std::vector<std::pair<const CNode*, int>> stack{{&root, 0}};
  while (!stack.empty()) {
    auto [n, d] = stack.back();
    stack.pop_back();
    if (n == target) return -d;
    for (auto& c : n->children) stack.emplace_back(&c, d + 1);
  }
  throw Error(Errc::NotFound, "node is not part of the circuit");
}

FactorizationMetrics metrics(const CNode& c) {
  PairCount freq;
  count_leaves(c, freq, nullptr);
  FactorizationMetrics m;
  for (auto& [_, k] : freq) {
    m.length += k;
    m.readability = std::max(m.readability, k);
  }
  return m;
}

bool is_compatible(const CNode& c, const QuestionOrder& order,
                   const std::vector<Monomial>& assignments) {
  auto terms = expand_terms(c, 0);
  std::vector<Monomial> have;
  for (auto& t : terms) have.push_back(to_monomial(t));
  if (!same_multiset(have, assignments)) {
    std::set<Pair> leaves;
    for (auto& m : have) leaves.insert(m.pairs.begin(), m.pairs.end());
    for (auto& m : assignments)
      for (auto& p : m.pairs)
        if (!leaves.count(p))
          throw Error(Errc::LeafNotFound, "no leaf for (" + std::to_string(p.first) + "," +
                                              p.second.text() + ")");
    throw Error(Errc::LeafNotFound, "circuit does not expand to the assignments");
  }
  for (auto& t : terms)
    for (std::size_t i = 0; i < t.pairs.size(); ++i)
      for (std::size_t j = 0; j < t.pairs.size(); ++j) {
        int x = t.pairs[i].first, y = t.pairs[j].first;
        if (x == y || !order.leq(x, y)) continue;
        if (t.levels[i] > t.levels[j]) return false;
      }
  return true;
}

void greedy_continue(CNode& f, const QuestionOrder& order, std::set<int> processed) {
  Symbols syms;
  GNode g = to_gnode(f, syms);
  f = run_greedy(std::move(g), syms, order, processed);
}

CNode greedy_factorize(const QuestionOrder& order, const std::vector<Monomial>& monomials) {
  if (monomials.empty()) return identity(monomials);
  Symbols syms;
  GNode g = identity_gnode(monomials, syms);
  return run_greedy(std::move(g), syms, order, {});
}

CNode greedy_factorize(const DependencyTree& tree, const UnionWordMapping& mapping,
                       const Polynomial& poly) {
  return greedy_factorize(question_order(tree, mapping), poly.monomials);
}

std::string FactorTemplate::text() const {
  std::string out;
  for (int w : chain) {
    if (!out.empty()) out += " > ";
    out += "x" + std::to_string(w);
  }
  return out;
}

FactorTemplate derive_template(const CNode& factorized, const QuestionOrder& order) {
  FactorTemplate t;
  auto wids = order.wids();
  for (int w : wids) {
    bool total = true;
    for (int v : wids)
      if (!order.leq(v, w) && !order.leq(w, v)) total = false;
    if (total) t.chain.push_back(w);
  }
  std::sort(t.chain.begin(), t.chain.end(), [&](int a, int b) { return order.leq(b, a) && a != b; });
  for (auto& m : expand(factorized))
    for (int w : t.chain)
      if (!m.find(w)) throw Error(Errc::TemplateMismatch, "factorization lacks word " + std::to_string(w));
  return t;
}

namespace {

CNode nest(std::vector<Monomial> ms, const std::vector<int>& chain, std::size_t depth) {
  if (depth == chain.size()) return identity(ms);
  int w = chain[depth];
  std::vector<Value> order;
  std::map<Value, std::vector<Monomial>> groups;
  for (auto& m : ms) {
    const Value& v = *m.find(w);
    if (!groups.count(v)) order.push_back(v);
    groups[v].push_back(m);
  }
  std::vector<CNode> kids;
  for (auto& v : order) {
    auto& g = groups[v];
    if (g.size() == 1) {
      kids.push_back(identity(g));
      continue;
    }
    for (auto& m : g)
      m.pairs.erase(std::find_if(m.pairs.begin(), m.pairs.end(),
                                 [&](const Pair& p) { return p.first == w; }));
    kids.push_back(CNode::product({CNode::leaf(w, v), nest(g, chain, depth + 1)}));
  }
  CNode s = kids.size() == 1 ? std::move(kids[0]) : CNode::sum(std::move(kids));
  canonicalize(s);
  return s;
}

}  // namespace

CNode apply_template(const FactorTemplate& t, const std::vector<Monomial>& monomials,
                     const QuestionOrder& order) {
  if (monomials.empty()) throw Error(Errc::TemplateMismatch, "no monomials");
  for (auto& m : monomials)
    for (int w : t.chain)
      if (!m.find(w)) throw Error(Errc::TemplateMismatch, "monomial lacks word " + std::to_string(w));
  CNode f = nest(monomials, t.chain, 0);
  greedy_continue(f, order, std::set<int>(t.chain.begin(), t.chain.end()));
  return f;
}

CNode factorize_with_template(const FactorTemplate& t, const std::vector<Monomial>& monomials,
                              const QuestionOrder& order) {
  try {
    return apply_template(t, monomials, order);
  } catch (const Error& e) {
    if (e.code() != Errc::TemplateMismatch) throw;
    return greedy_factorize(order, monomials);
  }
}

std::string to_text(const CNode& c) {
  std::string out;
  text_rec(c, false, out);
  return out;
}

CNode parse_circuit(std::string_view text, const LeafResolver& resolve) {
  return CircuitParser(text, resolve).parse();
}

LeafResolver resolver_for(const std::vector<Monomial>& monomials) {
  std::map<std::string, std::set<Pair>> by_text;
  for (auto& m : monomials)
    for (auto& p : m.pairs) by_text[p.second.text()].insert(p);
  return [by_text](const std::string& text) -> Pair {
    auto it = by_text.find(trim(text));
    if (it == by_text.end()) throw Error(Errc::LeafNotFound, "no pair with value '" + text + "'");
    if (it->second.size() > 1) throw Error(Errc::ParseError, "value '" + text + "' is ambiguous");
    return *it->second.begin();
  };
}

}  // namespace nlprov
