// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlprov/nlgen.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <optional>

#include "nlprov/error.hpp"

namespace nlprov {

namespace {

constexpr double kBlockKey = 1e9;

bool is_plural(const DepNode& n) { return n.pos == "NNS" || n.pos == "NNPS"; }

bool is_relative_pronoun(const DepNode& n) {
  return (n.pos == "WP" || n.pos == "WDT") && n.rel == "nsubj";
}

std::string pluralize(const std::string& w) {
  if (!w.empty() && std::tolower(static_cast<unsigned char>(w.back())) == 's') return w;
  return w + "s";
}

double sort_key(const ANode& n) {
  if (n.kind == AKind::Block) return n.key;
  double k = n.key;
  for (auto& c : n.children) k = std::min(k, sort_key(c));
  return k;
}

class Builder {
 public:
  Builder(const NlContext& ctx, const WordValues& a) : c_(ctx), a_(a), t_(ctx.tree) {}

  ANode top() {
    auto rep = require_question_tree(t_, c_.cfg);
    return object(rep.object, true);
  }

 private:
  std::optional<int> wid(int node) const {
    auto it = c_.wid_of_node.find(node);
    if (it == c_.wid_of_node.end()) return std::nullopt;
    return it->second;
  }

  const Value* value(int node) const {
    auto w = wid(node);
    if (!w) return nullptr;
    auto it = a_.find(*w);
    return it == a_.end() ? nullptr : &it->second;
  }

  std::vector<int> content_children(int q) const {
    std::vector<int> out;
    for (int ch : t_.node(q).children)
      if (!c_.cfg.det_rels.count(t_.node(ch).rel)) out.push_back(ch);
    return out;
  }

  ANode kept(int q) const {
    ANode n;
    n.kind = AKind::Kept;
    n.text = t_.node(q).word;
    n.key = q;
    if (auto w = wid(q)) n.wids = {*w};
    return n;
  }

  ANode kept_copy(int q) const {
    ANode n = kept(q);
    for (int ch : t_.node(q).children) n.children.push_back(kept_copy(ch));
    return n;
  }

  ANode replaced(int q, const Value& v) const {
    ANode n;
    n.kind = AKind::Replaced;
    n.key = q;
    n.wids = {*wid(q)};
    n.quoted = c_.quoted(n.wids[0]);
    n.text = v.text();
    return n;
  }

  // Mapped node (or word) stands for its value; otherwise the word stays.
  ANode word_or_value(int q) const {
    if (const Value* v = value(q)) return replaced(q, *v);
    return kept(q);
  }

  std::vector<int> mapped_in(int q) const {
    std::vector<int> out;
    for (int n : t_.subtree(q))
      if (wid(n)) out.push_back(n);
    return out;
  }

  // The equality word replaces comparison modifiers ("after 2005" becomes
  // "in 2014"); other modifiers keep their own word ("of SIGMOD").
  std::string connector_for(int value_node, const std::string& word) const {
    auto at = c_.attr_of_node.find(value_node);
    if (at == c_.attr_of_node.end() || !c_.ranged_attrs.count(at->second)) return word;
    auto it = c_.connectors.find(c_.category_of_node(value_node));
    return it == c_.connectors.end() ? word : it->second;
  }

  ANode connector_with_value(double key, const std::string& conn, int value_node, const Value& v,
                             double value_key, std::vector<int> wids) const {
    ANode in;
    in.kind = AKind::Inserted;
    in.text = conn;
    in.key = key;
    ANode val;
    val.kind = AKind::Replaced;
    val.text = v.text();
    val.key = value_key;
    val.quoted = c_.quoted(*wid(value_node));
    std::sort(wids.begin(), wids.end());
    auto first = std::find(wids.begin(), wids.end(), *wid(value_node));
    if (first != wids.end()) std::rotate(wids.begin(), first, first + 1);
    val.wids = std::move(wids);
    in.children.push_back(std::move(val));
    return in;
  }

  // A modifier subtree collapses to "<connector> <value>" of its shallowest
  // mapped node that has a value in this assignment.
  ANode modifier_subtree(int q) const {
    std::deque<int> queue{q};
    std::optional<int> hit;
    while (!queue.empty() && !hit) {
      int n = queue.front();
      queue.pop_front();
      if (value(n)) {
        hit = n;
        break;
      }
      for (int ch : t_.node(n).children) queue.push_back(ch);
    }
    if (!hit) return kept_copy(q);
    std::vector<int> wids;
    for (int n : mapped_in(q)) wids.push_back(*wid(n));
    return connector_with_value(q, connector_for(*hit, t_.node(q).word), *hit, *value(*hit), *hit,
                                std::move(wids));
  }

  bool has_logical_child(int q) const {
    for (int ch : t_.node(q).children)
      if (c_.cfg.is_logical(t_.node(ch))) return true;
    return false;
  }

  // `w` carries an and/or child. It and every sibling comparing the same
  // attribute collapse into one inserted value.
  ANode logical(int w, const std::vector<int>& siblings, std::set<int>& removed) const {
    std::string attr;
    for (int n : mapped_in(w)) {
      if (c_.cfg.is_logical(t_.node(n))) continue;
      attr = c_.attr_of_node.at(n);
      break;
    }
    if (attr.empty())
      throw Error(Errc::NoSiblingMapping, "'" + t_.node(w).word + "' has no mapped operand");
    const auto consts_it = c_.constants_of_attr.find(attr);
    auto operand_of_attr = [&](int n) {
      auto it = c_.attr_of_node.find(n);
      if (it != c_.attr_of_node.end()) return it->second == attr;
      return consts_it != c_.constants_of_attr.end() && consts_it->second.count(t_.node(n).word) > 0;
    };
    // Operands are either comparison modifiers ("after 2005") or the
    // values themselves ("VLDB or SIGMOD").
    auto compares_attr = [&](int z) {
      if (operand_of_attr(z)) return true;
      for (int cz : t_.node(z).children)
        if (operand_of_attr(cz)) return true;
      return false;
    };
    std::vector<int> group{w};
    for (int z : siblings)
      if (z != w && compares_attr(z)) group.push_back(z);
    std::sort(group.begin(), group.end());
    std::optional<int> hit;
    std::vector<int> wids;
    for (int z : group)
      for (int n : mapped_in(z)) {
        if (c_.attr_of_node.at(n) != attr) continue;
        wids.push_back(*wid(n));
        if (!hit && value(n)) hit = n;
      }
    if (!hit)
      throw Error(Errc::NoSiblingMapping,
                  "no operand of '" + t_.node(w).word + "' is mapped in this assignment");
    removed.insert(group.begin(), group.end());
    double key = group.front();
    if (!c_.cfg.is_mod(t_.node(group.front()))) {
      ANode v = replaced(*hit, *value(*hit));
      v.key = key;
      std::sort(wids.begin(), wids.end());
      v.wids = std::move(wids);
      return v;
    }
    return connector_with_value(key, connector_for(*hit, t_.node(group.front()).word), *hit,
                                *value(*hit), key + 0.5, std::move(wids));
  }

  // Children of a modifier, each treated as an object in its own right.
  std::vector<ANode> modifier_children(int mod, bool drop_relative) const {
    std::vector<int> kids = t_.node(mod).children;
    std::set<int> removed;
    std::vector<ANode> out;
    for (int ch : kids)
      if (!removed.count(ch) && has_logical_child(ch)) out.push_back(logical(ch, kids, removed));
    for (int ch : kids) {
      if (removed.count(ch)) continue;
      if (drop_relative && is_relative_pronoun(t_.node(ch))) continue;
      if (c_.cfg.is_logical(t_.node(ch))) continue;
      out.push_back(object(ch, false));
    }
    return out;
  }

  ANode object(int q, bool top) const {
    const DepNode& n = t_.node(q);
    auto kids = content_children(q);
    if (kids.empty()) {
      if (value(q)) return word_or_value(q);
      return kept_copy(q);
    }
    if (c_.cfg.is_mod(n)) return modifier_subtree(q);
    std::vector<int> mods;
    for (int ch : kids)
      if (c_.cfg.is_mod(t_.node(ch))) mods.push_back(ch);
    if (mods.empty()) {
      if (top) throw Error(Errc::UnhandledShape, "object '" + n.word + "' has no modifier");
      ANode self = word_or_value(q);
      auto rest = modifier_children(q, false);
      for (auto& r : rest) self.children.push_back(std::move(r));
      return self;
    }
    bool verb = std::any_of(mods.begin(), mods.end(),
                            [&](int m) { return c_.cfg.is_verb(t_.node(m)); });
    bool replace = verb || is_plural(n);
    ANode self = replace ? word_or_value(q) : kept(q);
    for (int ch : kids) {
      const DepNode& cn = t_.node(ch);
      if (!c_.cfg.is_mod(cn)) {
        self.children.push_back(kept_copy(ch));
        continue;
      }
      ANode m = kept(ch);
      m.children = modifier_children(ch, top && replace && c_.cfg.is_verb(cn));
      self.children.push_back(std::move(m));
    }
    if (!replace) {
      if (const Value* v = value(q)) {
        ANode cop = replaced(q, *v);
        cop.suffix = c_.copula;
        cop.key = sort_key(self) - 0.5;
        self.wids.clear();
        self.children.push_back(std::move(cop));
      }
    }
    return self;
  }

  const NlContext& c_;
  const WordValues& a_;
  const DependencyTree& t_;
};

std::string self_text(const ANode& n) {
  std::string s = n.quoted ? "'" + n.text + "'" : n.text;
  if (!n.suffix.empty()) s += " " + n.suffix;
  return s;
}

std::string indent(int depth) { return std::string(static_cast<std::size_t>(depth) * 4, ' '); }

std::string render_rec(const ANode& n, int depth);

std::string render_items(std::vector<std::pair<double, std::string>> items) {
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out;
  for (auto& [_, s] : items) {
    if (s.empty()) continue;
    if (!out.empty() && s.front() != '\n') out += " ";
    out += s;
  }
  return out;
}

std::string render_list(const std::vector<ANode>& forest, int depth) {
  std::vector<std::pair<double, std::string>> items;
  for (auto& c : forest) items.emplace_back(sort_key(c), render_rec(c, depth));
  return render_items(std::move(items));
}

std::string render_rec(const ANode& n, int depth) {
  if (n.kind == AKind::Block) {
    std::string out;
    for (std::size_t i = 0; i < n.alts.size(); ++i) {
      out += "\n" + indent(depth + 1);
      if (i > 0 && i + 1 == n.alts.size()) out += "and ";
      out += render_list(n.alts[i], depth + 1);
      if (i + 2 < n.alts.size()) out += ",";
    }
    return out;
  }
  std::vector<std::pair<double, std::string>> items{{n.key, self_text(n)}};
  for (auto& c : n.children) items.emplace_back(sort_key(c), render_rec(c, depth));
  return render_items(std::move(items));
}

// Paths (child indices) to every node outside blocks tracing a word of `w`.
void find_traced(const std::vector<ANode>& forest, const std::set<int>& w,
                 std::vector<std::size_t>& cur, std::vector<std::vector<std::size_t>>& out) {
  for (std::size_t i = 0; i < forest.size(); ++i) {
    const ANode& n = forest[i];
    if (n.kind == AKind::Block) continue;
    cur.push_back(i);
    for (int x : n.wids)
      if (w.count(x)) {
        out.push_back(cur);
        break;
      }
    find_traced(n.children, w, cur, out);
    cur.pop_back();
  }
}

ANode* find_word(std::vector<ANode>& forest, int wid) {
  for (auto& n : forest) {
    if (n.kind == AKind::Block) continue;
    if (std::find(n.wids.begin(), n.wids.end(), wid) != n.wids.end()) return &n;
    if (ANode* hit = find_word(n.children, wid)) return hit;
  }
  return nullptr;
}

void leaf_wids(const CNode& c, std::set<int>& out) {
  if (c.is_leaf()) {
    out.insert(c.wid);
    return;
  }
  for (auto& k : c.children) leaf_wids(k, out);
}

std::string synopsis_text(const NlContext& ctx, const CNode& leaf) {
  if (leaf.syn == SynOp::Range) {
    auto [lo, hi] = std::minmax_element(leaf.syn_values.begin(), leaf.syn_values.end());
    return lo->text() + " - " + hi->text();
  }
  if (ctx.has_alternatives(leaf.wid)) {
    std::string out;
    for (auto& v : leaf.syn_values) out += (out.empty() ? "" : " or ") + v.text();
    return out;
  }
  return std::to_string(leaf.syn_values.size()) + " " + pluralize(ctx.word_of(leaf.wid));
}

void fill(const NlContext& ctx, const CNode& p, std::vector<ANode>& forest) {
  std::vector<const CNode*> parts;
  if (p.type == NodeType::Product) {
    for (auto& c : p.children) parts.push_back(&c);
  } else {
    parts.push_back(&p);
  }
  for (const CNode* c : parts) {
    if (!c->is_leaf()) continue;
    ANode* n = find_word(forest, c->wid);
    if (!n)
      throw Error(Errc::LookupFailed,
                  "no answer tree node for word " + std::to_string(c->wid) + " (" + c->value.text() + ")");
    std::size_t rank = static_cast<std::size_t>(std::find(n->wids.begin(), n->wids.end(), c->wid) - n->wids.begin());
    if (n->kind == AKind::Replaced && rank >= n->shown) continue;
    n->shown = rank;
    n->kind = AKind::Replaced;
    if (c->syn == SynOp::None) {
      n->text = c->value.text();
      n->quoted = ctx.quoted(c->wid);
    } else {
      n->text = synopsis_text(ctx, *c);
      n->quoted = false;
    }
  }
  for (const CNode* c : parts) {
    if (c->is_leaf()) continue;
    std::set<int> w;
    leaf_wids(*c, w);
    std::vector<std::size_t> cur;
    std::vector<std::vector<std::size_t>> paths;
    find_traced(forest, w, cur, paths);
    if (paths.empty()) throw Error(Errc::LookupFailed, "sub-expression has no answer tree node");
    std::vector<std::size_t> lca = paths.front();
    for (auto& path : paths) {
      std::size_t k = 0;
      while (k < lca.size() && k < path.size() && lca[k] == path[k]) ++k;
      lca.resize(k);
    }
    for (auto& path : paths)
      if (path.size() == lca.size()) {
        lca.pop_back();
        break;
      }
    std::vector<ANode>* holder = &forest;
    for (std::size_t i : lca) holder = &(*holder)[i].children;
    std::set<std::size_t> take;
    for (auto& path : paths) take.insert(path[lca.size()]);
    std::vector<ANode> removed, kept;
    for (std::size_t i = 0; i < holder->size(); ++i)
      (take.count(i) ? removed : kept).push_back(std::move((*holder)[i]));
    ANode block;
    block.kind = AKind::Block;
    double min_key = kBlockKey;
    for (auto& r : removed) min_key = std::min(min_key, sort_key(r));
    block.key = kBlockKey + min_key;
    for (auto& alt : c->children) {
      std::vector<ANode> copy = removed;
      fill(ctx, alt, copy);
      block.alts.push_back(std::move(copy));
    }
    kept.push_back(std::move(block));
    *holder = std::move(kept);
  }
}

void first_term_rec(const CNode& c, Monomial& m) {
  if (c.is_leaf()) {
    m.pairs.emplace_back(c.wid, c.syn == SynOp::None || c.syn_values.empty() ? c.value : c.syn_values.front());
    return;
  }
  if (c.type == NodeType::Sum) {
    first_term_rec(c.children.front(), m);
    return;
  }
  for (auto& k : c.children) first_term_rec(k, m);
}

Sentence finish(std::string pretty) {
  while (!pretty.empty() && pretty.front() == '\n') pretty.erase(0, 1);
  return Sentence{pretty, collapse_spaces(pretty)};
}

}  // namespace

NlContext NlContext::build(const DependencyTree& tree, const UnionQuery& q,
                           const UnionWordMapping& mapping, const Schema& schema,
                           const TreeConfig& cfg) {
  mapping.validate(tree, q);
  NlContext c;
  c.tree = tree;
  c.cfg = cfg;
  c.wid_of_node = mapping.word_ids();
  c.node_of_wid = mapping.nodes_by_word();
  for (std::size_t i = 0; i < q.cqs.size(); ++i) {
    const auto& cq = q.cqs[i];
    for (auto& [node, var] : mapping.per_cq[i].entries) {
      auto ref = cq.attribute_of(var, schema);
      if (!ref || c.attr_of_node.count(node)) continue;
      c.attr_of_node[node] = ref->relation + "." + ref->attribute;
    }
    for (const auto& var : cq.variables()) {
      auto ref = cq.attribute_of(var, schema);
      if (!ref) continue;
      std::string key = ref->relation + "." + ref->attribute;
      const Attribute& a = schema.at(ref->relation).attrs[static_cast<std::size_t>(ref->position)];
      c.category_of_attr[key] = a.category;
      c.kind_of_attr[key] = a.kind;
      for (auto& [op, v] : cq.constants_for(var)) {
        c.constants_of_attr[key].insert(v.text());
        if (op != CmpOp::EQ) c.ranged_attrs.insert(key);
      }
    }
  }
  std::map<int, std::set<std::size_t>> members_of_node;
  for (std::size_t i = 0; i < mapping.per_cq.size(); ++i)
    for (auto& [node, var] : mapping.per_cq[i].entries) members_of_node[node].insert(i);
  struct Group {
    std::string attr;
    int rep;
    std::set<std::size_t> members;
  };
  std::vector<Group> groups;
  for (auto& [wid, node] : c.node_of_wid) {
    auto at = c.attr_of_node.find(node);
    if (at == c.attr_of_node.end()) continue;
    const auto& mine = members_of_node[node];
    Group* home = nullptr;
    for (auto& g : groups) {
      if (g.attr != at->second) continue;
      bool disjoint = std::none_of(mine.begin(), mine.end(), [&](std::size_t m) { return g.members.count(m) > 0; });
      if (disjoint) {
        home = &g;
        break;
      }
    }
    if (!home) {
      groups.push_back({at->second, wid, {}});
      home = &groups.back();
    }
    home->members.insert(mine.begin(), mine.end());
    if (home->rep != wid) c.alias_of_wid[wid] = home->rep;
  }
  return c;
}

int NlContext::alias(int wid) const {
  auto it = alias_of_wid.find(wid);
  return it == alias_of_wid.end() ? wid : it->second;
}

bool NlContext::has_alternatives(int wid) const {
  return std::any_of(alias_of_wid.begin(), alias_of_wid.end(), [&](const auto& a) { return a.second == wid; });
}

std::string NlContext::category_of_node(int node) const {
  auto it = attr_of_node.find(node);
  if (it == attr_of_node.end()) return "";
  auto ct = category_of_attr.find(it->second);
  return ct == category_of_attr.end() ? "" : ct->second;
}

bool NlContext::quoted(int wid) const {
  auto it = node_of_wid.find(wid);
  if (it == node_of_wid.end()) return false;
  return quoted_categories.count(category_of_node(it->second)) != 0;
}

bool NlContext::numeric(int wid) const {
  auto it = node_of_wid.find(wid);
  if (it == node_of_wid.end()) return false;
  auto at = attr_of_node.find(it->second);
  if (at == attr_of_node.end()) return false;
  auto k = kind_of_attr.find(at->second);
  return k != kind_of_attr.end() && k->second == Kind::Number;
}

std::string NlContext::word_of(int wid) const {
  auto it = node_of_wid.find(wid);
  if (it == node_of_wid.end() || !tree.has(it->second)) return "x" + std::to_string(wid);
  return tree.node(it->second).word;
}

nlohmann::json ANode::to_json() const {
  static const char* names[] = {"kept", "replaced", "inserted", "block"};
  nlohmann::json j{{"kind", names[static_cast<int>(kind)]}, {"key", key}};
  if (kind != AKind::Block) j["text"] = self_text(*this);
  if (!wids.empty()) j["words"] = wids;
  if (!children.empty()) {
    j["children"] = nlohmann::json::array();
    for (auto& c : children) j["children"].push_back(c.to_json());
  }
  if (!alts.empty()) {
    j["alternatives"] = nlohmann::json::array();
    for (auto& a : alts) {
      nlohmann::json f = nlohmann::json::array();
      for (auto& c : a) f.push_back(c.to_json());
      j["alternatives"].push_back(f);
    }
  }
  return j;
}

WordValues word_values(const Monomial& m) {
  WordValues out;
  for (auto& [w, v] : m.pairs) out.emplace(w, v);
  return out;
}

ANode answer_tree(const NlContext& ctx, const WordValues& a) { return Builder(ctx, a).top(); }

std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (c == ' ' || c == '\n' || c == '\t' || c == '\r') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

std::string render(const ANode& n) { return collapse_spaces(render_rec(n, 0)); }

Sentence render_forest(const std::vector<ANode>& forest) { return finish(render_list(forest, 0)); }

std::string single_sentence(const NlContext& ctx, const Monomial& m) {
  return render(answer_tree(ctx, word_values(m)));
}

Monomial first_term(const CNode& c) {
  Monomial m;
  first_term_rec(c, m);
  std::sort(m.pairs.begin(), m.pairs.end());
  return m;
}

Sentence factorized_sentence(const NlContext& ctx, const CNode& circuit) {
  std::vector<const CNode*> answers;
  if (circuit.type == NodeType::Sum) {
    for (auto& c : circuit.children) answers.push_back(&c);
  } else {
    answers.push_back(&circuit);
  }
  Sentence out;
  for (const CNode* a : answers) {
    std::vector<ANode> forest{answer_tree(ctx, word_values(first_term(*a)))};
    fill(ctx, *a, forest);
    Sentence s = render_forest(forest);
    if (!out.pretty.empty()) {
      out.pretty += "\n";
      out.canonical += " ";
    }
    auto stop = [](const std::string& t) { return !t.empty() && t.back() == '.' ? t : t + "."; };
    out.pretty += stop(s.pretty);
    out.canonical += stop(s.canonical);
  }
  return out;
}

}  // namespace nlprov
