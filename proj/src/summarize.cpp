// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlprov/summarize.hpp"

#include <algorithm>

#include "nlprov/error.hpp"

namespace nlprov {

namespace {

void collect(const CNode& c, const NlContext& ctx, std::map<int, std::set<Value>>& out) {
  if (c.is_leaf()) {
    auto& vals = out[ctx.alias(c.wid)];
    if (c.syn == SynOp::None) {
      vals.insert(c.value);
    } else {
      vals.insert(c.syn_values.begin(), c.syn_values.end());
    }
    return;
  }
  for (auto& k : c.children) collect(k, ctx, out);
}

CNode synopsis(int wid, const std::set<Value>& values, const SummarySpec& spec,
               const NlContext& ctx) {
  bool all_numeric = std::all_of(values.begin(), values.end(),
                                 [](const Value& v) { return v.is_number(); });
  if (values.size() == 1) return CNode::leaf(wid, *values.begin());
  SynOp op = ctx.numeric(wid) && all_numeric ? SynOp::Range : SynOp::CountDistinct;
  if (auto it = spec.ops.find(wid); it != spec.ops.end()) op = it->second;
  if (op == SynOp::Range && !all_numeric)
    throw Error(Errc::RangeOnNonNumeric, "word " + std::to_string(wid) + " (" + ctx.word_of(wid) +
                                             ") has non-numeric values");
  if (op == SynOp::None) op = SynOp::CountDistinct;
  CNode leaf = CNode::leaf(wid, *values.begin());
  leaf.syn = op;
  leaf.syn_values.assign(values.begin(), values.end());
  return leaf;
}

CNode rec(const CNode& c, const SummarySpec& spec, const NlContext& ctx) {
  if (c.is_leaf()) return c;
  std::map<int, std::set<Value>> groups;
  collect(c, ctx, groups);
  bool inside = std::all_of(groups.begin(), groups.end(),
                            [&](const auto& g) { return spec.types.count(g.first) != 0; });
  if (inside) {
    std::vector<CNode> leaves;
    for (auto& [w, vals] : groups) leaves.push_back(synopsis(w, vals, spec, ctx));
    if (leaves.size() == 1) return std::move(leaves[0]);
    return CNode::product(std::move(leaves));
  }
  CNode out = c;
  for (auto& k : out.children) k = rec(k, spec, ctx);
  return out;
}

}  // namespace

std::vector<SummaryLevel> summary_levels(const QuestionOrder& order, const NlContext& ctx) {
  std::map<int, SummaryLevel> by_depth;
  auto wids = order.wids();
  for (int w : wids) {
    if (ctx.alias(w) != w) continue;
    int depth = 0;
    for (int v : wids)
      if (v != w && order.leq(w, v)) ++depth;
    auto& l = by_depth[depth];
    l.depth = depth;
    l.wids.push_back(w);
    l.words.push_back(ctx.word_of(w));
  }
  for (int w : wids)
    if (int rep = ctx.alias(w); rep != w)
      for (auto& [_, l] : by_depth)
        if (std::find(l.wids.begin(), l.wids.end(), rep) != l.wids.end()) l.wids.push_back(w);
  std::vector<SummaryLevel> out;
  for (auto& [_, l] : by_depth) out.push_back(std::move(l));
  return out;
}

std::string level_name(const SummaryLevel& l) {
  std::string name;
  for (auto& w : l.words) name += (name.empty() ? "" : "/") + w;
  return name;
}

std::optional<std::size_t> find_level(const std::vector<SummaryLevel>& levels,
                                      const NlContext& ctx, const std::string& name) {
  if (name.empty() || name == "none") return std::nullopt;
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (level_name(levels[i]) == name) return i;
  for (std::size_t i = 0; i < levels.size(); ++i)
    for (int w : levels[i].wids) {
      if (ctx.word_of(w) == name || "x" + std::to_string(w) == name) return i;
      auto node = ctx.node_of_wid.find(w);
      if (node == ctx.node_of_wid.end()) continue;
      auto attr = ctx.attr_of_node.find(node->second);
      if (attr == ctx.attr_of_node.end()) continue;
      const std::string& a = attr->second;
      if (a == name || a.substr(a.find('.') + 1) == name) return i;
    }
  throw Error(Errc::NotFound, "no summarization level named '" + name + "'");
}

SummarySpec spec_for_level(const std::vector<SummaryLevel>& levels, std::size_t level) {
  SummarySpec s;
  for (std::size_t i = level; i < levels.size(); ++i) s.types.insert(levels[i].wids.begin(), levels[i].wids.end());
  return s;
}

CNode summarize(const CNode& c, const SummarySpec& spec, const NlContext& ctx) {
  CNode out = rec(c, spec, ctx);
  canonicalize(out);
  return out;
}

}  // namespace nlprov
