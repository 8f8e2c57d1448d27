// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlprov/pipeline.hpp"

#include <chrono>

#include "nlprov/error.hpp"
#include "nlprov/mapper.hpp"

namespace nlprov {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

nlohmann::json values_json(const std::vector<Value>& vs) {
  nlohmann::json j = nlohmann::json::array();
  for (auto& v : vs) j.push_back(v.text());
  return j;
}

nlohmann::json sentence_json(const Sentence& s) {
  return {{"text", s.canonical}, {"pretty", s.pretty}};
}

}  // namespace

Mode parse_mode(std::string_view s) {
  if (s == "single") return Mode::Single;
  if (s == "factorized") return Mode::Factorized;
  if (s == "summarized") return Mode::Summarized;
  throw Error(Errc::InvalidParams, "unknown mode '" + std::string(s) + "'");
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Single: return "single";
    case Mode::Factorized: return "factorized";
    case Mode::Summarized: return "summarized";
  }
  return "?";
}

nlohmann::json AnswerBundle::to_json() const {
  nlohmann::json j{{"answer", values_json(answer)},
                   {"assignments", assignments},
                   {"polynomial", polynomial},
                   {"single", single},
                   {"factorized", sentence_json(factorized)},
                   {"circuit", circuit},
                   {"metrics", {{"length", metrics.length}, {"readability", metrics.readability}}},
                   {"compatible", compatible},
                   {"levels", levels},
                   {"level", level},
                   {"timings_ms",
                    {{"evaluation", timings.evaluation_ms},
                     {"factorization", timings.factorization_ms},
                     {"sentence", timings.sentence_ms}}}};
  if (summarized) {
    j["summarized"] = sentence_json(*summarized);
    j["summarized_circuit"] = summarized_circuit;
  }
  return j;
}

Session Session::prepare(const Database& db, const QueryFixture& qf, const RunOptions& opt) {
  Session s;
  s.use_template_ = opt.use_template;
  if (!opt.use_mapper && qf.mapping.per_cq.empty())
    throw Error(Errc::InvalidMapping, "no mapping given and the mapper is off");
  s.mapping_ = opt.use_mapper ? map_words(qf.tree, qf.query, db.schema, opt.beta) : qf.mapping;
  for (auto [a, b] : opt.swaps) s.mapping_ = swap_nodes(s.mapping_, a, b);
  auto t0 = Clock::now();
  auto assignments = evaluate(qf.query, db);
  s.polys_ = build_provenance(assignments, qf.query, s.mapping_, qf.tree);
  s.eval_ms_ = ms_since(t0);
  s.ctx_ = NlContext::build(qf.tree, qf.query, s.mapping_, db.schema);
  s.order_ = question_order(qf.tree, s.mapping_);
  s.levels_ = summary_levels(s.order_, s.ctx_);
  s.circuits_.resize(s.polys_.size());
  s.fact_ms_.assign(s.polys_.size(), 0);
  return s;
}

std::vector<std::string> Session::level_names() const {
  std::vector<std::string> out;
  for (auto& l : levels_) out.push_back(level_name(l));
  return out;
}

const CNode& Session::circuit(std::size_t i) {
  auto& slot = circuits_.at(i);
  if (slot) return *slot;
  auto t0 = Clock::now();
  const auto& ms = polys_[i].monomials;
  if (use_template_ && template_) {
    slot = factorize_with_template(*template_, ms, order_);
  } else {
    slot = greedy_factorize(order_, ms);
    if (use_template_) {
      try {
        template_ = derive_template(*slot, order_);
      } catch (const Error& e) {
        if (e.code() != Errc::TemplateMismatch) throw;
      }
    }
  }
  fact_ms_[i] = ms_since(t0);
  return *slot;
}

Sentence Session::explain(std::size_t i, Mode mode, const std::string& level) {
  const auto& p = polys_.at(i);
  switch (mode) {
    case Mode::Single: {
      std::string s = single_sentence(ctx_, p.monomials.front());
      return Sentence{s, s};
    }
    case Mode::Factorized:
      return factorized_sentence(ctx_, circuit(i));
    case Mode::Summarized: {
      auto idx = find_level(levels_, ctx_, level);
      if (!idx) return factorized_sentence(ctx_, circuit(i));
      return factorized_sentence(ctx_, summarize(circuit(i), spec_for_level(levels_, *idx), ctx_));
    }
  }
  throw Error(Errc::InvalidParams, "unknown mode");
}

AnswerBundle Session::bundle(std::size_t i, const std::string& level) {
  const auto& p = polys_.at(i);
  AnswerBundle b;
  b.answer = p.answer;
  b.assignments = p.monomials.size();
  b.polynomial = p.text();
  const CNode& c = circuit(i);
  b.circuit = to_text(c);
  b.metrics = metrics(c);
  b.compatible = is_compatible(c, order_, p.monomials);
  b.levels = level_names();
  b.level = level.empty() ? "none" : level;
  auto t0 = Clock::now();
  b.single = single_sentence(ctx_, p.monomials.front());
  b.factorized = factorized_sentence(ctx_, c);
  if (auto idx = find_level(levels_, ctx_, b.level)) {
    CNode s = summarize(c, spec_for_level(levels_, *idx), ctx_);
    b.summarized_circuit = to_text(s);
    b.summarized = factorized_sentence(ctx_, s);
  }
  b.timings.sentence_ms = ms_since(t0);
  b.timings.factorization_ms = fact_ms_[i];
  b.timings.evaluation_ms = eval_ms_;
  return b;
}

std::vector<AnswerBundle> run_query(const Database& db, const QueryFixture& qf,
                                    const RunOptions& opt) {
  Session s = Session::prepare(db, qf, opt);
  std::vector<AnswerBundle> out;
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back(s.bundle(i, opt.summarize));
  return out;
}

DependencyTree synthetic_tree(int num_vars) {
  if (num_vars < 1) throw Error(Errc::InvalidParams, "need at least one variable");
  std::vector<DepNode> nodes{
      {1, "return", "VB", "root", -1, {}},   {2, "the", "DT", "det", 3, {}},
      {3, "thing1", "NN", "dobj", 1, {}},    {4, "of", "IN", "prep", 3, {}},
      {5, "things2", "NNS", "pobj", 4, {}},  {6, "who", "WP", "nsubj", 7, {}},
      {7, "did", "VBD", "rcmod", 5, {}},     {8, "things3", "NNS", "dobj", 7, {}},
  };
  for (int i = 4; i <= num_vars; ++i) {
    int prep = 9 + 2 * (i - 4);
    nodes.push_back({prep, "with", "IN", "prep", 7, {}});
    nodes.push_back({prep + 1, "things" + std::to_string(i), "NNS", "pobj", prep, {}});
  }
  return DependencyTree(std::move(nodes));
}

NlContext synthetic_context(int num_vars) {
  NlContext c;
  c.tree = synthetic_tree(num_vars);
  auto node_of = [](int w) { return w == 1 ? 3 : w == 2 ? 5 : w == 3 ? 8 : 10 + 2 * (w - 4); };
  for (int w = 1; w <= num_vars; ++w) {
    c.node_of_wid[w] = node_of(w);
    c.wid_of_node[node_of(w)] = w;
  }
  return c;
}

nlohmann::json BenchReport::to_json() const {
  nlohmann::json t = nlohmann::json::array();
  for (auto& x : trials)
    t.push_back({{"factorization_ms", x.factorization_ms},
                 {"sentence_ms", x.sentence_ms},
                 {"length", x.length},
                 {"identity_length", x.identity_length}});
  return {{"assignments", assignments},     {"unique_values", unique_values},
          {"vars", vars},                   {"seed", seed},
          {"trials", t},                    {"mean_factorization_ms", mean_factorization_ms},
          {"mean_sentence_ms", mean_sentence_ms}};
}

BenchReport run_benchmark(int assignments, int unique_values, int vars, int trials,
                          std::uint64_t seed) {
  if (trials < 1) throw Error(Errc::InvalidParams, "need at least one trial");
  BenchReport r{assignments, unique_values, vars, seed, {}, 0, 0};
  Polynomial p = generate_synthetic(assignments, unique_values, vars, seed);
  NlContext ctx = synthetic_context(vars);
  QuestionOrder order = question_order(ctx.tree, ctx.node_of_wid);
  for (int t = 0; t < trials; ++t) {
    BenchTrial x;
    auto t0 = Clock::now();
    CNode f = greedy_factorize(order, p.monomials);
    x.factorization_ms = ms_since(t0);
    auto t1 = Clock::now();
    Sentence s = factorized_sentence(ctx, f);
    x.sentence_ms = ms_since(t1);
    if (s.canonical.empty()) throw Error(Errc::LookupFailed, "empty synthetic sentence");
    x.length = metrics(f).length;
    x.identity_length = static_cast<int>(p.monomials.size()) * vars;
    r.mean_factorization_ms += x.factorization_ms / trials;
    r.mean_sentence_ms += x.sentence_ms / trials;
    r.trials.push_back(x);
  }
  return r;
}

}  // namespace nlprov
