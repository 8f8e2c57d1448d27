// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nlprov/circuit.hpp"
#include "nlprov/ingest.hpp"
#include "nlprov/nlgen.hpp"
#include "nlprov/summarize.hpp"

namespace nlprov {

enum class Mode { Single, Factorized, Summarized };
Mode parse_mode(std::string_view s);
const char* mode_name(Mode m);

struct RunOptions {
  std::string summarize = "none";  // level name, see find_level
  bool use_mapper = false;         // ignore the fixture mapping and run the mapper
  double beta = 0.6;
  std::vector<std::pair<int, int>> swaps;  // forced node swaps in the mapping
  bool use_template = true;
};

struct Timings {
  double evaluation_ms = 0;
  double factorization_ms = 0;
  double sentence_ms = 0;
};

struct AnswerBundle {
  std::vector<Value> answer;
  std::size_t assignments = 0;
  std::string polynomial;
  std::string single;
  Sentence factorized;
  std::string circuit;
  FactorizationMetrics metrics;
  bool compatible = false;
  std::vector<std::string> levels;
  std::string level;  // requested summarization level, "none" when off
  std::optional<Sentence> summarized;
  std::string summarized_circuit;
  Timings timings;

  nlohmann::json to_json() const;
};

// A question evaluated once; explanations are computed on demand.
class Session {
 public:
  static Session prepare(const Database& db, const QueryFixture& qf, const RunOptions& opt = {});

  std::size_t size() const { return polys_.size(); }
  const Polynomial& polynomial(std::size_t i) const { return polys_.at(i); }
  const NlContext& context() const { return ctx_; }
  const QuestionOrder& order() const { return order_; }
  const UnionWordMapping& mapping() const { return mapping_; }
  const std::vector<SummaryLevel>& levels() const { return levels_; }
  std::vector<std::string> level_names() const;
  double evaluation_ms() const { return eval_ms_; }

  // Factorization of answer i; the first call per answer does the work.
  const CNode& circuit(std::size_t i);
  Sentence explain(std::size_t i, Mode mode, const std::string& level);
  AnswerBundle bundle(std::size_t i, const std::string& level);

 private:
  NlContext ctx_;
  QuestionOrder order_;
  UnionWordMapping mapping_;
  std::vector<Polynomial> polys_;
  std::vector<std::optional<CNode>> circuits_;
  std::vector<double> fact_ms_;
  std::optional<FactorTemplate> template_;
  std::vector<SummaryLevel> levels_;
  bool use_template_ = true;
  double eval_ms_ = 0;
};

// Bundles ordered by answer tuple.
std::vector<AnswerBundle> run_query(const Database& db, const QueryFixture& qf,
                                    const RunOptions& opt = {});

// Question tree used for synthetic runs: word 1 is the object, word 2 hangs
// off it through "of", the rest are arguments of a verb under word 2.
DependencyTree synthetic_tree(int num_vars);
NlContext synthetic_context(int num_vars);

struct BenchTrial {
  double factorization_ms = 0;
  double sentence_ms = 0;
  int length = 0;
  int identity_length = 0;
};

struct BenchReport {
  int assignments = 0;
  int unique_values = 0;
  int vars = 0;
  std::uint64_t seed = 0;
  std::vector<BenchTrial> trials;
  double mean_factorization_ms = 0;
  double mean_sentence_ms = 0;

  nlohmann::json to_json() const;
};

BenchReport run_benchmark(int assignments, int unique_values, int vars, int trials,
                          std::uint64_t seed);

}  // namespace nlprov
