// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nlprov/circuit.hpp"
#include "nlprov/nlgen.hpp"

namespace nlprov {

// Mapped words grouped by how many mapped ancestors they have.
struct SummaryLevel {
  int depth = 0;
  std::vector<int> wids;
  std::vector<std::string> words;
};

std::vector<SummaryLevel> summary_levels(const QuestionOrder& order, const NlContext& ctx);
// Words of the level joined with '/'.
std::string level_name(const SummaryLevel& l);

// Level named by its full name, a question word ("authors"), an attribute ("aname") or a word
// id ("x2"). "none" yields nullopt. Throws NotFound for anything else.
std::optional<std::size_t> find_level(const std::vector<SummaryLevel>& levels,
                                      const NlContext& ctx, const std::string& name);

struct SummarySpec {
  std::set<int> types;          // word ids that are summarized
  std::map<int, SynOp> ops;     // per type override; default Range for numbers
};

// Types at the chosen level and every level below it.
SummarySpec spec_for_level(const std::vector<SummaryLevel>& levels, std::size_t level);

// Every sub-circuit made only of summarized types becomes a product of one
// synopsis leaf per type. Throws RANGE_ON_NON_NUMERIC.
CNode summarize(const CNode& c, const SummarySpec& spec, const NlContext& ctx);

}  // namespace nlprov
