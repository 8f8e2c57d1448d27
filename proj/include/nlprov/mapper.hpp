// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nlprov/mapping.hpp"
#include "nlprov/query.hpp"
#include "nlprov/schema.hpp"
#include "nlprov/tree.hpp"

namespace nlprov {

// Lowercase, drop trailing digits and a plural 's'.
std::string normalize_word(std::string_view w);

// Dice coefficient over padded character trigrams of the normalized forms.
double trigram_dice(std::string_view a, std::string_view b);

// Plain string similarity in [0,1]; symmetric.
double similarity(std::string_view word, std::string_view variable);

// Similarity of a question word to a query variable, also trying the
// attribute's schema aliases and the constants the variable is compared with.
double similarity(std::string_view word, std::string_view var, const ConjunctiveQuery& cq,
                  const Schema& schema);

struct CandidateEdge {
  int node = 0;
  std::string var;
  double weight = 0;
};

// Edges with weight >= beta. Variables fixed by an equality to a constant are
// left out unless they are in the head.
std::vector<CandidateEdge> candidate_edges(const DependencyTree& tree, const ConjunctiveQuery& cq,
                                           const Schema& schema, double beta);

// Maximum weight matching; among optimal matchings the one that keeps lower
// node ids, then smaller variable names. Throws INVALID_PARAMS unless 0 < beta <= 1.
WordMapping map_words(const DependencyTree& tree, const ConjunctiveQuery& cq, const Schema& schema,
                      double beta);
UnionWordMapping map_words(const DependencyTree& tree, const UnionQuery& q, const Schema& schema,
                           double beta);

WordMapping max_weight_matching(const std::vector<CandidateEdge>& edges);
double matching_weight(const std::vector<CandidateEdge>& edges, const WordMapping& m);

}  // namespace nlprov
