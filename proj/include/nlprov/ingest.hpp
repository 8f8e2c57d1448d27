// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nlprov/mapping.hpp"
#include "nlprov/provenance.hpp"
#include "nlprov/query.hpp"
#include "nlprov/schema.hpp"
#include "nlprov/tree.hpp"

namespace nlprov {

// RFC-4180 records; a trailing newline does not produce an empty record.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);
std::string write_csv(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view data);

// Reads <csv_dir>/<relation>.csv for every relation of the schema.
Database load_database(const std::string& schema_path, const std::string& csv_dir);
void save_database(const Database& db, const std::string& schema_path, const std::string& csv_dir);

// Tree file by extension: .json is nested JSON, anything else CoNLL-like rows.
DependencyTree load_tree(const std::string& path);

struct QueryFixture {
  std::string name;
  std::string nl;
  DependencyTree tree;
  UnionQuery query;
  UnionWordMapping mapping;
  std::string note;
};

struct Fixture {
  std::string name;
  std::string dir;
  Database database;
  std::vector<QueryFixture> queries;

  const QueryFixture& query(std::string_view name) const;
};

// Loads <dir>/fixture.json.
Fixture load_fixture(const std::string& dir);
QueryFixture load_query_fixture(const std::string& path, const Schema& schema);
// Same fields as a query file. "conll" holds inline tree text; a string "tree"
// is a path relative to base_dir. The mapping may be absent.
QueryFixture query_fixture_from_json(const nlohmann::json& j, const Schema& schema,
                                     const std::string& base_dir = {});

// Synthetic provenance for scalability runs: word id 1 carries the shared
// answer "v0"; every other word id draws from its own pool of
// `unique_values_per_var` values, each pool value used at least once.
Polynomial generate_synthetic(int num_assignments, int unique_values_per_var, int num_vars,
                              std::uint64_t seed);

}  // namespace nlprov
