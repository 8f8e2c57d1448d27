// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "nlprov/error.hpp"
#include "nlprov/ingest.hpp"
#include "nlprov/pipeline.hpp"

namespace nlprov {

// A query against a loaded fixture: either one of its named queries or an
// inline object with the fields of a query file.
struct QueryRequest {
  std::string fixture;
  std::optional<std::string> query;
  std::optional<nlohmann::json> inline_query;
  RunOptions options;

  // {"fixture", "query" | "inline", "summarize", "mapper": {"beta"},
  //  "swap": [[a, b], ...], "template"}
  static QueryRequest from_json(const nlohmann::json& j);
};

// Pipeline stage an error code belongs to, for error payloads.
const char* error_stage(Errc c);
nlohmann::json error_json(const Error& e);

struct GoldenResult {
  std::string name;
  bool pass = false;
  std::string expected;
  std::string actual;
};

// Runs <fixture dir>/goldens.json: sentence cases and stored circuit cases.
std::vector<GoldenResult> check_goldens(const Fixture& fx);

class Service {
 public:
  Service();
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Loads every <data_dir>/fixtures/*/fixture.json.
  void load_all(const std::string& data_dir);
  // Loads one fixture directory and returns its name.
  std::string add_fixture(const std::string& dir);
  const Fixture& fixture(const std::string& name) const;

  nlohmann::json fixtures_json() const;
  // Full bundles for every answer, ordered by answer tuple.
  nlohmann::json run(const nlohmann::json& request) const;
  // Evaluates and keeps the session; explanations come later by answer id.
  nlohmann::json submit(const nlohmann::json& request);
  nlohmann::json explanation(const std::string& answer_id, const std::string& mode,
                             const std::string& level);

  // HTTP front end. start() binds (port 0 picks one), returns the port and
  // serves on a background thread; serve() blocks.
  int start(const std::string& host, int port);
  void serve(const std::string& host, int port);
  void stop();

  static constexpr std::size_t kMaxSessions = 256;

 private:
  struct Entry {
    std::mutex mu;
    Session session;
  };
  struct Http;

  const QueryFixture& resolve(const QueryRequest& r, QueryFixture& scratch) const;

  mutable std::mutex fixtures_mu_;
  std::map<std::string, std::shared_ptr<const Fixture>> fixtures_;
  std::mutex sessions_mu_;
  std::map<long, std::shared_ptr<Entry>> sessions_;
  long next_session_ = 1;
  std::mutex cache_mu_;
  std::map<std::tuple<std::string, std::string, std::string>, nlohmann::json> cache_;
  std::unique_ptr<Http> http_;
};

}  // namespace nlprov
