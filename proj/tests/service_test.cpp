// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>

#include "nlprov/service.hpp"
#include "support.hpp"

using namespace nlprov;
using nlohmann::json;

namespace {

struct Running {
  Service svc;
  int port = 0;
  Running() {
    svc.load_all(NLPROV_DATA_DIR);
    port = svc.start("127.0.0.1", 0);
  }
  ~Running() { svc.stop(); }
};

}  // namespace

TEST_CASE("http front end serves fixtures, questions and explanations") {
  Running r;
  REQUIRE(r.port > 0);
  httplib::Client cli("127.0.0.1", r.port);

  auto fx = cli.Get("/fixtures");
  REQUIRE(fx);
  CHECK(fx->status == 200);
  CHECK(fx->get_header_value("Access-Control-Allow-Origin") == "*");
  json fixtures = json::parse(fx->body);
  std::set<std::string> names;
  for (auto& f : fixtures) names.insert(f.at("name").get<std::string>());
  CHECK(names == std::set<std::string>{"mas-plus", "mini-mas", "union"});

  auto posted = cli.Post("/queries", R"({"fixture":"mini-mas","query":"running"})", "application/json");
  REQUIRE(posted);
  CHECK(posted->status == 200);
  json submitted = json::parse(posted->body);
  REQUIRE(submitted.at("answers").size() == 2);
  std::string tau_id;
  for (auto& a : submitted.at("answers"))
    if (a.at("answer") == json::array({"TAU"})) tau_id = a.at("id").get<std::string>();
  REQUIRE_FALSE(tau_id.empty());

  json direct = r.svc.run({{"fixture", "mini-mas"}, {"query", "running"}, {"summarize", "authors"}});
  json tau_bundle;
  for (auto& a : direct.at("answers"))
    if (a.at("answer") == json::array({"TAU"})) tau_bundle = a;

  auto get = [&](const std::string& query) {
    auto res = cli.Get("/answers/" + tau_id + "/explanation?" + query);
    REQUIRE(res);
    CHECK(res->status == 200);
    return json::parse(res->body);
  };
  CHECK(get("mode=single").at("text") == tau_bundle.at("single"));
  CHECK(get("mode=factorized").at("pretty") == tau_bundle.at("factorized").at("pretty"));
  CHECK(get("mode=summarized&level=authors").at("text") == tau_bundle.at("summarized").at("text"));
  CHECK(get("mode=single").at("text") ==
        "TAU is the organization of Tova M. who published 'OASSIS...' in SIGMOD in 2014");
}

TEST_CASE("http errors carry code, stage and message") {
  Running r;
  httplib::Client cli("127.0.0.1", r.port);
  auto missing = cli.Get("/answers/999.0/explanation?mode=single");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  json e = json::parse(missing->body).at("error");
  CHECK(e.at("code") == "NOT_FOUND");
  CHECK(e.contains("stage"));
  CHECK(e.contains("message"));

  auto bad = cli.Post("/queries", "{not json", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  CHECK(json::parse(bad->body).at("error").at("code") == "PARSE_ERROR");

  auto unknown = cli.Post("/queries", R"({"fixture":"mini-mas","query":"nope"})", "application/json");
  REQUIRE(unknown);
  CHECK(unknown->status == 404);

  auto both = cli.Post("/queries", R"({"fixture":"mini-mas"})", "application/json");
  REQUIRE(both);
  CHECK(both->status == 400);
  CHECK(json::parse(both->body).at("error").at("code") == "INVALID_PARAMS");
}

TEST_CASE("inline questions run without a stored query") {
  Service svc;
  svc.load_all(NLPROV_DATA_DIR);
  json inline_query{{"name", "inline"},
                    {"conll", "1\treturn\tVB\t0\troot\n2\tthe\tDT\t3\tdet\n3\tauthors\tNNS\t1\tdobj\n"
                              "4\tfrom\tIN\t3\tprep\n5\tTAU\tNNP\t4\tpobj\n"},
                    {"queries", "query(aname) :- author(aid, aname, oid), org(oid, oname), oname = 'TAU'"},
                    {"mapping", {{"3", "aname"}, {"5", "oname"}}}};
  json out = svc.run({{"fixture", "mini-mas"}, {"inline", inline_query}});
  REQUIRE(out.at("answers").size() == 2);
  CHECK(out.at("answers")[0].at("single") == "Slava N. from TAU");
  CHECK(out.at("answers")[1].at("single") == "Tova M. from TAU");
}

TEST_CASE("explanations are safe to request concurrently") {
  Service svc;
  svc.load_all(NLPROV_DATA_DIR);
  json sub = svc.submit({{"fixture", "mas-plus"}, {"query", "q07"}});
  std::vector<std::string> ids;
  for (auto& a : sub.at("answers")) ids.push_back(a.at("id").get<std::string>());
  std::map<std::string, std::string> want;
  for (auto& id : ids) want[id] = svc.explanation(id, "factorized", "").at("text").get<std::string>();
  Service fresh;
  fresh.load_all(NLPROV_DATA_DIR);
  json sub2 = fresh.submit({{"fixture", "mas-plus"}, {"query", "q07"}});
  std::atomic<int> mismatches{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < 8; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t k = 0; k < ids.size(); ++k) {
        std::string id = sub2.at("answers")[(k + static_cast<std::size_t>(t)) % ids.size()].at("id");
        std::string mine = ids[(k + static_cast<std::size_t>(t)) % ids.size()];
        for (const char* mode : {"factorized", "summarized", "single"}) {
          json got = fresh.explanation(id, mode, "authors");
          if (std::string(mode) == "factorized" && got.at("text") != want[mine]) ++mismatches;
        }
      }
    });
  for (auto& th : pool) th.join();
  CHECK(mismatches == 0);
}

TEST_CASE("session store is bounded") {
  Service svc;
  svc.add_fixture(testing::fixture_dir("union"));
  std::string first;
  for (std::size_t i = 0; i < Service::kMaxSessions + 1; ++i) {
    json s = svc.submit({{"fixture", "union"}, {"query", "before-after"}});
    if (i == 0) first = s.at("answers")[0].at("id");
  }
  CHECK_THROWS_AS(svc.explanation(first, "single", ""), Error);
}

TEST_CASE("fixtures load once per name") {
  Service svc;
  CHECK(svc.add_fixture(testing::fixture_dir("union")) == "union");
  CHECK(svc.add_fixture(testing::fixture_dir("union")) == "union");
  CHECK(svc.fixtures_json().size() == 1);
}

TEST_CASE("golden files of every fixture pass") {
  for (const char* fx : {"mini-mas", "union", "mas-plus"}) {
    auto results = check_goldens(testing::fixture(fx));
    CHECK_FALSE(results.empty());
    for (auto& r : results) {
      CAPTURE(r.name);
      CAPTURE(r.expected);
      CAPTURE(r.actual);
      CHECK(r.pass);
    }
  }
}
