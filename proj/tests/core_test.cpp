// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>

#include "nlprov/error.hpp"
#include "nlprov/ingest.hpp"
#include "nlprov/mapping.hpp"
#include "nlprov/query.hpp"
#include "nlprov/schema.hpp"
#include "nlprov/tree.hpp"
#include "nlprov/value.hpp"
#include "support.hpp"

using namespace nlprov;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::NotFound;
}

}  // namespace

TEST_CASE("values order numbers numerically and strings bytewise") {
  CHECK(Value::num("2.50") == Value::num("2.5"));
  CHECK(Value::num("10") > Value::num("9"));
  CHECK(Value::num("-1.5") < Value::num("1"));
  CHECK(Value::str("  TAU ") == Value::str("TAU"));
  CHECK(Value::str("B") < Value::str("a"));
  CHECK(Value::looks_numeric("2014"));
  CHECK_FALSE(Value::looks_numeric("14'"));
  CHECK(code_of([] { Value::num("abc"); }) == Errc::ParseError);
}

TEST_CASE("csv round trip keeps quotes, commas and newlines") {
  std::vector<std::vector<std::string>> rows{{"1", "a, b"}, {"2", "say \"hi\""}, {"3", "two\nlines"}};
  std::string text = write_csv({"id", "text"}, rows);
  auto back = parse_csv(text);
  REQUIRE(back.size() == 4);
  CHECK(back[0] == std::vector<std::string>{"id", "text"});
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(back[i + 1] == rows[i]);
}

TEST_CASE("schema text round trip") {
  const Schema& s = testing::fixture("mas-plus").database.schema;
  CHECK(Schema::parse(s.to_text()) == s);
  const Relation& conf = s.at("conf");
  CHECK(conf.attrs.size() == 3);
  CHECK(conf.attrs[1].category == "venue");
  CHECK(code_of([&] { s.at("nope"); }) == Errc::UnknownRelation);
  CHECK(code_of([] { Schema::parse("r(a:number, a:string)"); }) == Errc::ParseError);
}

TEST_CASE("database save and load round trip") {
  const Database& db = testing::fixture("mini-mas").database;
  auto dir = std::filesystem::temp_directory_path() / "nlprov-db-roundtrip";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  save_database(db, (dir / "schema.txt").string(), dir.string());
  Database back = load_database((dir / "schema.txt").string(), dir.string());
  CHECK(back == db);
  std::filesystem::remove_all(dir);
}

TEST_CASE("database validation names row and column") {
  Database db = testing::fixture("mini-mas").database;
  db.tables["org"].push_back({Value::num(9)});
  CHECK(code_of([&] { db.validate(); }) == Errc::ArityMismatch);
  db.tables["org"].back() = {Value::str("x"), Value::str("y")};
  CHECK(code_of([&] { db.validate(); }) == Errc::TypeMismatch);
}

TEST_CASE("query parse and print round trip") {
  const char* text =
      "query(oname) :- org(oid, oname), author(aid, aname, oid), oname = 'TAU', aid > 3";
  auto q = ConjunctiveQuery::parse(text);
  CHECK(q.atoms.size() == 2);
  CHECK(q.constraints.size() == 2);
  CHECK(ConjunctiveQuery::parse(q.to_string()) == q);
  auto u = UnionQuery::parse(std::string(text) + "\nquery(aname) :- author(aid, aname, oid)\n");
  CHECK(u.cqs.size() == 2);
  CHECK(UnionQuery::parse(u.to_string()) == u);
}

TEST_CASE("query validation errors") {
  const Schema& s = testing::fixture("mini-mas").database.schema;
  CHECK(code_of([&] { ConjunctiveQuery::parse("query(x) :- nope(x)").validate(s); }) == Errc::UnknownRelation);
  CHECK(code_of([&] { ConjunctiveQuery::parse("query(x) :- org(x)").validate(s); }) == Errc::ArityMismatch);
  CHECK(code_of([&] { ConjunctiveQuery::parse("query(x) :- org('a', x)").validate(s); }) == Errc::TypeMismatch);
  CHECK(code_of([&] { ConjunctiveQuery::parse("query(z) :- org(x, y)").validate(s); }) == Errc::InvalidQuery);
  CHECK(code_of([] { ConjunctiveQuery::parse("query(x) org(x, y)"); }) == Errc::ParseError);
  CHECK(code_of([&] {
          UnionQuery::parse("query(x) :- org(x, y)\nquery(x, y) :- org(x, y)").validate(s);
        }) == Errc::InvalidQuery);
}

TEST_CASE("tree formats round trip and reject bad shapes") {
  const DependencyTree& t = testing::fixture("mini-mas").query("running").tree;
  CHECK(DependencyTree::from_conll(t.to_conll()) == t);
  CHECK(DependencyTree::from_json(t.to_json()) == t);
  CHECK(t.text() ==
        "return the organization of authors who published papers in database conferences after 2005");
  auto report = validate_question_tree(t);
  CHECK(report.ok);
  CHECK(t.node(report.object).word == "organization");

  CHECK(code_of([] { DependencyTree(std::vector<DepNode>{}); }) == Errc::MalformedTree);
  CHECK(code_of([] {
          DependencyTree({{1, "a", "NN", "root", -1, {}}, {2, "b", "NN", "root", -1, {}}});
        }) == Errc::MalformedTree);
  CHECK(code_of([] { DependencyTree({{1, "a", "NN", "root", 2, {}}, {2, "b", "NN", "dep", 1, {}}}); }) ==
        Errc::MalformedTree);
  CHECK(code_of([] { DependencyTree::from_conll("1\tword\n"); }) == Errc::ParseError);
  CHECK(code_of([] { require_question_tree(DependencyTree({{1, "hello", "UH", "root", -1, {}}})); }) ==
        Errc::MalformedTree);
}

TEST_CASE("word ids number mapped nodes in node order across members") {
  const auto& qf = testing::fixture("union").query("before-after");
  auto ids = qf.mapping.word_ids();
  std::vector<int> nodes;
  for (auto& [n, w] : ids) nodes.push_back(n);
  CHECK(nodes == std::vector<int>{3, 5, 8, 11, 13, 16});
  for (std::size_t i = 0; i < nodes.size(); ++i) CHECK(ids.at(nodes[i]) == static_cast<int>(i) + 1);
  CHECK(UnionWordMapping::from_json(qf.mapping.to_json()) == qf.mapping);
}

TEST_CASE("mapping validation") {
  const auto& qf = testing::fixture("mini-mas").query("running");
  const auto& cq = qf.query.cqs[0];
  WordMapping m = qf.mapping.per_cq[0];
  m.entries[99] = "oname";
  CHECK(code_of([&] { m.validate(qf.tree, cq); }) == Errc::InvalidMapping);
  m = qf.mapping.per_cq[0];
  m.entries[3] = "nope";
  CHECK(code_of([&] { m.validate(qf.tree, cq); }) == Errc::InvalidMapping);
  m = qf.mapping.per_cq[0];
  m.entries[2] = "oname";
  CHECK(code_of([&] { m.validate(qf.tree, cq); }) == Errc::InvalidMapping);
  auto swapped = swap_nodes(qf.mapping, 3, 5);
  CHECK(swapped.per_cq[0].var_of(3) == "aname");
  CHECK(swapped.per_cq[0].var_of(5) == "oname");
}

TEST_CASE("fixtures load with their queries") {
  CHECK(testing::fixture("mini-mas").queries.size() == 1);
  CHECK(testing::fixture("union").queries.size() == 1);
  CHECK(testing::fixture("mas-plus").queries.size() == 15);
  CHECK(code_of([] { testing::fixture("mini-mas").query("nope"); }) == Errc::NotFound);
  CHECK(code_of([] { load_fixture("/nonexistent/dir"); }) == Errc::IoError);
}
