// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>
#include <sstream>

#include "nlprov/provenance.hpp"
#include "nlprov/query.hpp"
#include "support.hpp"

using namespace nlprov;
using nlprov::testing::mono;

namespace {

std::vector<Polynomial> provenance_of(const std::string& fx, const std::string& q) {
  const Fixture& f = testing::fixture(fx);
  const QueryFixture& qf = f.query(q);
  return build_provenance(evaluate(qf.query, f.database), qf.query, qf.mapping, qf.tree);
}

Pair p(int w, const char* s) { return {w, Value::str(s)}; }
Pair p(int w, int n) { return {w, Value::num(n)}; }

}  // namespace

TEST_CASE("running example provenance, pair for pair") {
  auto polys = provenance_of("mini-mas", "running");
  REQUIRE(polys.size() == 2);
  CHECK(tuple_text(polys[0].answer) == "(TAU)");
  CHECK(tuple_text(polys[1].answer) == "(UPENN)");
  std::vector<Monomial> tau{
      mono({p(1, "TAU"), p(2, "Tova M."), p(3, "OASSIS..."), p(4, "SIGMOD"), p(5, 2014)}),
      mono({p(1, "TAU"), p(2, "Tova M."), p(3, "Querying..."), p(4, "VLDB"), p(5, 2006)}),
      mono({p(1, "TAU"), p(2, "Tova M."), p(3, "Monitoring..."), p(4, "VLDB"), p(5, 2007)}),
      mono({p(1, "TAU"), p(2, "Slava N."), p(3, "OASSIS..."), p(4, "SIGMOD"), p(5, 2014)}),
      mono({p(1, "TAU"), p(2, "Tova M."), p(3, "A sample..."), p(4, "SIGMOD"), p(5, 2014)}),
  };
  std::vector<Monomial> upenn{
      mono({p(1, "UPENN"), p(2, "Susan D."), p(3, "OASSIS..."), p(4, "SIGMOD"), p(5, 2014)})};
  CHECK(polys[0].monomials.size() == 5);
  CHECK(polys[1].monomials.size() == 1);
  CHECK(polys[0].sorted() == Polynomial{{}, tau, {}}.sorted());
  CHECK(polys[1].sorted() == upenn);
}

TEST_CASE("union provenance shares word ids and keeps the two years apart") {
  auto polys = provenance_of("union", "before-after");
  REQUIRE(polys.size() == 1);
  CHECK(tuple_text(polys[0].answer) == "(TAU)");
  std::vector<Monomial> want{
      mono({p(1, "TAU"), p(2, "Tova M."), p(3, "Positive Active XML"), p(4, "PODS"), p(5, 2004)}),
      mono({p(1, "TAU"), p(2, "Tova M."), p(3, "Rudolf..."), p(4, "VLDB"), p(6, 2016)}),
  };
  CHECK(polys[0].sorted() == want);
}

TEST_CASE("combine sums polynomials") {
  auto polys = provenance_of("mini-mas", "running");
  auto all = combine(polys);
  CHECK(all.monomials.size() == 6);
  CHECK(same_multiset(all.monomials, [&] {
    auto v = polys[0].monomials;
    v.insert(v.end(), polys[1].monomials.begin(), polys[1].monomials.end());
    return v;
  }()));
}

TEST_CASE("evaluation matches the cross-product oracle on random toy databases") {
  using namespace testing;
  std::mt19937_64 rng(20261015);
  int checked = 0, nonempty = 0;
  for (int d = 0; d < 50; ++d) {
    Database db = random_db(rng);
    REQUIRE(db.total_tuples() <= 30);
    for (int q = 0; q < 20; ++q) {
      ToyQuery tq = random_cq(db.schema, rng);
      CAPTURE(tq.text);
      tq.cq.validate(db.schema);
      auto got = evaluate(tq.cq, db);
      std::vector<std::vector<std::size_t>> rows;
      for (auto& a : got) {
        rows.push_back(a.atom_tuples);
        std::vector<Value> head;
        for (auto& v : tq.cq.head_vars) head.push_back(a.at(v));
        CHECK(head == a.head);
      }
      std::sort(rows.begin(), rows.end());
      CHECK(rows == cross_product_oracle(tq.cq, db));
      ++checked;
      if (!rows.empty()) ++nonempty;
    }
  }
  CHECK(checked == 1000);
  CHECK(nonempty > 50);
}
