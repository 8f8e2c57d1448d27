// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <chrono>
#include <random>

#include "nlprov/circuit.hpp"
#include "nlprov/error.hpp"
#include "nlprov/pipeline.hpp"
#include "support.hpp"

using namespace nlprov;
using nlprov::testing::kF1Tau;
using nlprov::testing::kF2Tau;
using nlprov::testing::kUpenn;
using nlprov::testing::mono;

namespace {

struct Running {
  Session session;
  Polynomial all;
};

Running& running() {
  static Running r = [] {
    const Fixture& f = testing::fixture("mini-mas");
    Session s = Session::prepare(f.database, f.query("running"));
    Polynomial all = combine({s.polynomial(0), s.polynomial(1)});
    return Running{std::move(s), std::move(all)};
  }();
  return r;
}

}  // namespace

TEST_CASE("identity factorization of the running example") {
  auto& r = running();
  CNode id = identity(r.all.monomials);
  auto m = metrics(id);
  CHECK(m.length == 30);
  CHECK(m.readability == 5);
  CHECK(is_compatible(id, r.session.order(), r.all.monomials));
}

TEST_CASE("stored factorizations report their length, readability and compatibility") {
  auto& r = running();
  auto resolve = resolver_for(r.all.monomials);
  CNode f1 = parse_circuit(std::string(kF1Tau) + " + " + kUpenn, resolve);
  CNode f2 = parse_circuit(std::string(kF2Tau) + " + " + kUpenn, resolve);
  CHECK(metrics(f1).length == 20);
  CHECK(metrics(f1).readability == 3);
  CHECK(metrics(f2).length == 19);
  CHECK(metrics(f2).readability == 3);
  CHECK(same_multiset(expand(f1), r.all.monomials));
  CHECK(same_multiset(expand(f2), r.all.monomials));
  CHECK(is_compatible(f1, r.session.order(), r.all.monomials));
  CHECK_FALSE(is_compatible(f2, r.session.order(), r.all.monomials));
  CHECK(testing::compatible_by_definition(f1, r.session.order()));
  CHECK_FALSE(testing::compatible_by_definition(f2, r.session.order()));
}

TEST_CASE("greedy factorization of the running example") {
  auto& r = running();
  CNode g = greedy_factorize(r.session.order(), r.all.monomials);
  CHECK(metrics(g).length <= 20);
  CHECK(same_multiset(expand(g), r.all.monomials));
  CHECK(is_compatible(g, r.session.order(), r.all.monomials));
  CHECK(to_text(g) ==
        "[TAU]·([Tova M.]·([SIGMOD]·[2014]·([OASSIS...] + [A sample...]) + "
        "[VLDB]·([Monitoring...]·[2007] + [Querying...]·[2006])) + "
        "[Slava N.]·[OASSIS...]·[SIGMOD]·[2014]) + " + std::string(kUpenn));
}

TEST_CASE("circuit text round trip") {
  auto& r = running();
  auto resolve = resolver_for(r.all.monomials);
  CNode f1 = parse_circuit(std::string(kF1Tau) + " + " + kUpenn, resolve);
  CHECK(parse_circuit(to_text(f1), resolve) == f1);
  CHECK_THROWS_AS(parse_circuit("[TAU]·([nope]", resolve), Error);
  try {
    parse_circuit("[nope]", resolve);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::LeafNotFound);
  }
}

TEST_CASE("compatibility needs a circuit for the same monomials") {
  auto& r = running();
  CNode wrong = identity({r.all.monomials[0]});
  try {
    is_compatible(wrong, r.session.order(), r.all.monomials);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::LeafNotFound);
  }
}

TEST_CASE("level is the negated distance from the root") {
  CNode a = CNode::leaf(1, Value::str("a"));
  CNode c = CNode::product({a, CNode::sum({CNode::leaf(2, Value::str("b")), CNode::leaf(2, Value::str("c"))})});
  CHECK(level(c, &c) == 0);
  CHECK(level(c, &c.children[0]) == -1);
  CHECK(level(c, &c.children[1].children[1]) == -2);
  CHECK_THROWS_AS(level(c, &a), Error);
}

TEST_CASE("expansion distributes products over sums") {
  auto L = [](int w, const char* s) { return CNode::leaf(w, Value::str(s)); };
  CNode c = CNode::product({CNode::sum({L(1, "a"), L(1, "b")}), CNode::sum({L(2, "c"), L(2, "d"), L(2, "e")})});
  auto terms = expand(c);
  CHECK(terms.size() == 6);
  std::vector<Monomial> want;
  for (const char* x : {"a", "b"})
    for (const char* y : {"c", "d", "e"}) want.push_back(mono({{1, Value::str(x)}, {2, Value::str(y)}}));
  CHECK(same_multiset(terms, want));
}

TEST_CASE("canonical form flattens nested operators and unary nodes") {
  auto L = [](int w, const char* s) { return CNode::leaf(w, Value::str(s)); };
  CNode c = CNode::sum({CNode::sum({L(1, "a"), CNode::product({L(2, "b")})}), L(1, "c")});
  canonicalize(c);
  CHECK(c.type == NodeType::Sum);
  CHECK(c.children.size() == 3);
  CHECK(c.children[1].is_leaf());
}

TEST_CASE("question order follows the tree and places conjuncts side by side") {
  const auto& qf = testing::fixture("mas-plus").query("q14");
  QuestionOrder o = question_order(qf.tree, qf.mapping);
  auto wid = [&](int node) { return o.wid_of_node.at(node); };
  CHECK(o.leq(wid(5), wid(3)));    // TAU under authors
  CHECK(o.leq(wid(7), wid(3)));    // HUJI under authors
  CHECK_FALSE(o.leq(wid(7), wid(5)));
  CHECK_FALSE(o.leq(wid(14), wid(12)));
  CHECK(o.leq(wid(14), wid(3)));
}

TEST_CASE("property suite on random polynomials") {
  std::mt19937_64 rng(42);
  testing::FactorizationOracle oracle;
  int exhaustive = 0;
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 200; ++i) {
    int k = std::uniform_int_distribution<int>(1, 5)(rng);
    int n = std::uniform_int_distribution<int>(1, 6)(rng);
    auto q = testing::random_question(k, rng);
    auto ms = testing::random_monomials(k, n, 3, rng);
    CAPTURE(i);
    CNode g = greedy_factorize(q.order, ms);
    CAPTURE(to_text(g));
    CHECK(same_multiset(expand(g), ms));
    CHECK(is_compatible(g, q.order, ms));
    CHECK(testing::compatible_by_definition(g, q.order));
    CHECK(metrics(g).length <= metrics(identity(ms)).length);
    if (n <= 4) {
      int best = oracle.min_compatible_length(ms, q.order);
      CHECK(best > 0);
      CHECK(best <= metrics(g).length);
      ++exhaustive;
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(exhaustive > 50);
  CHECK(secs < 30);
}

TEST_CASE("exhaustive oracle finds known optima") {
  auto L = [](int w, const char* s) { return Pair{w, Value::str(s)}; };
  // a·c + a·d + b·c + b·d = (a + b)·(c + d), words unrelated in the question
  std::vector<DepNode> nodes{{1, "r", "NN", "root", -1, {}}, {2, "x", "NN", "dep", 1, {}}, {3, "y", "NN", "dep", 1, {}}};
  DependencyTree t(nodes);
  QuestionOrder o = question_order(t, std::map<int, int>{{2, 2}, {3, 3}});
  std::vector<Monomial> ms{mono({L(2, "a"), L(3, "c")}), mono({L(2, "a"), L(3, "d")}),
                           mono({L(2, "b"), L(3, "c")}), mono({L(2, "b"), L(3, "d")})};
  testing::FactorizationOracle oracle;
  CHECK(oracle.min_compatible_length(ms, o) == 4);
  // with y below x, the y values may not sit above the x values
  std::vector<DepNode> chain{{1, "r", "NN", "root", -1, {}}, {2, "x", "NN", "dep", 1, {}}, {3, "y", "NN", "dep", 2, {}}};
  DependencyTree t2(chain);
  QuestionOrder o2 = question_order(t2, std::map<int, int>{{2, 2}, {3, 3}});
  std::vector<Monomial> ms2{mono({L(2, "a"), L(3, "c")}), mono({L(2, "b"), L(3, "c")})};
  CHECK(oracle.min_compatible_length(ms2, o2) == 4);
  CHECK(oracle.min_compatible_length(ms2, o) == 3);
}

TEST_CASE("template factorization is sound on unseen answers") {
  std::mt19937_64 rng(7);
  int applied = 0;
  for (int i = 0; i < 100; ++i) {
    int k = std::uniform_int_distribution<int>(2, 5)(rng);
    auto q = testing::random_question(k, rng);
    auto a = testing::random_monomials(k, 5, 3, rng);
    auto b = testing::random_monomials(k, 5, 3, rng);
    CAPTURE(i);
    FactorTemplate t = derive_template(greedy_factorize(q.order, a), q.order);
    CNode via = factorize_with_template(t, b, q.order);
    CNode direct = greedy_factorize(q.order, b);
    CHECK(same_multiset(expand(via), b));
    CHECK(is_compatible(via, q.order, b));
    CHECK(testing::compatible_by_definition(via, q.order));
    CHECK(metrics(via).length <= metrics(identity(b)).length);
    CHECK(metrics(direct).length <= metrics(identity(b)).length);
    if (!t.chain.empty()) ++applied;
  }
  CHECK(applied > 0);
}

TEST_CASE("template and greedy agree on every fixture answer") {
  for (const char* fx : {"mini-mas", "union", "mas-plus"}) {
    const Fixture& f = testing::fixture(fx);
    for (auto& qf : f.queries) {
      RunOptions with, without;
      without.use_template = false;
      Session a = Session::prepare(f.database, qf, with);
      Session b = Session::prepare(f.database, qf, without);
      for (std::size_t i = 0; i < a.size(); ++i) {
        CAPTURE(qf.name);
        CHECK(metrics(a.circuit(i)).length == metrics(b.circuit(i)).length);
        CHECK(is_compatible(a.circuit(i), a.order(), a.polynomial(i).monomials));
      }
    }
  }
}

TEST_CASE("template application rejects monomials missing a chain word") {
  auto& r = running();
  FactorTemplate t = derive_template(r.session.circuit(0), r.session.order());
  REQUIRE_FALSE(t.chain.empty());
  std::vector<Monomial> ms{mono({{2, Value::str("x")}})};
  CHECK_THROWS_AS(apply_template(t, ms, r.session.order()), Error);
}

TEST_CASE("synthetic provenance grows in factorized length with the value pool") {
  int previous = 0;
  for (int unique : {10, 100, 500}) {
    Polynomial p = generate_synthetic(500, unique, 5, 3);
    CHECK(p.monomials.size() == 500);
    NlContext ctx = synthetic_context(5);
    CNode g = greedy_factorize(question_order(ctx.tree, ctx.node_of_wid), p.monomials);
    CHECK(same_multiset(expand(g), p.monomials));
    int len = metrics(g).length;
    CHECK(len >= previous);
    previous = len;
  }
}
