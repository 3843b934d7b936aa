#include <doctest.h>

#include "helpers.hpp"
#include "mil/learner.hpp"
#include "mil/problems.hpp"
#include "mil/subsumption.hpp"

using namespace mil;
using testing::at;
using testing::cl;

namespace {

std::vector<Clause> b_star_of(const MilProblem& p) {
  std::vector<Clause> out = p.bk;
  for (const auto& e : p.pos) out.emplace_back(e, std::vector<Atom>{});
  return out;
}

bool has(const std::vector<Clause>& cs, const Clause& c) {
  for (const auto& x : cs)
    if (testing::same(x, c)) return true;
  return false;
}

std::vector<Clause> clauses(const ConstructResult& r) {
  std::vector<Clause> out;
  for (const auto& i : r.instances) out.push_back(i.clause);
  return out;
}

}  // namespace

TEST_SUITE("learner") {

TEST_CASE("construct on the shortest a^n b^n string") {
  auto p = gen_anbn(3);
  auto r = construct(p.pos[0], b_star_of(p), p.metarules, p.invented, {});
  CHECK(has(clauses(r), cl("s(X,Y) :- a(X,Z), b(Z,Y).")));
  CHECK(r.inventions == 0);
}

TEST_CASE("construct invents a predicate for longer strings") {
  // the base case is already learned from the shortest string
  auto p = gen_anbn(3);
  auto b_star = b_star_of(p);
  b_star.push_back(cl("s(X,Y) :- a(X,Z), b(Z,Y)."));
  auto r = construct(p.pos[1], b_star, p.metarules, default_invented_pool(), {});
  auto cs = clauses(r);
  CHECK(has(cs, cl("s(X,Y) :- a(X,Z), $1(Z,Y).")));
  CHECK(has(cs, cl("$1(X,Y) :- s(X,Z), b(Z,Y).")));
  CHECK(r.inventions == 1);
  // without it no single invention suffices
  auto bare = construct(p.pos[1], b_star_of(p), p.metarules, default_invented_pool(), {});
  CHECK(bare.inventions != 1);
}

TEST_CASE("construct yields metarule instances") {
  auto p = gen_anbn(3);
  for (const auto& e : p.pos) {
    auto r = construct(e, b_star_of(p), p.metarules, default_invented_pool(), {});
    for (const auto& inst : r.instances) {
      CHECK(apply(inst.metarule.clause, inst.theta) == inst.clause);
      CHECK(meta_subsumes(inst.metarule.clause, inst.clause));
      CHECK(is_v_spec(inst.metarule.clause, inst.clause));
    }
  }
}

TEST_CASE("construct for the parents analogy") {
  auto [parents, bounded] = gen_analogy_problems();
  auto r = construct(parents.pos[0], b_star_of(parents), {analogy_m1()}, {}, {});
  REQUIRE(r.instances.size() == 1);
  CHECK(testing::same(r.instances[0].clause, cl("parents(X,Y,Z) :- father(X,Z), mother(Y,Z).")));
}

TEST_CASE("pool exhaustion is an error") {
  auto p = gen_anbn(3);
  CHECK_THROWS_WITH_AS(construct(p.pos[1], b_star_of(p), p.metarules, {}, {}), "invention depth exceeded", Error);
}

TEST_CASE("top program on a^n b^n") {
  auto h = top_program(gen_anbn(3));
  auto prog = h.program();
  REQUIRE(prog.size() == 3);
  CHECK(has(prog, cl("s(X,Y) :- a(X,Z), b(Z,Y).")));
  CHECK(has(prog, cl("s(X,Y) :- a(X,Z), $1(Z,Y).")));
  CHECK(has(prog, cl("$1(X,Y) :- s(X,Z), b(Z,Y).")));
  auto bk = gen_anbn(3).bk;
  CHECK(accuracy(h, bk, {at("s([a,a,a,a,b,b,b,b],[])")}, {}, {}) == 1.0);
  CHECK(accuracy(h, bk, {}, {at("s([a,a,b],[])"), at("s([b,a],[])")}, {}) == 1.0);
}

TEST_CASE("the learned grammar parses strings longer than any chain instance") {
  // The invented pair behaves like the length-4 metarule P(x,y) <- Q(x,z),R(z,u),S(u,y).
  auto h = top_program(gen_anbn(3));
  Program p(gen_anbn(3).bk);
  for (const auto& c : h.program()) p.add(c);
  CHECK(entails(p, at("s([a,a,a,a,a,b,b,b,b,b],[])"), {}) == Truth::yes);
  CHECK(entails(p, at("s([a,a,a,b,b],[])"), {}) == Truth::no);
}

TEST_CASE("top program on bounded_by") {
  auto [parents, bounded] = gen_analogy_problems();
  auto prog = top_program(bounded).program();
  REQUIRE(prog.size() == 2);
  CHECK(has(prog, cl("bounded_by(X,Y,Z) :- lt(X,Z), lt(Y,Z).")));
  CHECK(has(prog, cl("bounded_by(X,Y,Z) :- gt(X,Z), gt(Y,Z).")));
  auto pp = top_program(parents).program();
  REQUIRE(pp.size() == 1);
  CHECK(has(pp, cl("parents(X,Y,Z) :- father(X,Z), mother(Y,Z).")));
}

TEST_CASE("negative examples remove clauses") {
  MilProblem p;
  p.pos = {at("r(a,b)")};
  p.neg = {at("r(b,a)")};
  p.bk = {cl("e(a,b)."), cl("e(b,a)."), cl("f(a,b).")};
  p.metarules = {*library_metarule("Identity")};
  auto h = top_program(p);
  auto prog = h.program();
  CHECK(has(prog, cl("r(X,Y) :- f(X,Y).")));
  CHECK_FALSE(has(prog, cl("r(X,Y) :- e(X,Y).")));
  CHECK(h.removed.size() == 1);
  Program check(p.bk);
  for (const auto& c : prog) check.add(c);
  CHECK(entails(check, p.neg[0], {}) == Truth::no);
}

TEST_CASE("a negative provable from every candidate empties the hypothesis") {
  MilProblem p;
  p.pos = {at("r(a,b)")};
  p.neg = {at("r(b,a)")};
  p.bk = {cl("e(a,b)."), cl("e(b,a)."), cl("g(a,b)."), cl("g(b,a).")};
  p.metarules = {*library_metarule("Identity")};
  CHECK(top_program(p).empty());
}

TEST_CASE("every learned clause helps prove a positive example") {
  auto g = gen_coloured_graph(4, Noise::none, 0.0, 1);
  auto h = top_program(g);
  for (const auto& inst : h.clauses) {
    bool used = false;
    for (const auto& e : g.pos) {
      Program without(g.bk);
      for (const auto& x : g.pos)
        if (!(x == e)) without.add_fact(x);
      Program with = without;
      with.add(inst.clause);
      if (entails(with, e, {}) == Truth::yes) used = true;
    }
    if (inst.clause.head().pred().name().str()[0] != '$') CHECK(used);
  }
  Program full(g.bk);
  for (const auto& c : h.program()) full.add(c);
  for (const auto& e : g.neg) CHECK(entails(full, e, {}) != Truth::yes);
}

TEST_CASE("accuracy of the empty hypothesis") {
  Hypothesis empty;
  std::vector<Atom> pos, neg;
  for (int i = 0; i < 10; ++i) pos.push_back(at("p(c" + std::to_string(i) + ")"));
  CHECK(accuracy(empty, {}, pos, {}, {}) == 0.0);
  pos.resize(5);
  for (int i = 0; i < 5; ++i) neg.push_back(at("q(c" + std::to_string(i) + ")"));
  CHECK(accuracy(empty, {}, pos, neg, {}) == 0.5);
  CHECK(accuracy(empty, {}, {}, {}, {}) == 0.0);
}

TEST_CASE("problem validation") {
  MilProblem p;
  p.pos = {at("p(X)")};
  CHECK_THROWS_AS(p.validate(), Error);
  MilProblem q;
  q.pos = {at("p(a)")};
  q.neg = {at("p(a)")};
  CHECK_THROWS_AS(q.validate(), Error);
}

}  // TEST_SUITE
