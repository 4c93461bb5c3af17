#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "invlab/action.hpp"

using namespace invlab;

namespace {

// sign action of Z/2 on F5[t]/(t^N)
GroupAction sign_action(int N) {
  auto F5 = BaseRing::prime_field(5);
  Algebra A = Algebra::single(F5, {"t"}, {}, N);
  auto G = ConstantGroup::cyclic(2);
  std::vector<ElementHom> autos{endomorphism(A, {A.var("t")}),
                                endomorphism(A, {A.var("t").neg()})};
  return GroupAction::constant(G, A, autos);
}

// Z/4 acting on F2[t]/(t^N) by t -> t + t^2 (order 4 once N > 4)
GroupAction wild_z4_action(int N) {
  auto F2 = BaseRing::prime_field(2);
  Algebra A = Algebra::single(F2, {"t"}, {}, N);
  auto G = ConstantGroup::cyclic(4);
  Element t = A.var("t");
  Element s1 = t.add(t.pow(2));
  ElementHom sigma = endomorphism(A, {s1});
  std::vector<ElementHom> autos{endomorphism(A, {t}), sigma};
  autos.push_back(endomorphism(A, {sigma.apply(s1)}));
  autos.push_back(endomorphism(A, {sigma.apply(sigma.apply(s1))}));
  return GroupAction::constant(G, A, autos);
}

Element random_element(const Algebra& A, std::mt19937_64& rng) {
  std::vector<std::pair<std::uint32_t, Scalar>> t;
  for (std::uint32_t i = 0; i < A.dim(); ++i)
    if (rng() % 3 == 0) t.emplace_back(i, A.base().random(rng));
  return A.from_terms(std::move(t));
}

}  // namespace

TEST_CASE("sign action: norms, characteristic polynomial, invariants") {
  GroupAction a = sign_action(4);
  const Algebra& A = a.space();
  Element t = A.var("t");
  a.verify();
  CHECK(a.rank() == 2);

  // norm(t) = t * (-t) = -t^2, cross-checked against the orbit oracle
  CHECK(a.norm(t).equal(A.parse("-t^2")));
  CHECK(a.norm(t).equal(a.orbit_product(t)));

  // chi_t(T) = T^2 - t^2
  auto c = a.char_poly(t);
  REQUIRE(c.size() == 3);
  CHECK(c[2].equal(A.one()));
  CHECK(c[1].is_zero());
  CHECK(c[0].equal(A.parse("-t^2")));
  auto s = a.sigmas(t);
  CHECK(s[0].equal(A.one()));
  CHECK(s[1].is_zero());
  CHECK(s[2].equal(a.norm(t)));
  CHECK(a.cayley_hamilton_holds(t));

  auto inv = a.invariant_basis();
  Span is = Span::of(A, inv);
  CHECK(is.rank() == 2);
  CHECK(is.contains(A.one()));
  CHECK(is.contains(A.parse("t^2")));
  CHECK_FALSE(is.contains(t));
  CHECK(a.is_invariant(A.parse("t^2")));
  CHECK_FALSE(a.is_invariant(A.parse("t^3")));
}

TEST_CASE("norm equals orbit product on random elements") {
  std::mt19937_64 rng(3);
  for (GroupAction a : {sign_action(5), wild_z4_action(8)}) {
    for (int trial = 0; trial < 6; ++trial) {
      Element x = random_element(a.space(), rng);
      CHECK(a.norm(x).equal(a.orbit_product(x)));
    }
  }
}

TEST_CASE("sigma coefficients are invariant and CH holds") {
  std::mt19937_64 rng(5);
  for (GroupAction a : {sign_action(4), wild_z4_action(6)}) {
    for (int trial = 0; trial < 4; ++trial) {
      Element x = random_element(a.space(), rng);
      auto s = a.sigmas(x);
      for (const Element& si : s) CHECK(a.is_invariant(si));
      CHECK(a.cayley_hamilton_holds(x));
    }
  }
}

TEST_CASE("invariance via coaction matches fixed points of all automorphisms") {
  std::mt19937_64 rng(8);
  GroupAction a = wild_z4_action(8);
  for (int trial = 0; trial < 12; ++trial) {
    Element x = random_element(a.space(), rng);
    bool fixed = true;
    for (int g = 0; g < 4; ++g) fixed = fixed && a.act(g, x).equal(x);
    CHECK(a.is_invariant(x) == fixed);
  }
}

TEST_CASE("rotation of a three-component product") {
  auto F7 = BaseRing::prime_field(7);
  Algebra line = Algebra::single(F7, {"s"}, {}, 2);
  Algebra A = Algebra::product({line, line, line});
  auto G = ConstantGroup::cyclic(3);
  Element s0 = A.var("s0"), s1 = A.var("s1"), s2 = A.var("s2");
  std::vector<ElementHom> autos{
      endomorphism(A, {s0, s1, s2}, {0, 1, 2}),
      endomorphism(A, {s1, s2, s0}, {1, 2, 0}),
      endomorphism(A, {s2, s0, s1}, {2, 0, 1})};
  GroupAction a = GroupAction::constant(G, A, autos);
  a.verify();
  CHECK(a.acts_freely_on_components());
  // components annihilate, so the orbit product of s0 dies
  CHECK(a.norm(s0).is_zero());
  auto inv = a.invariant_basis();
  Span is = Span::of(A, inv);
  CHECK(is.rank() == 2);
  CHECK(is.contains(A.one()));
  CHECK(is.contains(s0.add(s1).add(s2)));
  CHECK_FALSE(is.contains(s0));
  // the diagonal unit sum is 1; a single unit is not invariant
  CHECK_FALSE(a.is_invariant(A.unit(0)));
}

TEST_CASE("a fixed component breaks freeness") {
  auto F7 = BaseRing::prime_field(7);
  Algebra line = Algebra::single(F7, {"s"}, {}, 2);
  Algebra A = Algebra::product({line, line});
  auto G = ConstantGroup::cyclic(2);
  // g fixes both components (acts by sign on each line)
  std::vector<ElementHom> autos{
      endomorphism(A, {A.var("s0"), A.var("s1")}),
      endomorphism(A, {A.var("s0").neg(), A.var("s1").neg()})};
  GroupAction a = GroupAction::constant(G, A, autos);
  a.verify();
  CHECK_FALSE(a.acts_freely_on_components());
}

TEST_CASE("translation flow: norm of x is x^p") {
  auto F3 = BaseRing::prime_field(3);
  Algebra A = Algebra::single(F3, {"x"}, {}, 9);
  Element x = A.var("x");
  GroupAction a = GroupAction::flow(A, {A.one()});  // D = d/dx
  a.verify();
  CHECK(a.rank() == 3);
  CHECK(a.norm(x).equal(x.pow(3)));
  // chi_x(T) = (T - x)^3 = T^3 - x^3 in characteristic 3
  auto c = a.char_poly(x);
  CHECK(c[2].is_zero());
  CHECK(c[1].is_zero());
  CHECK(c[0].equal(x.pow(3).neg()));
  CHECK(a.cayley_hamilton_holds(x));
  auto inv = a.invariant_basis();
  Span is = Span::of(A, inv);
  // kernel of d/dx on F3[x]/(x^9): powers x^0, x^3, x^6
  CHECK(is.rank() == 3);
  CHECK(is.contains(x.pow(3)));
  CHECK(is.contains(x.pow(6)));
  CHECK_FALSE(is.contains(x));
  CHECK(a.is_invariant(a.norm(x)));
}

TEST_CASE("quadratic flow in characteristic 2") {
  auto F2 = BaseRing::prime_field(2);
  Algebra A = Algebra::single(F2, {"x"}, {}, 4);
  Element x = A.var("x");
  GroupAction a = GroupAction::flow(A, {x.pow(2)});  // D(x) = x^2
  a.verify();
  CHECK(a.norm(x).equal(x.pow(2)));
  auto inv = a.invariant_basis();
  Span is = Span::of(A, inv);
  CHECK(is.rank() == 3);  // 1, x^2, x^3
  CHECK(is.contains(x.pow(2)));
  CHECK(is.contains(x.pow(3)));
  CHECK_FALSE(is.contains(x));
}

TEST_CASE("a non-nilpotent derivation is rejected") {
  auto F3 = BaseRing::prime_field(3);
  Algebra A = Algebra::single(F3, {"x"}, {}, 9);
  // D = x d/dx is not 3-nilpotent: D^3(x) = x
  GroupAction a = GroupAction::flow(A, {A.var("x")});
  CHECK_THROWS_WITH_AS(a.verify(), doctest::Contains("nilpotent"), Error);
}

TEST_CASE("a broken group table is caught by verify") {
  auto F5 = BaseRing::prime_field(5);
  Algebra A = Algebra::single(F5, {"t"}, {}, 4);
  auto G = ConstantGroup::cyclic(2);
  // "action" where g is t -> 2t, but (2t)*2 = 4t != t: not order 2
  std::vector<ElementHom> autos{
      endomorphism(A, {A.var("t")}),
      endomorphism(A, {A.var("t").scaled(F5.from_int(2))})};
  GroupAction a = GroupAction::constant(G, A, autos);
  CHECK_THROWS_WITH_AS(a.verify(), doctest::Contains("group law"), Error);
}

TEST_CASE("flow with a commuting constant factor") {
  auto F2 = BaseRing::prime_field(2);
  Algebra A = Algebra::single(F2, {"x", "y"}, {}, 3);
  Element x = A.var("x"), y = A.var("y");
  auto G = ConstantGroup::cyclic(2);
  // D(x) = y, D(y) = 0; sigma: x -> x + y, y -> y
  std::vector<ElementHom> autos{endomorphism(A, {x, y}),
                                endomorphism(A, {x.add(y), y})};
  GroupAction a = GroupAction::flow_times_constant(A, {y, A.zero()}, G, autos);
  a.verify();
  CHECK(a.rank() == 4);
  CHECK(a.cayley_hamilton_holds(x));
  // block structure: chi of the product is the constant-part chi squared
  GroupAction ared = GroupAction::constant(G, A, autos);
  auto full = a.char_poly(x);
  auto red = ared.char_poly(x);
  auto sq = poly_mul(red, red);
  REQUIRE(full.size() == sq.size());
  for (std::size_t i = 0; i < full.size(); ++i)
    CHECK(full[i].equal(sq[i]));
  // invariants must be killed by D and fixed by sigma
  auto inv = a.invariant_basis();
  for (const Element& b : inv) {
    CHECK(apply_derivation(A, {y, A.zero()}, b).is_zero());
    CHECK(autos[1].apply(b).equal(b));
  }
}

TEST_CASE("non-commuting factors are rejected") {
  auto F3 = BaseRing::prime_field(3);
  Algebra A = Algebra::single(F3, {"x"}, {}, 5);
  auto G = ConstantGroup::cyclic(2);
  std::vector<ElementHom> autos{endomorphism(A, {A.var("x")}),
                                endomorphism(A, {A.var("x").neg()})};
  // D = d/dx does not commute with x -> -x
  GroupAction a =
      GroupAction::flow_times_constant(A, {A.one()}, G, autos);
  CHECK_THROWS_WITH_AS(a.verify(), doctest::Contains("commute"), Error);
}

TEST_CASE("subgroup action restricts the symmetry") {
  GroupAction a = wild_z4_action(8);
  GroupAction h = subgroup_action(a, {0, 2});  // generated by sigma^2
  h.verify();
  CHECK(h.group().order() == 2);
  // invariants grow when the group shrinks
  Span ag = Span::of(a.space(), a.invariant_basis());
  Span ah = Span::of(a.space(), h.invariant_basis());
  CHECK(ah.contains_all(ag));
  CHECK_FALSE(ag.contains_all(ah));
  CHECK_THROWS_AS(subgroup_action(a, {0, 1}), Error);  // not closed
}

TEST_CASE("counit collapses the coaction back to the identity") {
  std::mt19937_64 rng(21);
  for (GroupAction a : {sign_action(4), wild_z4_action(6)}) {
    for (int trial = 0; trial < 6; ++trial) {
      Element v = random_element(a.space(), rng);
      CHECK(a.counit_collapse(a.coact(v)).equal(v));
    }
  }
}

TEST_CASE("norm is multiplicative") {
  std::mt19937_64 rng(13);
  GroupAction a = sign_action(4);
  for (int trial = 0; trial < 6; ++trial) {
    Element x = random_element(a.space(), rng);
    Element y = random_element(a.space(), rng);
    CHECK(a.norm(x.mul(y)).equal(a.norm(x).mul(a.norm(y))));
  }
}
