#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "invlab/group.hpp"
#include "invlab/ring.hpp"

using namespace invlab;

TEST_CASE("cyclic group basics") {
  auto G = ConstantGroup::cyclic(6);
  CHECK(G.order() == 6);
  CHECK(G.identity() == 0);
  CHECK(G.mul(4, 5) == 3);
  CHECK(G.inv(2) == 4);
  CHECK(G.pow(1, 6) == 0);
  CHECK(G.pow(1, -1) == 5);
  CHECK(G.element_order(2) == 3);
  CHECK(G.element_order(1) == 6);
  CHECK(G.is_abelian());
  CHECK(G.by_name("g2") == 2);
  CHECK(G.by_name("nope") == -1);
}

TEST_CASE("bad tables are rejected") {
  // "multiplication" with a wrong identity row
  CHECK_THROWS_AS(ConstantGroup::from_table(
                      "broken", {"e", "a"}, {{0, 1}, {1, 1}}, 0),
                  Error);
  // non-associative quasigroup on 3 points: subtraction mod 3
  std::vector<std::vector<int>> sub3{{0, 2, 1}, {1, 0, 2}, {2, 1, 0}};
  CHECK_THROWS_AS(
      ConstantGroup::from_table("sub3", {"a", "b", "c"}, sub3, 0), Error);
}

TEST_CASE("S3 is the smallest nonabelian group") {
  auto S3 = ConstantGroup::symmetric(3);
  CHECK(S3.order() == 6);
  CHECK_FALSE(S3.is_abelian());
  int transposition = -1, threecycle = -1;
  for (int g = 0; g < 6; ++g) {
    if (S3.element_order(g) == 2 && transposition < 0) transposition = g;
    if (S3.element_order(g) == 3 && threecycle < 0) threecycle = g;
  }
  REQUIRE(transposition >= 0);
  REQUIRE(threecycle >= 0);
  auto A3 = S3.subgroup({threecycle});
  CHECK(A3.size() == 3);
  CHECK(S3.is_normal(A3));
  auto T = S3.subgroup({transposition});
  CHECK(T.size() == 2);
  CHECK_FALSE(S3.is_normal(T));
}

TEST_CASE("klein four group has three order-2 subgroups") {
  auto V = ConstantGroup::klein_four();
  CHECK(V.order() == 4);
  CHECK(V.is_abelian());
  int count = 0;
  for (int g = 1; g < 4; ++g) {
    CHECK(V.element_order(g) == 2);
    if (V.is_subgroup({V.identity(), g})) ++count;
  }
  CHECK(count == 3);
}

TEST_CASE("cosets partition deterministically") {
  auto G = ConstantGroup::cyclic(4);
  auto H = G.subgroup({2});  // {e, g2}
  auto cs = G.cosets(H);
  REQUIRE(cs.size() == 2);
  CHECK(cs[0] == std::vector<int>{0, 2});
  CHECK(cs[1] == std::vector<int>{1, 3});
  auto reps = G.coset_reps(H);
  CHECK(reps[0] == G.identity());
  CHECK(reps[1] == 1);
  CHECK(G.coset_of(3, H) == 1);
  CHECK(G.coset_of(2, H) == 0);
}

TEST_CASE("quotient group multiplies by representatives") {
  auto G = ConstantGroup::cyclic(4);
  auto H = G.subgroup({2});
  auto q = G.quotient(H);
  CHECK(q.group.order() == 2);
  CHECK(q.proj[0] == q.group.identity());
  CHECK(q.proj[2] == q.group.identity());
  CHECK(q.proj[1] == q.proj[3]);
  CHECK(q.group.mul(q.proj[1], q.proj[3]) == q.group.identity());

  auto S3 = ConstantGroup::symmetric(3);
  int threecycle = -1;
  for (int g = 0; g < 6; ++g)
    if (S3.element_order(g) == 3) { threecycle = g; break; }
  auto qs = S3.quotient(S3.subgroup({threecycle}));
  CHECK(qs.group.order() == 2);
  int transposition = -1;
  for (int g = 0; g < 6; ++g)
    if (S3.element_order(g) == 2) { transposition = g; break; }
  CHECK_THROWS_AS(S3.quotient(S3.subgroup({transposition})), Error);
}

TEST_CASE("product group law is componentwise") {
  auto P = ConstantGroup::product(ConstantGroup::cyclic(2),
                                  ConstantGroup::cyclic(3));
  CHECK(P.order() == 6);
  CHECK(P.is_abelian());
  // Z/2 x Z/3 is cyclic of order 6: some element has order 6
  bool found = false;
  for (int g = 0; g < 6; ++g) found = found || P.element_order(g) == 6;
  CHECK(found);
}
