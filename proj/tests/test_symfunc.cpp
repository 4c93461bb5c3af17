#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <omp.h>

#include "invlab/symfunc.hpp"

using namespace invlab;

namespace {

std::vector<std::vector<int>> valid_indices(int n, int q) {
  std::vector<std::vector<int>> out;
  std::vector<int> alpha(static_cast<std::size_t>(q), 0);
  auto rec = [&](auto&& self, int slot, int left) -> void {
    if (slot == q) {
      out.push_back(alpha);
      return;
    }
    for (int a = 0; a <= left; ++a) {
      alpha[static_cast<std::size_t>(slot)] = a;
      self(self, slot + 1, left - a);
    }
  };
  rec(rec, 0, n);
  return out;
}

}  // namespace

TEST_CASE("one family degenerates to the elementary symmetric functions") {
  for (int j = 0; j <= 4; ++j) {
    std::vector<FormalPoly> vars;
    for (int i = 0; i < 4; ++i) vars.push_back(FormalPoly::variable(4, 1, 0, i));
    CHECK(partial_polarization({j}, 4, 1).equal(elementary(j, 4, 1, vars)));
  }
}

TEST_CASE("disjointness excludes the diagonal") {
  FormalPoly p = partial_polarization({1, 1}, 2, 2);
  FormalPoly expected = FormalPoly::variable(2, 2, 0, 0)
                            .mul(FormalPoly::variable(2, 2, 1, 1))
                            .add(FormalPoly::variable(2, 2, 0, 1)
                                     .mul(FormalPoly::variable(2, 2, 1, 0)));
  CHECK(p.equal(expected));
}

TEST_CASE("the empty index gives the constant one") {
  CHECK(partial_polarization({0, 0, 0}, 3, 3).equal(FormalPoly::constant(3, 3, 1)));
}

TEST_CASE("overweight indices are refused") {
  CHECK_THROWS_WITH_AS(partial_polarization({2, 2}, 3, 2),
                       "symfunc: polarization index exceeds the variable count",
                       Error);
}

TEST_CASE("sum expansion splits by weight") {
  SumExpansion triv = sum_expansion(3, 1, 4);
  CHECK(triv.holds);
  CHECK(triv.indices.size() == 1);

  SumExpansion lin = sum_expansion(1, 2, 3);
  CHECK(lin.holds);
  CHECK(lin.indices.size() == 2);

  SumExpansion quad = sum_expansion(2, 2, 3);
  CHECK(quad.holds);
  CHECK(quad.indices.size() == 3);  // (2,0), (1,1), (0,2)

  for (int n = 1; n <= 4; ++n)
    for (int q = 1; q <= 3; ++q)
      for (int k = 0; k <= n; ++k) CHECK(sum_expansion(k, q, n).holds);
}

TEST_CASE("the classic polarization identity appears verbatim") {
  SymExpr e = express_in_power_products({1, 1}, 4, 2);
  SymExpr expected = SymExpr::symbol(4, 2, {1, {1, 0}})
                         .mul(SymExpr::symbol(4, 2, {1, {0, 1}}))
                         .sub(SymExpr::symbol(4, 2, {1, {1, 1}}));
  CHECK(e.equal(expected));
  CHECK(e.arguments_used() ==
        std::vector<Pattern>{{0, 1}, {1, 0}, {1, 1}});
}

TEST_CASE("single-family indices are their own symbol") {
  for (int j = 1; j <= 4; ++j) {
    SymExpr e = express_in_power_products({j}, 4, 1);
    CHECK(e.equal(SymExpr::symbol(4, 1, {j, {1}})));
  }
}

TEST_CASE("the (2,1) inversion verifies by integer evaluation") {
  SymExpr e = express_in_power_products({2, 1}, 3, 2);
  std::vector<mpz_class> values{1, 2, 3, 5, 7, 11};
  CHECK(verify_identity(e, {2, 1}, values));
  CHECK(e.eval(values) == partial_polarization({2, 1}, 3, 2).eval(values));
  CHECK(e.expand().equal(partial_polarization({2, 1}, 3, 2)));
}

TEST_CASE("every small index verifies under full symbolic expansion") {
  for (int n = 1; n <= 4; ++n) {
    PolarizationEngine engine(n);
    for (int q = 1; q <= 3; ++q)
      for (const auto& alpha : valid_indices(n, q)) {
        CAPTURE(n);
        CAPTURE(q);
        CAPTURE(alpha[0]);
        SymExpr e = engine.express(alpha);
        CHECK(e.expand().equal(partial_polarization(alpha, n, q)));
        for (const SymSymbol& s : e.terms.empty()
                                      ? std::vector<SymSymbol>{}
                                      : e.terms.begin()->first)
          CHECK(s.j <= n);
      }
  }
}

TEST_CASE("hand arithmetic check of the bilinear identity") {
  SymExpr e = express_in_power_products({1, 1}, 2, 2);
  std::vector<mpz_class> values{1, 2, 3, 4};
  // s_{1,1} = 1*4 + 2*3 = 10 and s_1 s_1 - s_1(xy) = 3*7 - 11 = 10.
  CHECK(partial_polarization({1, 1}, 2, 2).eval(values) == 10);
  CHECK(e.eval(values) == 10);
  CHECK(verify_identity(e, {1, 1}, values));

  std::vector<mpz_class> zeros{0, 0, 0, 0};
  CHECK(verify_identity(e, {1, 1}, zeros));

  SymExpr corrupted = e.add(SymExpr::symbol(2, 2, {1, {1, 1}}));
  CHECK_FALSE(verify_identity(corrupted, {1, 1}, values));
  CHECK_FALSE(corrupted.expand().equal(partial_polarization({1, 1}, 2, 2)));
}

TEST_CASE("the memo is deterministic under concurrent fills") {
  std::vector<std::vector<int>> indices = valid_indices(4, 3);
  PolarizationEngine serial(4);
  std::vector<SymExpr> expected;
  for (const auto& alpha : indices) expected.push_back(serial.express(alpha));

  PolarizationEngine shared(4);
  std::vector<SymExpr> got(indices.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < indices.size(); ++i)
    got[i] = shared.express(indices[i]);
  for (std::size_t i = 0; i < indices.size(); ++i)
    CHECK(got[i].equal(expected[i]));
}

TEST_CASE("rendering stays readable") {
  SymExpr e = express_in_power_products({1, 1}, 2, 2);
  CHECK(e.str() == "s1(x2)*s1(x1) - s1(x1*x2)");
  CHECK(partial_polarization({1, 1}, 2, 2).str() ==
        "x1_2*x2_1 + x1_1*x2_2");
}
