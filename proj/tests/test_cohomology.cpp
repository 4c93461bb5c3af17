#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "invlab/cohomology.hpp"

using namespace invlab;

namespace {

GroupAction scaling_action(const Algebra& A, std::int64_t unit, int order) {
  const BaseRing& R = A.base();
  std::vector<ElementHom> autos;
  Element t = A.var(A.var_name(0));
  Scalar u = R.one();
  for (int i = 0; i < order; ++i) {
    autos.push_back(endomorphism(A, {t.scaled(u)}));
    u = R.mul(u, R.from_int(unit));
  }
  return GroupAction::constant(ConstantGroup::cyclic(order), A, autos);
}

// The cyclic action generated by t -> img, with powers computed by iteration.
GroupAction substitution_action(const Algebra& A, const Element& img,
                                int order) {
  ElementHom step = endomorphism(A, {img});
  std::vector<ElementHom> autos;
  Element cur = A.var(A.var_name(0));
  for (int i = 0; i < order; ++i) {
    autos.push_back(endomorphism(A, {cur}));
    cur = step.apply(cur);
  }
  return GroupAction::constant(ConstantGroup::cyclic(order), A, autos);
}

// t/(1+t) over a characteristic-2 base: the geometric series t + t^2 + ...
Element moebius_involution(const Algebra& A) {
  Element t = A.var(A.var_name(0));
  Element img = A.zero();
  for (std::size_t k = 1; k < A.dim(); ++k)
    img = img.add(t.pow(static_cast<std::int64_t>(k)));
  return img;
}

// An order-4 substitution over F_2, exact at every truncation N <= 16.
Element order_four(const Algebra& A) {
  Element t = A.var(A.var_name(0));
  Element img = t.add(t.pow(2));
  if (A.dim() > 11) img = img.add(t.pow(11));
  if (A.dim() > 15) img = img.add(t.pow(15));
  return img;
}

bool matrices_equal(const BaseRing& k,
                    const std::vector<std::vector<Scalar>>& a,
                    const std::vector<std::vector<Scalar>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (a[r].size() != b[r].size()) return false;
    for (std::size_t c = 0; c < a[r].size(); ++c)
      if (!k.equal(a[r][c], b[r][c])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("derivation modules exclude d/dt unless it kills the relation") {
  BaseRing F7 = BaseRing::prime_field(7);
  BaseRing F2 = BaseRing::prime_field(2);
  BaseRing Q = BaseRing::rationals();
  CHECK(theta_shift(Algebra::single(F7, {"t"}, {}, 5)) == 1);
  CHECK(theta_shift(Algebra::single(F7, {"t"}, {}, 7)) == 0);
  CHECK(theta_shift(Algebra::single(F7, {"t"}, {}, 14)) == 0);
  CHECK(theta_shift(Algebra::single(F2, {"t"}, {}, 8)) == 0);
  CHECK(theta_shift(Algebra::single(F2, {"t"}, {}, 9)) == 1);
  CHECK(theta_shift(Algebra::single(Q, {"t"}, {}, 6)) == 1);
}

TEST_CASE("a trivial action gives the trivial module on derivations") {
  BaseRing F7 = BaseRing::prime_field(7);
  Algebra A = Algebra::single(F7, {"t"}, {}, 5);
  GroupAction act = scaling_action(A, 1, 3);
  GModule M = theta_module(act);
  CHECK(M.dim == 4);
  CHECK(M.names.front() == "t^1 d/dt");
  GModule T = trivial_module(ConstantGroup::cyclic(3), F7, 4);
  for (int g = 0; g < 3; ++g) CHECK(matrices_equal(F7, M.act[g], T.act[g]));
}

TEST_CASE("tame scaling acts diagonally on derivations") {
  BaseRing F7 = BaseRing::prime_field(7);

  // 7 does not divide 9: basis t d/dt .. t^8 d/dt, entries zeta^{i-1}.
  Algebra A = Algebra::single(F7, {"t"}, {}, 9);
  GroupAction act = scaling_action(A, 2, 3);
  GModule M = theta_module(act);
  CHECK(M.dim == 8);
  Scalar zeta = F7.from_int(2);
  Scalar expect = F7.one();  // zeta^{1-1} at i = 1
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      if (i == j)
        CHECK(F7.equal(M.act[1][i][j], expect));
      else
        CHECK(F7.is_zero(M.act[1][i][j]));
    }
    expect = F7.mul(expect, zeta);
  }
  CHECK(h_zero(M).dim() == 3);  // i = 1, 4, 7
  CHECK(h_one(M).dim() == 0);   // |G| invertible
  CHECK(cyclic_h1_dimension(M) == 0);

  // 7 divides 7: d/dt survives and scales by zeta^{-1}.
  Algebra B = Algebra::single(F7, {"t"}, {}, 7);
  GModule M7 = theta_module(scaling_action(B, 2, 3));
  CHECK(M7.dim == 7);
  CHECK(M7.names.front() == "d/dt");
  CHECK(F7.equal(M7.act[1][0][0], F7.from_int(4)));
  CHECK(h_zero(M7).dim() == 2);  // i = 1, 4
  CHECK(h_one(M7).dim() == 0);
}

TEST_CASE("the wild involution is honest on derivations") {
  BaseRing F2 = BaseRing::prime_field(2);
  Algebra A = Algebra::single(F2, {"t"}, {}, 8);
  GroupAction act = substitution_action(A, moebius_involution(A), 2);
  GModule M = theta_module(act);
  CHECK(M.dim == 8);

  // The matrix squares to the identity and is not diagonal.
  const auto& S = M.act[1];
  bool off_diagonal = false;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      Scalar acc = F2.zero();
      for (int l = 0; l < 8; ++l) acc = F2.add(acc, F2.mul(S[i][l], S[l][j]));
      CHECK(F2.equal(acc, i == j ? F2.one() : F2.zero()));
      if (i != j && !F2.is_zero(S[i][j])) off_diagonal = true;
    }
  CHECK(off_diagonal);

  // Hand expansion of the adjoint: d/dt goes to (1 + t^2) d/dt and
  // t d/dt to (t + t^2) d/dt.
  for (int r = 0; r < 8; ++r) {
    CHECK(F2.equal(S[r][0], (r == 0 || r == 2) ? F2.one() : F2.zero()));
    CHECK(F2.equal(S[r][1], (r == 1 || r == 2) ? F2.one() : F2.zero()));
  }

  CHECK(h_zero(M).dim() == 5);
  CHECK(h_one(M).dim() == 2);
  CHECK(cyclic_h1_dimension(M) == 2);
}

TEST_CASE("coboundaries satisfy the cocycle identity") {
  BaseRing F2 = BaseRing::prime_field(2);
  Algebra A = Algebra::single(F2, {"t"}, {}, 8);
  GroupAction act = substitution_action(A, order_four(A), 4);
  GModule M = theta_module(act);
  CohomologyClassSpace H1 = h_one(M);
  const int n = M.G.order(), d = M.dim;
  auto block = [&](const std::vector<Scalar>& f, int g) {
    return std::vector<Scalar>(f.begin() + g * d, f.begin() + (g + 1) * d);
  };
  std::vector<std::vector<Scalar>> all = H1.coboundaries;
  all.insert(all.end(), H1.reps.begin(), H1.reps.end());
  for (const auto& f : all)
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h) {
        std::vector<Scalar> lhs = M.apply(g, block(f, h));
        std::vector<Scalar> fg = block(f, g), fgh = block(f, M.G.mul(g, h));
        for (int i = 0; i < d; ++i) {
          Scalar v = F2.add(F2.sub(lhs[i], fgh[i]), fg[i]);
          CHECK(F2.is_zero(v));
        }
      }
}

TEST_CASE("trivial one-dimensional modules measure the characteristic") {
  for (std::int64_t p : {2, 3, 5}) {
    BaseRing k = BaseRing::prime_field(p);
    for (int n : {2, 3, 4}) {
      CAPTURE(p);
      CAPTURE(n);
      GModule M = trivial_module(ConstantGroup::cyclic(n), k, 1);
      int expect = n % p == 0 ? 1 : 0;  // Hom(Z/n, k)
      CHECK(h_one(M).dim() == expect);
      CHECK(cyclic_h1_dimension(M) == expect);
      CHECK(h_zero(M).dim() == 1);
    }
  }
  // Klein four over F_2: Hom((Z/2)^2, k) is two-dimensional; the cyclic
  // oracle refuses the group.
  BaseRing F2 = BaseRing::prime_field(2);
  GModule K = trivial_module(ConstantGroup::klein_four(), F2, 1);
  CHECK(h_one(K).dim() == 2);
  CHECK_THROWS_WITH_AS(cyclic_h1_dimension(K), "cohomology: group is not cyclic",
                       Error);
}

TEST_CASE("restriction and inflation degenerate correctly at the extremes") {
  BaseRing F2 = BaseRing::prime_field(2);
  Algebra A = Algebra::single(F2, {"t"}, {}, 8);
  GroupAction act = substitution_action(A, moebius_involution(A), 2);
  GModule M = theta_module(act);

  LinearMap res_all = restriction_h1(M, {0, 1});
  CHECK(res_all.is_identity());
  LinearMap res_none = restriction_h1(M, {0});
  CHECK(res_none.rows == 0);
  CHECK(res_none.cols == 2);
  CHECK(res_none.is_zero());

  LinearMap inf_none = inflation_h1(M, {0});
  CHECK(inf_none.is_identity());
  LinearMap inf_all = inflation_h1(M, {0, 1});
  CHECK(inf_all.cols == 0);
  CHECK(inf_all.rows == 2);
}

TEST_CASE("inflation lands in the kernel of restriction") {
  BaseRing F2 = BaseRing::prime_field(2);

  // Wild Z/4 over Z/2, the two truncations of interest.
  for (int N : {8, 10}) {
    CAPTURE(N);
    Algebra A = Algebra::single(F2, {"t"}, {}, static_cast<std::size_t>(N));
    GroupAction act = substitution_action(A, order_four(A), 4);
    GModule M = theta_module(act);
    LinearMap res = restriction_h1(M, {0, 2});
    LinearMap inf = inflation_h1(M, {0, 2});
    CHECK(res.rows == 4);
    CHECK(res.cols == (N == 8 ? 4 : 3));
    CHECK(inf.rows == (N == 8 ? 4 : 3));
    CHECK(inf.cols == (N == 8 ? 2 : 1));
    CHECK(compose(res, inf).is_zero());
  }

  // Klein four acting through one of its Z/2 quotients.
  {
    Algebra A = Algebra::single(F2, {"t"}, {}, 8);
    Element t = A.var("t");
    ElementHom id = endomorphism(A, {t});
    ElementHom sw = endomorphism(A, {moebius_involution(A)});
    GroupAction act = GroupAction::constant(ConstantGroup::klein_four(), A,
                                            {id, id, sw, sw});
    GModule M = theta_module(act);
    CHECK(h_one(M).dim() == 7);
    LinearMap res = restriction_h1(M, {0, 1});
    LinearMap inf = inflation_h1(M, {0, 1});
    CHECK(res.cols == 7);
    CHECK(res.rows == 8);  // the kernel subgroup acts trivially
    CHECK(inf.cols == 2);
    CHECK(compose(res, inf).is_zero());
  }

  // Tame Z/4 over F_5: every class space vanishes.
  {
    BaseRing F5 = BaseRing::prime_field(5);
    Algebra A = Algebra::single(F5, {"t"}, {}, 9);
    GModule M = theta_module(scaling_action(A, 2, 4));
    CHECK(h_one(M).dim() == 0);
    LinearMap res = restriction_h1(M, {0, 2});
    LinearMap inf = inflation_h1(M, {0, 2});
    CHECK(res.cols == 0);
    CHECK(inf.rows == 0);
    CHECK(compose(res, inf).is_zero());
  }
}

TEST_CASE("the induction differential composite on the stock wild chain") {
  BaseRing F2 = BaseRing::prime_field(2);
  struct Row {
    int N, dom, cod, rank, m0;
  };
  // Codomain classes live over k[y]/(y^M0) with M0 = ceil(N/2), so the
  // dimensions move with the parity of M0 rather than stabilizing.
  for (const Row& row : {Row{8, 2, 2, 0, 4}, Row{9, 1, 0, 0, 5},
                         Row{10, 1, 0, 0, 5}, Row{11, 0, 2, 0, 6}}) {
    CAPTURE(row.N);
    Algebra A = Algebra::single(F2, {"t"}, {}, static_cast<std::size_t>(row.N));
    GroupAction act = substitution_action(A, order_four(A), 4);
    CompositeReport cr = induction_differential_composite(act, {0, 2});
    CHECK(cr.domain_dim == row.dom);
    CHECK(cr.codomain_dim == row.cod);
    CHECK(cr.map.rank() == row.rank);
    CHECK(cr.invariant_rank == row.m0);
    GModule M = theta_module(act);
    FixedModule FM = fixed_submodule(M, {0, 2});
    CHECK(cr.domain_dim == h_one(FM.module).dim());
    CHECK(cr.domain_dim == cyclic_h1_dimension(FM.module));
  }
}

TEST_CASE("consecutive truncations certify the stable dimensions") {
  BaseRing F2 = BaseRing::prime_field(2);
  std::vector<std::pair<int, int>> dims;
  for (int N = 6; N <= 14; ++N) {
    Algebra A = Algebra::single(F2, {"t"}, {}, static_cast<std::size_t>(N));
    GroupAction act = substitution_action(A, order_four(A), 4);
    CompositeReport cr = induction_differential_composite(act, {0, 2});
    dims.emplace_back(cr.domain_dim, cr.codomain_dim);
  }
  // Every consecutive agreement detects the same stable value.
  int stable_hits = 0;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i)
    if (dims[i] == dims[i + 1]) {
      ++stable_hits;
      CHECK(dims[i] == std::pair<int, int>(1, 0));
    }
  CHECK(stable_hits == 2);  // N = 9,10 and N = 13,14
}

TEST_CASE("the composite degenerates correctly at the extremes") {
  BaseRing F2 = BaseRing::prime_field(2);
  BaseRing F7 = BaseRing::prime_field(7);

  // H = {e}: the invariant coordinate is t itself and the map is identity.
  {
    Algebra A = Algebra::single(F2, {"t"}, {}, 8);
    GroupAction act = substitution_action(A, moebius_involution(A), 2);
    CompositeReport cr = induction_differential_composite(act, {0});
    CHECK(cr.domain_dim == 2);
    CHECK(cr.codomain_dim == 2);
    CHECK(cr.invariant_rank == 8);
    CHECK(cr.map.is_identity());
  }

  // Tame G: both class spaces vanish and the map is the zero map on them.
  {
    Algebra A = Algebra::single(F7, {"t"}, {}, 8);
    GroupAction act = scaling_action(A, 3, 6);
    CompositeReport cr = induction_differential_composite(act, {0, 2, 4});
    CHECK(cr.domain_dim == 0);
    CHECK(cr.codomain_dim == 0);
    CHECK(cr.invariant_rank == 3);  // k[t^3]/(t^9 truncated to degree 8)
    CHECK(cr.map.is_zero());
  }
}

TEST_CASE("degenerate hypotheses are refused") {
  BaseRing F2 = BaseRing::prime_field(2);
  BaseRing F7 = BaseRing::prime_field(7);

  // A kernel inside H: Nm_H(t) is a proper power of the true coordinate.
  {
    Algebra A = Algebra::single(F2, {"t"}, {}, 6);
    GroupAction act = scaling_action(A, 1, 2);
    CHECK_THROWS_WITH_AS(induction_differential_composite(act, {0, 1}),
                         "cohomology: Theta_Y unavailable", Error);
  }

  // Non-normal subgroups are rejected before any computation.
  {
    Algebra A = Algebra::single(F7, {"t"}, {}, 5);
    ConstantGroup S3 = ConstantGroup::symmetric(3);
    std::vector<ElementHom> autos;
    for (int g = 0; g < 6; ++g) autos.push_back(endomorphism(A, {A.var("t")}));
    GroupAction act = GroupAction::constant(S3, A, autos);
    std::vector<int> H;
    for (int g = 0; g < 6; ++g)
      if (S3.mul(g, g) == S3.identity()) H.push_back(g);
    H.resize(2);  // identity plus one transposition
    CHECK_THROWS_WITH_AS(induction_differential_composite(act, H),
                         "cohomology: normal subgroup required", Error);
  }

  // Near the breakdown of an inexact order, the inclusion can escape the
  // powers of the norm; the failure is reported, never papered over.
  {
    Algebra A = Algebra::single(F2, {"t"}, {}, 14);
    Element t = A.var("t");
    GroupAction act = substitution_action(A, t.add(t.pow(2)), 4);
    CHECK_THROWS_WITH_AS(induction_differential_composite(act, {0, 2}),
                         "cohomology: element escaped the invariant coordinate",
                         Error);
  }
}
