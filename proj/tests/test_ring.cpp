#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "invlab/ring.hpp"

using namespace invlab;

TEST_CASE("integers stay exact past 64 bits") {
  auto Z = BaseRing::integers();
  Scalar p = Z.pow(Z.from_int(3), 50);
  mpz_class expect;
  mpz_ui_pow_ui(expect.get_mpz_t(), 3, 50);
  CHECK(Z.equal(p, Z.from_mpz(expect)));
  CHECK(Z.is_unit(Z.from_int(-1)));
  CHECK_FALSE(Z.is_unit(Z.from_int(2)));
  CHECK_THROWS_AS(Z.inv(Z.from_int(2)), Error);
}

TEST_CASE("rationals normalize and invert") {
  auto Q = BaseRing::rationals();
  Scalar a = Q.parse_atom("6/8");
  Scalar b = Q.parse_atom("3/4");
  CHECK(Q.equal(a, b));
  CHECK(Q.to_string(a) == "3/4");
  Scalar s = Q.add(a, Q.parse_atom("1/4"));
  CHECK(Q.equal(s, Q.one()));
  CHECK(Q.equal(Q.mul(a, Q.inv(a)), Q.one()));
  CHECK_THROWS_AS(Q.inv(Q.zero()), Error);
}

TEST_CASE("prime field units and Fermat") {
  auto F7 = BaseRing::prime_field(7);
  CHECK(F7.is_field());
  CHECK(F7.local_length() == 1);
  for (int a = 1; a < 7; ++a) {
    Scalar x = F7.from_int(a);
    CHECK(F7.equal(F7.mul(x, F7.inv(x)), F7.one()));
    CHECK(F7.equal(F7.pow(x, 6), F7.one()));
  }
  CHECK_THROWS_AS(BaseRing::prime_field(6), Error);
}

TEST_CASE("Z/8 exposes its 2-adic structure") {
  auto R = BaseRing::residue_ring(8);
  CHECK(R.is_local());
  CHECK_FALSE(R.is_field());
  CHECK(R.local_length() == 3);
  CHECK(R.residue_characteristic() == 2);
  CHECK(R.val(R.from_int(4)) == 2);
  CHECK(R.val(R.from_int(6)) == 1);
  CHECK(R.val(R.zero()) == 3);
  // 6 = 3 * 2^1
  CHECK(R.equal(R.unit_part(R.from_int(6)), R.from_int(3)));
  CHECK(R.is_zero(R.pi_pow(3)));
  // ascending digit split: a = q*pi^v + r with r's digits below v
  for (int a = 0; a < 8; ++a)
    for (int v = 0; v <= 3; ++v) {
      auto [q, r] = R.split(R.from_int(a), v);
      CHECK(R.equal(R.add(R.mul(q, R.pi_pow(v)), r), R.from_int(a)));
      CHECK((R.is_zero(r) || R.val(r) < v));
      // r is fully reduced: it equals a mod 2^v as the least residue
      CHECK(R.equal(r, R.from_int(a % (1 << v))));
    }
  CHECK(R.equal(R.mul(R.from_int(3), R.inv(R.from_int(3))), R.one()));
  CHECK_THROWS_AS(R.inv(R.from_int(2)), Error);
  auto F2 = R.residue_field();
  CHECK(F2.modulus() == 2);
  CHECK(F2.equal(R.to_residue(R.from_int(6)), F2.zero()));
  CHECK(F2.equal(R.to_residue(R.from_int(3)), F2.one()));
}

TEST_CASE("Z/6 is not local but has units") {
  auto R = BaseRing::residue_ring(6);
  CHECK_FALSE(R.is_local());
  CHECK(R.is_unit(R.from_int(5)));
  CHECK(R.equal(R.inv(R.from_int(5)), R.from_int(5)));
  CHECK_FALSE(R.is_unit(R.from_int(2)));
  CHECK_THROWS_AS(R.val(R.from_int(2)), Error);
}

TEST_CASE("nilpotent extension F5[e]/(e^3)") {
  auto F5 = BaseRing::prime_field(5);
  auto R = BaseRing::nilpotent_extension(F5, 3);
  Scalar e = R.ext_generator();
  CHECK(R.is_local());
  CHECK(R.local_length() == 3);
  CHECK(R.is_zero(R.pow(e, 3)));
  Scalar a = R.mul(R.from_int(2), R.pow(e, 2));
  CHECK(R.val(a) == 2);
  CHECK(R.equal(R.unit_part(a), R.from_int(2)));
  // (1+e)(1 - e + e^2) = 1 + e^3 = 1
  Scalar u = R.add(R.one(), e);
  Scalar v = R.add(R.sub(R.one(), e), R.pow(e, 2));
  CHECK(R.equal(R.mul(u, v), R.one()));
  CHECK(R.equal(R.inv(u), v));
  CHECK_THROWS_AS(R.inv(e), Error);
  // split against random elements: digits of the remainder sit below v
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Scalar x = R.random(rng);
    for (int v2 = 0; v2 <= 3; ++v2) {
      auto [q, r] = R.split(x, v2);
      CHECK(R.equal(R.add(R.mul(q, R.pi_pow(v2)), r), x));
      CHECK((R.is_zero(r) || R.val(r) < v2));
    }
  }
}

TEST_CASE("field extension F4 = F2[z]/(z^2+z+1)") {
  auto F2 = BaseRing::prime_field(2);
  auto F4 = BaseRing::field_extension(F2, {F2.one(), F2.one()});
  CHECK(F4.is_field());
  CHECK(F4.characteristic() == 2);
  Scalar z = F4.ext_generator();
  // z^2 = z + 1, z^3 = 1
  CHECK(F4.equal(F4.mul(z, z), F4.add(z, F4.one())));
  CHECK(F4.equal(F4.pow(z, 3), F4.one()));
  CHECK(F4.equal(F4.inv(z), F4.add(z, F4.one())));
  // reducible modulus is rejected: z^2+1 = (z+1)^2 over F2
  CHECK_THROWS_AS(BaseRing::field_extension(F2, {F2.one(), F2.zero()}), Error);
}

TEST_CASE("dual numbers over Q") {
  auto Q = BaseRing::rationals();
  auto R = BaseRing::nilpotent_extension(Q, 2, "eps");
  Scalar eps = R.ext_generator();
  CHECK(R.is_zero(R.mul(eps, eps)));
  // (2+eps)^-1 = 1/2 - eps/4
  Scalar x = R.add(R.from_int(2), eps);
  Scalar inv = R.inv(x);
  CHECK(R.equal(R.mul(x, inv), R.one()));
  Scalar expect =
      R.add(R.parse_atom("1/2"), R.mul(R.parse_atom("-1/4"), eps));
  CHECK(R.equal(inv, expect));
}

TEST_CASE("residue field of Z/9 lifts back") {
  auto R = BaseRing::residue_ring(9);
  CHECK(R.local_length() == 2);
  CHECK(R.characteristic() == 9);
  CHECK(R.residue_characteristic() == 3);
  auto F3 = R.residue_field();
  for (int a = 0; a < 3; ++a) {
    Scalar lifted = R.lift_residue(F3.from_int(a));
    CHECK(F3.equal(R.to_residue(lifted), F3.from_int(a)));
  }
}

TEST_CASE("error carries a machine-checkable code") {
  auto Z = BaseRing::integers();
  try {
    Z.inv(Z.from_int(2));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == "not a unit");
  }
}
