#include "invlab/ring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace invlab {

namespace {

std::int64_t mod_norm(std::int64_t a, std::int64_t n) {
  std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t n) {
  return static_cast<std::int64_t>(
      static_cast<__int128>(a) * static_cast<__int128>(b) % n);
}

// Extended Euclid: returns g = gcd(a, n) and x with a*x = g (mod n).
std::int64_t egcd_inv(std::int64_t a, std::int64_t n, std::int64_t* g_out) {
  std::int64_t r0 = n, r1 = mod_norm(a, n), x0 = 0, x1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t r2 = r0 - q * r1;
    std::int64_t x2 = x0 - q * x1;
    r0 = r1; r1 = r2; x0 = x1; x1 = x2;
  }
  *g_out = r0;
  return mod_norm(x0, n);
}

bool is_prime_i64(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

struct BaseRingData {
  RingKind kind = RingKind::Integers;
  std::int64_t n = 0;      // PrimeField p or ResidueRing n
  std::int64_t res_p = 0;  // ResidueRing: p if n = p^k, else 0
  int res_k = 0;
  BaseRing base;           // Extension: the coefficient field
  int deg = 0;             // Extension degree m
  bool nilpotent = false;  // modulus z^m
  std::vector<Scalar> red;  // z^deg = red[0] + red[1] z + ... (length deg)
  std::string gen = "e";
};

const BaseRingData& BaseRing::data() const {
  if (!d_) throw Error("ring", "uninitialized base ring");
  return *d_;
}

BaseRing BaseRing::integers() {
  auto d = std::make_shared<BaseRingData>();
  d->kind = RingKind::Integers;
  return BaseRing(std::move(d));
}

BaseRing BaseRing::rationals() {
  auto d = std::make_shared<BaseRingData>();
  d->kind = RingKind::Rationals;
  return BaseRing(std::move(d));
}

BaseRing BaseRing::prime_field(std::int64_t p) {
  if (!is_prime_i64(p))
    throw Error("ring", "prime field modulus " + std::to_string(p) +
                            " is not prime");
  auto d = std::make_shared<BaseRingData>();
  d->kind = RingKind::PrimeField;
  d->n = p;
  return BaseRing(std::move(d));
}

BaseRing BaseRing::residue_ring(std::int64_t n) {
  if (n < 2) throw Error("ring", "residue ring modulus must be >= 2");
  auto d = std::make_shared<BaseRingData>();
  d->kind = RingKind::ResidueRing;
  d->n = n;
  std::int64_t m = n, p = 0;
  for (std::int64_t q = 2; q * q <= m; ++q)
    if (m % q == 0) { p = q; break; }
  if (p == 0) p = m;
  int k = 0;
  while (m % p == 0) { m /= p; ++k; }
  if (m == 1) { d->res_p = p; d->res_k = k; }
  return BaseRing(std::move(d));
}

namespace {

// Polynomial helpers over a coefficient field, used by the extension rings.
using Poly = std::vector<Scalar>;

void poly_trim(const BaseRing& k, Poly& p) {
  while (!p.empty() && k.is_zero(p.back())) p.pop_back();
}

Poly poly_mul(const BaseRing& k, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, k.zero());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] = k.add(c[i + j], k.mul(a[i], b[j]));
  poly_trim(k, c);
  return c;
}

Poly poly_sub(const BaseRing& k, const Poly& a, const Poly& b) {
  Poly c(std::max(a.size(), b.size()), k.zero());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = k.sub(c[i], b[i]);
  poly_trim(k, c);
  return c;
}

// a = q*b + r over the field k; b nonzero.
void poly_divmod(const BaseRing& k, Poly a, const Poly& b, Poly* q, Poly* r) {
  Poly quot;
  Scalar lead_inv = k.inv(b.back());
  while (a.size() >= b.size() && !a.empty()) {
    std::size_t shift = a.size() - b.size();
    Scalar c = k.mul(a.back(), lead_inv);
    if (quot.size() < shift + 1) quot.resize(shift + 1, k.zero());
    quot[shift] = k.add(quot[shift], c);
    for (std::size_t i = 0; i < b.size(); ++i)
      a[shift + i] = k.sub(a[shift + i], k.mul(c, b[i]));
    poly_trim(k, a);
  }
  poly_trim(k, quot);
  *q = std::move(quot);
  *r = std::move(a);
}

// Inverse of a modulo the monic polynomial f over the field k, if coprime.
bool poly_inv_mod(const BaseRing& k, const Poly& a, const Poly& f, Poly* out) {
  Poly r0 = f, r1 = a, s0 = {}, s1 = {k.one()};
  poly_trim(k, r1);
  while (!r1.empty()) {
    Poly q, r2;
    poly_divmod(k, r0, r1, &q, &r2);
    Poly s2 = poly_sub(k, s0, poly_mul(k, q, s1));
    r0 = std::move(r1); r1 = std::move(r2);
    s0 = std::move(s1); s1 = std::move(s2);
  }
  if (r0.size() != 1) return false;  // gcd has positive degree
  Scalar c = k.inv(r0[0]);
  for (auto& s : s0) s = k.mul(s, c);
  poly_trim(k, s0);
  *out = std::move(s0);
  return true;
}

// Full modulus polynomial of an extension (monic, degree deg).
Poly ext_modulus(const BaseRing& k, const BaseRingData& d) {
  Poly f(d.deg + 1, k.zero());
  f[d.deg] = k.one();
  for (int i = 0; i < d.deg; ++i) f[i] = k.neg(d.red[i]);
  return f;
}


// Brute-force irreducibility over a prime field: no monic divisor of degree
// 1..deg/2. Only tiny p and deg occur here.
bool irreducible_over_prime_field(const BaseRing& k, const Poly& f) {
  std::int64_t p = k.modulus();
  int deg = static_cast<int>(f.size()) - 1;
  for (int d = 1; 2 * d <= deg; ++d) {
    std::vector<std::int64_t> c(d, 0);
    for (;;) {
      Poly g(d + 1, k.zero());
      g[d] = k.one();
      for (int i = 0; i < d; ++i) g[i] = k.from_int(c[i]);
      Poly q, r;
      poly_divmod(k, f, g, &q, &r);
      if (r.empty()) return false;
      int i = 0;
      while (i < d && ++c[i] == p) c[i++] = 0;
      if (i == d) break;
    }
  }
  return true;
}

}  // namespace

BaseRing BaseRing::nilpotent_extension(const BaseRing& base, int order,
                                       const std::string& gen) {
  if (!base.is_field())
    throw Error("ring", "extension base must be a field");
  if (base.kind() == RingKind::Extension)
    throw Error("ring", "towers of extensions are not supported");
  if (order < 2) throw Error("ring", "nilpotency order must be >= 2");
  auto d = std::make_shared<BaseRingData>();
  d->kind = RingKind::Extension;
  d->base = base;
  d->deg = order;
  d->nilpotent = true;
  d->red.assign(order, base.zero());
  d->gen = gen;
  return BaseRing(std::move(d));
}

BaseRing BaseRing::field_extension(const BaseRing& base,
                                   std::vector<Scalar> modulus_low,
                                   const std::string& gen) {
  if (base.kind() != RingKind::PrimeField)
    throw Error("ring", "field extensions are supported over prime fields");
  int deg = static_cast<int>(modulus_low.size());
  if (deg < 2) throw Error("ring", "extension degree must be >= 2");
  Poly f(deg + 1, base.zero());
  f[deg] = base.one();
  for (int i = 0; i < deg; ++i) f[i] = modulus_low[i];
  if (!irreducible_over_prime_field(base, f))
    throw Error("ring", "extension modulus is reducible");
  auto d = std::make_shared<BaseRingData>();
  d->kind = RingKind::Extension;
  d->base = base;
  d->deg = deg;
  d->nilpotent = false;
  d->red.reserve(deg);
  for (int i = 0; i < deg; ++i) d->red.push_back(base.neg(modulus_low[i]));
  d->gen = gen;
  return BaseRing(std::move(d));
}

RingKind BaseRing::kind() const { return data().kind; }
std::int64_t BaseRing::modulus() const { return data().n; }

bool BaseRing::same(const BaseRing& o) const {
  if (d_ == o.d_) return true;
  if (!d_ || !o.d_) return false;
  const auto& a = *d_;
  const auto& b = *o.d_;
  if (a.kind != b.kind || a.n != b.n) return false;
  if (a.kind == RingKind::Extension) {
    if (a.deg != b.deg || a.nilpotent != b.nilpotent || !a.base.same(b.base))
      return false;
    for (int i = 0; i < a.deg; ++i)
      if (!a.base.equal(a.red[i], b.red[i])) return false;
  }
  return true;
}

std::string BaseRing::describe() const {
  const auto& d = data();
  switch (d.kind) {
    case RingKind::Integers: return "Z";
    case RingKind::Rationals: return "Q";
    case RingKind::PrimeField: return "F_" + std::to_string(d.n);
    case RingKind::ResidueRing: return "Z/" + std::to_string(d.n);
    case RingKind::Extension: {
      std::string inner = d.nilpotent
          ? d.gen + "^" + std::to_string(d.deg)
          : "minpoly deg " + std::to_string(d.deg);
      return d.base.describe() + "[" + d.gen + "]/(" + inner + ")";
    }
  }
  return "?";
}

bool BaseRing::is_field() const {
  const auto& d = data();
  switch (d.kind) {
    case RingKind::Rationals: return true;
    case RingKind::PrimeField: return true;
    case RingKind::Extension: return !d.nilpotent;
    default: return false;
  }
}

bool BaseRing::is_local() const {
  const auto& d = data();
  if (is_field()) return true;
  if (d.kind == RingKind::ResidueRing) return d.res_p != 0;
  if (d.kind == RingKind::Extension) return true;  // nilpotent over a field
  return false;
}

int BaseRing::local_length() const {
  const auto& d = data();
  if (is_field()) return 1;
  if (d.kind == RingKind::ResidueRing && d.res_p != 0) return d.res_k;
  if (d.kind == RingKind::Extension && d.nilpotent) return d.deg;
  throw Error("ring", describe() + " is not local artinian");
}

std::int64_t BaseRing::characteristic() const {
  const auto& d = data();
  switch (d.kind) {
    case RingKind::Integers:
    case RingKind::Rationals: return 0;
    case RingKind::PrimeField:
    case RingKind::ResidueRing: return d.n;
    case RingKind::Extension: return d.base.characteristic();
  }
  return 0;
}

std::int64_t BaseRing::residue_characteristic() const {
  const auto& d = data();
  switch (d.kind) {
    case RingKind::PrimeField: return d.n;
    case RingKind::ResidueRing:
      if (d.res_p != 0) return d.res_p;
      throw Error("ring", describe() + " is not local");
    case RingKind::Extension: return d.base.characteristic();
    default: return 0;
  }
}

BaseRing BaseRing::residue_field() const {
  const auto& d = data();
  if (is_field()) return *this;
  if (d.kind == RingKind::ResidueRing && d.res_p != 0)
    return prime_field(d.res_p);
  if (d.kind == RingKind::Extension && d.nilpotent) return d.base;
  throw Error("ring", describe() + " has no residue field here");
}

Scalar BaseRing::to_residue(const Scalar& a) const {
  const auto& d = data();
  if (is_field()) return a;
  if (d.kind == RingKind::ResidueRing && d.res_p != 0)
    return Scalar(mod_norm(a.i(), d.res_p));
  if (d.kind == RingKind::Extension && d.nilpotent)
    return a.ext().empty() ? d.base.zero() : a.ext()[0];
  throw Error("ring", describe() + " has no residue field here");
}

Scalar BaseRing::lift_residue(const Scalar& a) const {
  const auto& d = data();
  if (is_field()) return a;
  if (d.kind == RingKind::ResidueRing && d.res_p != 0) return a;
  if (d.kind == RingKind::Extension && d.nilpotent) {
    if (d.base.is_zero(a)) return zero();
    return Scalar(Scalar::Ext{a});
  }
  throw Error("ring", describe() + " has no residue field here");
}

const BaseRing& BaseRing::ext_base() const { return data().base; }
int BaseRing::ext_degree() const { return data().deg; }
const std::string& BaseRing::ext_gen() const { return data().gen; }
bool BaseRing::ext_nilpotent() const { return data().nilpotent; }

Scalar BaseRing::ext_generator() const {
  const auto& d = data();
  if (d.kind != RingKind::Extension)
    throw Error("ring", describe() + " has no extension generator");
  return Scalar(Scalar::Ext{d.base.zero(), d.base.one()});
}

Scalar BaseRing::zero() const {
  const auto& d = data();
  switch (d.kind) {
    case RingKind::Integers: return Scalar(mpz_class(0));
    case RingKind::Rationals: return Scalar(mpq_class(0));
    case RingKind::PrimeField:
    case RingKind::ResidueRing: return Scalar(std::int64_t{0});
    case RingKind::Extension: return Scalar(Scalar::Ext{});
  }
  return Scalar();
}

Scalar BaseRing::one() const { return from_int(1); }

Scalar BaseRing::from_int(std::int64_t n) const {
  const auto& d = data();
  switch (d.kind) {
    case RingKind::Integers: return Scalar(mpz_class(static_cast<long>(n)));
    case RingKind::Rationals: return Scalar(mpq_class(static_cast<long>(n)));
    case RingKind::PrimeField:
    case RingKind::ResidueRing: return Scalar(mod_norm(n, d.n));
    case RingKind::Extension: {
      Scalar c = d.base.from_int(n);
      if (d.base.is_zero(c)) return zero();
      return Scalar(Scalar::Ext{c});
    }
  }
  return Scalar();
}

Scalar BaseRing::from_mpz(const mpz_class& n) const {
  const auto& d = data();
  switch (d.kind) {
    case RingKind::Integers: return Scalar(n);
    case RingKind::Rationals: return Scalar(mpq_class(n));
    case RingKind::PrimeField:
    case RingKind::ResidueRing: {
      mpz_class r = n % d.n;
      if (r < 0) r += d.n;
      return Scalar(static_cast<std::int64_t>(r.get_si()));
    }
    case RingKind::Extension: {
      Scalar c = d.base.from_mpz(n);
      if (d.base.is_zero(c)) return zero();
      return Scalar(Scalar::Ext{c});
    }
  }
  return Scalar();
}

namespace {
void check_ext(const Scalar& a) {
  if (!std::holds_alternative<Scalar::Ext>(a.v))
    throw Error("ring", "scalar does not belong to this extension ring");
}
}  // namespace

Scalar BaseRing::add(const Scalar& a, const Scalar& b) const {
  const auto& d = data();
  switch (d.kind) {
    case RingKind::Integers: return Scalar(mpz_class(a.z() + b.z()));
    case RingKind::Rationals: return Scalar(mpq_class(a.q() + b.q()));
    case RingKind::PrimeField:
    case RingKind::ResidueRing: return Scalar(mod_norm(a.i() + b.i(), d.n));
    case RingKind::Extension: {
      check_ext(a); check_ext(b);
      Scalar::Ext c(std::max(a.ext().size(), b.ext().size()), d.base.zero());
      for (std::size_t i = 0; i < a.ext().size(); ++i) c[i] = a.ext()[i];
      for (std::size_t i = 0; i < b.ext().size(); ++i)
        c[i] = d.base.add(c[i], b.ext()[i]);
      poly_trim(d.base, c);
      return Scalar(std::move(c));
    }
  }
  return Scalar();
}

Scalar BaseRing::sub(const Scalar& a, const Scalar& b) const {
  return add(a, neg(b));
}

Scalar BaseRing::neg(const Scalar& a) const {
  const auto& d = data();
  switch (d.kind) {
    case RingKind::Integers: return Scalar(mpz_class(-a.z()));
    case RingKind::Rationals: return Scalar(mpq_class(-a.q()));
    case RingKind::PrimeField:
    case RingKind::ResidueRing: return Scalar(mod_norm(-a.i(), d.n));
    case RingKind::Extension: {
      check_ext(a);
      Scalar::Ext c = a.ext();
      for (auto& x : c) x = d.base.neg(x);
      return Scalar(std::move(c));
    }
  }
  return Scalar();
}

Scalar BaseRing::mul(const Scalar& a, const Scalar& b) const {
  const auto& d = data();
  switch (d.kind) {
    case RingKind::Integers: return Scalar(mpz_class(a.z() * b.z()));
    case RingKind::Rationals: return Scalar(mpq_class(a.q() * b.q()));
    case RingKind::PrimeField:
    case RingKind::ResidueRing: return Scalar(mul_mod(a.i(), b.i(), d.n));
    case RingKind::Extension: {
      check_ext(a); check_ext(b);
      Scalar::Ext c = poly_mul(d.base, a.ext(), b.ext());
      // fold degrees >= deg down through z^deg = red
      for (int i = static_cast<int>(c.size()) - 1; i >= d.deg; --i) {
        Scalar top = c[i];
        c[i] = d.base.zero();
        if (d.base.is_zero(top)) continue;
        if (!d.nilpotent)
          for (int j = 0; j < d.deg; ++j)
            c[i - d.deg + j] =
                d.base.add(c[i - d.deg + j], d.base.mul(top, d.red[j]));
      }
      poly_trim(d.base, c);
      return Scalar(std::move(c));
    }
  }
  return Scalar();
}

Scalar BaseRing::pow(const Scalar& a, std::int64_t e) const {
  if (e < 0) return pow(inv(a), -e);
  Scalar r = one(), b = a;
  while (e > 0) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

bool BaseRing::is_zero(const Scalar& a) const {
  const auto& d = data();
  switch (d.kind) {
    case RingKind::Integers: return a.z() == 0;
    case RingKind::Rationals: return a.q() == 0;
    case RingKind::PrimeField:
    case RingKind::ResidueRing: return a.i() == 0;
    case RingKind::Extension: { check_ext(a); return a.ext().empty(); }
  }
  return false;
}

bool BaseRing::equal(const Scalar& a, const Scalar& b) const {
  return is_zero(sub(a, b));
}

bool BaseRing::is_unit(const Scalar& a) const {
  const auto& d = data();
  switch (d.kind) {
    case RingKind::Integers: return a.z() == 1 || a.z() == -1;
    case RingKind::Rationals: return a.q() != 0;
    case RingKind::PrimeField: return a.i() != 0;
    case RingKind::ResidueRing: {
      std::int64_t g;
      egcd_inv(a.i(), d.n, &g);
      return g == 1;
    }
    case RingKind::Extension:
      check_ext(a);
      if (a.ext().empty()) return false;
      if (d.nilpotent) return !d.base.is_zero(a.ext()[0]);
      return true;
  }
  return false;
}

Scalar BaseRing::inv(const Scalar& a) const {
  const auto& d = data();
  switch (d.kind) {
    case RingKind::Integers:
      if (a.z() == 1 || a.z() == -1) return a;
      throw Error("not a unit", to_string(a) + " in " + describe());
    case RingKind::Rationals:
      if (a.q() == 0) throw Error("not a unit", "0 in Q");
      return Scalar(mpq_class(1 / a.q()));
    case RingKind::PrimeField:
    case RingKind::ResidueRing: {
      std::int64_t g;
      std::int64_t x = egcd_inv(a.i(), d.n, &g);
      if (g != 1)
        throw Error("not a unit", to_string(a) + " in " + describe());
      return Scalar(x);
    }
    case RingKind::Extension: {
      check_ext(a);
      Poly out;
      if (!poly_inv_mod(d.base, a.ext(), ext_modulus(d.base, d), &out))
        throw Error("not a unit", to_string(a) + " in " + describe());
      return Scalar(std::move(out));
    }
  }
  throw Error("not a unit", "unreachable");
}

int BaseRing::val(const Scalar& a) const {
  const auto& d = data();
  if (is_field()) return is_zero(a) ? 1 : 0;
  if (d.kind == RingKind::ResidueRing && d.res_p != 0) {
    if (a.i() == 0) return d.res_k;
    int v = 0;
    std::int64_t x = a.i();
    while (x % d.res_p == 0) { x /= d.res_p; ++v; }
    return v;
  }
  if (d.kind == RingKind::Extension && d.nilpotent) {
    check_ext(a);
    for (std::size_t i = 0; i < a.ext().size(); ++i)
      if (!d.base.is_zero(a.ext()[i])) return static_cast<int>(i);
    return d.deg;
  }
  throw Error("ring", "valuation needs a local artinian base, got " +
                          describe());
}

Scalar BaseRing::unit_part(const Scalar& a) const {
  const auto& d = data();
  if (is_field()) return a;
  int v = val(a);
  if (v >= local_length())
    throw Error("ring", "unit part of zero");
  if (d.kind == RingKind::ResidueRing) {
    std::int64_t x = a.i();
    for (int i = 0; i < v; ++i) x /= d.res_p;
    return Scalar(x);
  }
  check_ext(a);
  Scalar::Ext c(a.ext().begin() + v, a.ext().end());
  return Scalar(std::move(c));
}

Scalar BaseRing::pi_pow(int j) const {
  const auto& d = data();
  if (is_field()) return j == 0 ? one() : zero();
  if (j >= local_length()) return zero();
  if (d.kind == RingKind::ResidueRing) {
    std::int64_t x = 1;
    for (int i = 0; i < j; ++i) x *= d.res_p;
    return Scalar(mod_norm(x, d.n));
  }
  Scalar::Ext c(j + 1, d.base.zero());
  c[j] = d.base.one();
  return Scalar(std::move(c));
}

std::pair<Scalar, Scalar> BaseRing::split(const Scalar& a, int v) const {
  const auto& d = data();
  if (v <= 0) return {a, zero()};
  if (is_field()) return {zero(), a};
  if (v >= local_length()) return {zero(), a};
  if (d.kind == RingKind::ResidueRing) {
    std::int64_t pv = 1;
    for (int i = 0; i < v; ++i) pv *= d.res_p;
    return {Scalar(a.i() / pv), Scalar(a.i() % pv)};
  }
  check_ext(a);
  Scalar::Ext lo, hi;
  for (std::size_t i = 0; i < a.ext().size(); ++i)
    (static_cast<int>(i) < v ? lo : hi).push_back(a.ext()[i]);
  // hi currently holds coefficients of z^v.. shifted into place
  Scalar::Ext q(a.ext().size() > static_cast<std::size_t>(v)
                    ? a.ext().size() - v : 0,
                d.base.zero());
  for (std::size_t i = v; i < a.ext().size(); ++i) q[i - v] = a.ext()[i];
  poly_trim(d.base, q);
  poly_trim(d.base, lo);
  return {Scalar(std::move(q)), Scalar(std::move(lo))};
}

std::string BaseRing::to_string(const Scalar& a) const {
  const auto& d = data();
  switch (d.kind) {
    case RingKind::Integers: return a.z().get_str();
    case RingKind::Rationals: {
      if (a.q().get_den() == 1) return a.q().get_num().get_str();
      return a.q().get_num().get_str() + "/" + a.q().get_den().get_str();
    }
    case RingKind::PrimeField:
    case RingKind::ResidueRing: return std::to_string(a.i());
    case RingKind::Extension: {
      check_ext(a);
      if (a.ext().empty()) return "0";
      std::string s;
      for (std::size_t i = 0; i < a.ext().size(); ++i) {
        if (d.base.is_zero(a.ext()[i])) continue;
        if (!s.empty()) s += "+";
        std::string c = d.base.to_string(a.ext()[i]);
        if (i == 0) { s += c; continue; }
        if (c != "1") s += c + "*";
        s += d.gen;
        if (i > 1) s += "^" + std::to_string(i);
      }
      return s.empty() ? "0" : s;
    }
  }
  return "?";
}

Scalar BaseRing::parse_atom(const std::string& text) const {
  const auto& d = data();
  if (d.kind == RingKind::Extension && text == d.gen) return ext_generator();
  bool numeric = !text.empty();
  std::size_t slash = std::string::npos;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '/' && slash == std::string::npos && i > 0) { slash = i; continue; }
    if (c == '-' && i == 0) continue;
    if (!std::isdigit(static_cast<unsigned char>(c))) { numeric = false; break; }
  }
  if (!numeric) throw Error("parse", "bad scalar literal '" + text + "'");
  if (slash != std::string::npos) {
    if (d.kind == RingKind::Rationals) {
      mpq_class q(text);
      q.canonicalize();
      return Scalar(std::move(q));
    }
    // elsewhere a fraction means numerator times a unit denominator's inverse
    Scalar num = from_mpz(mpz_class(text.substr(0, slash)));
    Scalar den = from_mpz(mpz_class(text.substr(slash + 1)));
    return mul(num, inv(den));
  }
  return from_mpz(mpz_class(text));
}

Scalar BaseRing::random(std::mt19937_64& rng) const {
  const auto& d = data();
  switch (d.kind) {
    case RingKind::Integers:
      return Scalar(mpz_class(static_cast<long>(rng() % 19) - 9));
    case RingKind::Rationals: {
      long num = static_cast<long>(rng() % 19) - 9;
      long den = static_cast<long>(rng() % 9) + 1;
      mpq_class q(num, den);
      q.canonicalize();
      return Scalar(std::move(q));
    }
    case RingKind::PrimeField:
    case RingKind::ResidueRing:
      return Scalar(static_cast<std::int64_t>(rng() % d.n));
    case RingKind::Extension: {
      Scalar::Ext c;
      for (int i = 0; i < d.deg; ++i) c.push_back(d.base.random(rng));
      poly_trim(d.base, c);
      return Scalar(std::move(c));
    }
  }
  return Scalar();
}

}  // namespace invlab
