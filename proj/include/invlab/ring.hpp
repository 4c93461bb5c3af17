#pragma once
// Exact scalar arithmetic over the base rings the library supports:
// Z, Q, F_p, Z/n, and univariate extensions k[z]/(f) of a prime field or Q,
// with f = z^m (nilpotent generator, artinian local) or an irreducible monic
// polynomial (field extension). All operations are exact, equality is
// decidable, and the local rings expose the valuation structure the linear
// algebra layer needs (pivoting by pi-adic valuation, digit splitting).

#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace invlab {

// Structured error: `code` is a stable machine-checkable identifier, the
// what() string carries context.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

class Scalar {
public:
  using Ext = std::vector<Scalar>;  // c0 + c1*z + ..., trailing zeros trimmed

  Scalar() : v(std::int64_t{0}) {}
  explicit Scalar(std::int64_t n) : v(n) {}
  explicit Scalar(mpz_class z) : v(std::move(z)) {}
  explicit Scalar(mpq_class q) : v(std::move(q)) {}
  explicit Scalar(Ext e) : v(std::move(e)) {}

  std::int64_t i() const { return std::get<std::int64_t>(v); }
  const mpz_class& z() const { return std::get<mpz_class>(v); }
  const mpq_class& q() const { return std::get<mpq_class>(v); }
  const Ext& ext() const { return std::get<Ext>(v); }
  bool holds_int() const { return std::holds_alternative<std::int64_t>(v); }

  std::variant<std::int64_t, mpz_class, mpq_class, Ext> v;
};

enum class RingKind { Integers, Rationals, PrimeField, ResidueRing, Extension };

struct BaseRingData;

// Value-semantics handle on an immutable ring description. Structural
// equality via same().
class BaseRing {
public:
  BaseRing() = default;

  static BaseRing integers();
  static BaseRing rationals();
  static BaseRing prime_field(std::int64_t p);
  static BaseRing residue_ring(std::int64_t n);
  // k[z]/(z^order) over a field subring; generator named `gen`.
  static BaseRing nilpotent_extension(const BaseRing& base, int order,
                                      const std::string& gen = "e");
  // k[z]/(z^deg + c_{deg-1} z^{deg-1} + ... + c0), modulus given by its lower
  // coefficients c0..c_{deg-1} over `base`; must be irreducible over base.
  static BaseRing field_extension(const BaseRing& base,
                                  std::vector<Scalar> modulus_low,
                                  const std::string& gen = "z");

  RingKind kind() const;
  std::int64_t modulus() const;  // PrimeField / ResidueRing
  bool valid() const { return d_ != nullptr; }
  bool same(const BaseRing& o) const;
  std::string describe() const;

  bool is_field() const;
  // Local artinian principal ideal ring: field, Z/p^k, or k[e]/(e^m).
  // These are the bases the kernel/Howell machinery supports.
  bool is_local() const;
  int local_length() const;            // smallest m with pi^m = 0 (1 = field)
  std::int64_t characteristic() const;
  std::int64_t residue_characteristic() const;  // char of residue field
  BaseRing residue_field() const;
  Scalar to_residue(const Scalar& a) const;
  Scalar lift_residue(const Scalar& a) const;

  // Extension accessors
  const BaseRing& ext_base() const;
  int ext_degree() const;
  const std::string& ext_gen() const;
  bool ext_nilpotent() const;
  Scalar ext_generator() const;

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(std::int64_t n) const;
  Scalar from_mpz(const mpz_class& n) const;

  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  Scalar pow(const Scalar& a, std::int64_t e) const;
  bool is_zero(const Scalar& a) const;
  bool equal(const Scalar& a, const Scalar& b) const;
  bool is_unit(const Scalar& a) const;
  Scalar inv(const Scalar& a) const;  // throws Error("not a unit") otherwise

  // pi-adic structure of local rings. val(0) = local_length().
  int val(const Scalar& a) const;
  Scalar unit_part(const Scalar& a) const;  // a = unit_part * pi^val, a != 0
  Scalar pi_pow(int j) const;
  // a = q * pi^v + r with every pi-digit of r below v; (q, r) canonical.
  std::pair<Scalar, Scalar> split(const Scalar& a, int v) const;

  std::string to_string(const Scalar& a) const;
  // Parses an integer literal, "a/b" over Q, or the extension generator name.
  Scalar parse_atom(const std::string& text) const;

  Scalar random(std::mt19937_64& rng) const;

private:
  std::shared_ptr<const BaseRingData> d_;
  explicit BaseRing(std::shared_ptr<const BaseRingData> d) : d_(std::move(d)) {}
  const BaseRingData& data() const;
};

}  // namespace invlab
