#pragma once
// Polarized elementary symmetric functions and their triangular inversion:
// s_{a_1..a_q}(x^(1)..x^(q)) sums one term per choice of pairwise disjoint
// increasing index sequences, and every such polarization is an integer
// polynomial in the plain elementary symmetric functions of monomial
// arguments s_j((x^(1))^{r_1} ... (x^(q))^{r_q}).  The inversion works by
// induction on |a|: expand the naive product, subtract the strictly lower
// polarizations it picked up, recurse.

#include <gmpxx.h>

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "invlab/ring.hpp"

namespace invlab {

// Integer polynomial in q families of n variables; exponent keys are
// family-major (slot f*n + i holds the exponent of x^(f)_i).
struct FormalPoly {
  int n = 0, q = 0;
  std::map<std::vector<int>, mpz_class> terms;

  static FormalPoly zero(int n, int q);
  static FormalPoly constant(int n, int q, long c);
  static FormalPoly variable(int n, int q, int family, int index);

  bool is_zero() const { return terms.empty(); }
  bool equal(const FormalPoly& o) const;
  FormalPoly add(const FormalPoly& o) const;
  FormalPoly sub(const FormalPoly& o) const;
  FormalPoly mul(const FormalPoly& o) const;
  // values has length q*n, family-major.
  mpz_class eval(const std::vector<mpz_class>& values) const;
  std::string str() const;
};

// j-th elementary symmetric function of the argument list (j = 0 gives 1).
FormalPoly elementary(int j, int n, int q, const std::vector<FormalPoly>& args);

// Per-index monomial pattern: entry r[l] is the exponent of x^(l)_i.
using Pattern = std::vector<int>;

// Sum over pairwise disjoint increasing index sequences, the t-th sequence
// of length counts[t] contributing patterns[t] at each chosen index.
FormalPoly polarization_general(const std::vector<int>& counts,
                                const std::vector<Pattern>& patterns, int n,
                                int q);

// The partial polarization itself: slot l carries the plain variables of
// family l.  Throws Error("symfunc", ...) when the weight exceeds n.
FormalPoly partial_polarization(const std::vector<int>& alpha, int n, int q);

// s_k(x^(1) + ... + x^(q)) against the sum of all weight-k polarizations,
// both fully expanded.
struct SumExpansion {
  FormalPoly lhs, rhs;
  std::vector<std::vector<int>> indices;
  bool holds = false;
};
SumExpansion sum_expansion(int k, int q, int n);

// One abstract symbol s_j((x^(1))^{r_1} ... (x^(q))^{r_q}).
struct SymSymbol {
  int j = 0;
  Pattern r;
  auto operator<=>(const SymSymbol&) const = default;
};

// Integer polynomial in the abstract symbols; keys are sorted multisets.
struct SymExpr {
  int n = 0, q = 0;
  std::map<std::vector<SymSymbol>, mpz_class> terms;

  static SymExpr zero(int n, int q);
  static SymExpr constant(int n, int q, long c);
  static SymExpr symbol(int n, int q, const SymSymbol& s);

  bool equal(const SymExpr& o) const;
  SymExpr add(const SymExpr& o) const;
  SymExpr sub(const SymExpr& o) const;
  SymExpr mul(const SymExpr& o) const;
  SymExpr scaled(const mpz_class& c) const;

  // Replace every symbol by its elementary-symmetric expansion.
  FormalPoly expand() const;
  // Integer evaluation without symbolic expansion; values family-major q*n.
  mpz_class eval(const std::vector<mpz_class>& values) const;
  // Sorted distinct monomial arguments appearing in the symbols.
  std::vector<Pattern> arguments_used() const;
  std::string str() const;
};

// Memoized triangular inversion.  The key is the index vector itself (its
// length is the slot count), so cached pure expressions are shared across
// top-level calls with different q.
class PolarizationEngine {
 public:
  explicit PolarizationEngine(int n) : n_(n) {}
  // SymExpr over q = alpha.size() families whose expansion equals
  // partial_polarization(alpha, n, alpha.size()).
  SymExpr express(const std::vector<int>& alpha);
  int n() const { return n_; }

 private:
  int n_;
  std::map<std::vector<int>, SymExpr> memo_;
};

SymExpr express_in_power_products(const std::vector<int>& alpha, int n, int q);

// True iff expr and partial_polarization(alpha) agree at the assignment.
bool verify_identity(const SymExpr& expr, const std::vector<int>& alpha,
                     const std::vector<mpz_class>& assignment);

}  // namespace invlab
