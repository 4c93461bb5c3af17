#include "invlab/symfunc.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace invlab {

namespace {

void check_shape(const FormalPoly& a, const FormalPoly& b) {
  if (a.n != b.n || a.q != b.q)
    throw Error("symfunc", "mixed variable shapes");
}

mpz_class pow_mpz(const mpz_class& base, int e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

}  // namespace

FormalPoly FormalPoly::zero(int n, int q) { return FormalPoly{n, q, {}}; }

FormalPoly FormalPoly::constant(int n, int q, long c) {
  FormalPoly p{n, q, {}};
  if (c != 0) p.terms[std::vector<int>(static_cast<std::size_t>(n) * q, 0)] = c;
  return p;
}

FormalPoly FormalPoly::variable(int n, int q, int family, int index) {
  if (family < 0 || family >= q || index < 0 || index >= n)
    throw Error("symfunc", "variable out of range");
  FormalPoly p{n, q, {}};
  std::vector<int> e(static_cast<std::size_t>(n) * q, 0);
  e[static_cast<std::size_t>(family) * n + index] = 1;
  p.terms[e] = 1;
  return p;
}

bool FormalPoly::equal(const FormalPoly& o) const {
  check_shape(*this, o);
  return terms == o.terms;
}

FormalPoly FormalPoly::add(const FormalPoly& o) const {
  check_shape(*this, o);
  FormalPoly r = *this;
  for (const auto& [e, c] : o.terms) {
    mpz_class& slot = r.terms[e];
    slot += c;
    if (sgn(slot) == 0) r.terms.erase(e);
  }
  return r;
}

FormalPoly FormalPoly::sub(const FormalPoly& o) const {
  check_shape(*this, o);
  FormalPoly r = *this;
  for (const auto& [e, c] : o.terms) {
    mpz_class& slot = r.terms[e];
    slot -= c;
    if (sgn(slot) == 0) r.terms.erase(e);
  }
  return r;
}

FormalPoly FormalPoly::mul(const FormalPoly& o) const {
  check_shape(*this, o);
  FormalPoly r = FormalPoly::zero(n, q);
  for (const auto& [ea, ca] : terms)
    for (const auto& [eb, cb] : o.terms) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      mpz_class& slot = r.terms[e];
      slot += ca * cb;
      if (sgn(slot) == 0) r.terms.erase(e);
    }
  return r;
}

mpz_class FormalPoly::eval(const std::vector<mpz_class>& values) const {
  if (values.size() != static_cast<std::size_t>(n) * q)
    throw Error("symfunc", "assignment has the wrong arity");
  mpz_class total = 0;
  for (const auto& [e, c] : terms) {
    mpz_class t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) t *= pow_mpz(values[i], e[i]);
    total += t;
  }
  return total;
}

std::string FormalPoly::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms) {
    if (!first) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << "-";
    first = false;
    mpz_class a = abs(c);
    bool unitc = a == 1;
    bool bare = true;
    std::ostringstream vars;
    for (int f = 0; f < q; ++f)
      for (int i = 0; i < n; ++i) {
        int ex = e[static_cast<std::size_t>(f) * n + i];
        if (ex == 0) continue;
        if (!bare) vars << "*";
        bare = false;
        vars << "x" << f + 1 << "_" << i + 1;
        if (ex > 1) vars << "^" << ex;
      }
    if (!unitc || bare) os << a.get_str();
    if (!unitc && !bare) os << "*";
    os << vars.str();
  }
  return os.str();
}

FormalPoly elementary(int j, int n, int q,
                      const std::vector<FormalPoly>& args) {
  // Coefficient of T^j in prod (1 + a_i T), by one pass over the arguments.
  std::vector<FormalPoly> coeff;
  coeff.push_back(FormalPoly::constant(n, q, 1));
  for (const FormalPoly& a : args) {
    coeff.push_back(FormalPoly::zero(n, q));
    for (std::size_t d = coeff.size() - 1; d > 0; --d)
      coeff[d] = coeff[d].add(coeff[d - 1].mul(a));
  }
  if (j < 0 || static_cast<std::size_t>(j) >= coeff.size())
    return FormalPoly::zero(n, q);
  return coeff[static_cast<std::size_t>(j)];
}

FormalPoly polarization_general(const std::vector<int>& counts,
                                const std::vector<Pattern>& patterns, int n,
                                int q) {
  if (counts.size() != patterns.size())
    throw Error("symfunc", "one pattern per slot required");
  int total = 0;
  for (int c : counts) {
    if (c < 0) throw Error("symfunc", "negative polarization index");
    total += c;
  }
  if (total > n)
    throw Error("symfunc", "polarization index exceeds the variable count");
  for (const Pattern& p : patterns)
    if (p.size() != static_cast<std::size_t>(q))
      throw Error("symfunc", "pattern arity mismatch");

  FormalPoly out = FormalPoly::zero(n, q);
  std::vector<int> remaining = counts;
  std::vector<int> exps(static_cast<std::size_t>(n) * q, 0);
  // Label each index with a slot (or none); increasing sequences make the
  // choice of labels equivalent to the choice of disjoint sequences.
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      for (int rem : remaining)
        if (rem != 0) return;
      out.terms[exps] += 1;
      return;
    }
    self(self, i + 1);  // index i unused
    for (std::size_t t = 0; t < remaining.size(); ++t) {
      if (remaining[t] == 0) continue;
      --remaining[t];
      for (int f = 0; f < q; ++f)
        exps[static_cast<std::size_t>(f) * n + i] += patterns[t][f];
      self(self, i + 1);
      for (int f = 0; f < q; ++f)
        exps[static_cast<std::size_t>(f) * n + i] -= patterns[t][f];
      ++remaining[t];
    }
  };
  rec(rec, 0);
  return out;
}

FormalPoly partial_polarization(const std::vector<int>& alpha, int n, int q) {
  if (alpha.size() != static_cast<std::size_t>(q))
    throw Error("symfunc", "index arity must match the family count");
  std::vector<Pattern> units;
  for (int l = 0; l < q; ++l) {
    Pattern p(static_cast<std::size_t>(q), 0);
    p[static_cast<std::size_t>(l)] = 1;
    units.push_back(p);
  }
  return polarization_general(alpha, units, n, q);
}

SumExpansion sum_expansion(int k, int q, int n) {
  if (k > n) throw Error("symfunc", "degree exceeds the variable count");
  std::vector<FormalPoly> sums;
  for (int i = 0; i < n; ++i) {
    FormalPoly s = FormalPoly::zero(n, q);
    for (int f = 0; f < q; ++f)
      s = s.add(FormalPoly::variable(n, q, f, i));
    sums.push_back(s);
  }
  SumExpansion out;
  out.lhs = elementary(k, n, q, sums);
  out.rhs = FormalPoly::zero(n, q);
  std::vector<int> alpha(static_cast<std::size_t>(q), 0);
  auto rec = [&](auto&& self, int slot, int left) -> void {
    if (slot == q - 1) {
      alpha[static_cast<std::size_t>(slot)] = left;
      out.indices.push_back(alpha);
      out.rhs = out.rhs.add(partial_polarization(alpha, n, q));
      return;
    }
    for (int a = 0; a <= left; ++a) {
      alpha[static_cast<std::size_t>(slot)] = a;
      self(self, slot + 1, left - a);
    }
  };
  rec(rec, 0, k);
  out.holds = out.lhs.equal(out.rhs);
  return out;
}

SymExpr SymExpr::zero(int n, int q) { return SymExpr{n, q, {}}; }

SymExpr SymExpr::constant(int n, int q, long c) {
  SymExpr e{n, q, {}};
  if (c != 0) e.terms[{}] = c;
  return e;
}

SymExpr SymExpr::symbol(int n, int q, const SymSymbol& s) {
  if (s.j > n) throw Error("symfunc", "symbol degree exceeds n");
  SymExpr e{n, q, {}};
  e.terms[{s}] = 1;
  return e;
}

bool SymExpr::equal(const SymExpr& o) const {
  return n == o.n && q == o.q && terms == o.terms;
}

SymExpr SymExpr::add(const SymExpr& o) const {
  SymExpr r = *this;
  for (const auto& [k, c] : o.terms) {
    mpz_class& slot = r.terms[k];
    slot += c;
    if (sgn(slot) == 0) r.terms.erase(k);
  }
  return r;
}

SymExpr SymExpr::sub(const SymExpr& o) const {
  return add(o.scaled(mpz_class(-1)));
}

SymExpr SymExpr::mul(const SymExpr& o) const {
  SymExpr r = SymExpr::zero(n, q);
  for (const auto& [ka, ca] : terms)
    for (const auto& [kb, cb] : o.terms) {
      std::vector<SymSymbol> k = ka;
      k.insert(k.end(), kb.begin(), kb.end());
      std::sort(k.begin(), k.end());
      mpz_class& slot = r.terms[k];
      slot += ca * cb;
      if (sgn(slot) == 0) r.terms.erase(k);
    }
  return r;
}

SymExpr SymExpr::scaled(const mpz_class& c) const {
  SymExpr r = SymExpr::zero(n, q);
  if (sgn(c) == 0) return r;
  for (const auto& [k, v] : terms) r.terms[k] = v * c;
  return r;
}

namespace {

// The n argument polynomials of a symbol: per index i the monomial
// prod_l (x^(l)_i)^{r_l}.
std::vector<FormalPoly> symbol_args(int n, int q, const Pattern& r) {
  std::vector<FormalPoly> args;
  for (int i = 0; i < n; ++i) {
    FormalPoly a = FormalPoly::constant(n, q, 1);
    for (int f = 0; f < q; ++f)
      for (int e = 0; e < r[static_cast<std::size_t>(f)]; ++e)
        a = a.mul(FormalPoly::variable(n, q, f, i));
    args.push_back(a);
  }
  return args;
}

}  // namespace

FormalPoly SymExpr::expand() const {
  FormalPoly out = FormalPoly::zero(n, q);
  for (const auto& [k, c] : terms) {
    FormalPoly t = FormalPoly::constant(n, q, 1);
    for (const SymSymbol& s : k)
      t = t.mul(elementary(s.j, n, q, symbol_args(n, q, s.r)));
    FormalPoly scaled = FormalPoly::zero(n, q);
    for (const auto& [e, tc] : t.terms) scaled.terms[e] = tc * c;
    out = out.add(scaled);
  }
  return out;
}

mpz_class SymExpr::eval(const std::vector<mpz_class>& values) const {
  if (values.size() != static_cast<std::size_t>(n) * q)
    throw Error("symfunc", "assignment has the wrong arity");
  mpz_class total = 0;
  for (const auto& [k, c] : terms) {
    mpz_class t = c;
    for (const SymSymbol& s : k) {
      // Elementary symmetric of the n integer arguments, by the same
      // one-pass recurrence as the symbolic expansion.
      std::vector<mpz_class> args;
      for (int i = 0; i < n; ++i) {
        mpz_class a = 1;
        for (int f = 0; f < q; ++f)
          a *= pow_mpz(values[static_cast<std::size_t>(f) * n + i],
                       s.r[static_cast<std::size_t>(f)]);
        args.push_back(a);
      }
      std::vector<mpz_class> coeff{1};
      for (const mpz_class& a : args) {
        coeff.push_back(0);
        for (std::size_t d = coeff.size() - 1; d > 0; --d)
          coeff[d] += coeff[d - 1] * a;
      }
      t *= coeff[static_cast<std::size_t>(s.j)];
    }
    total += t;
  }
  return total;
}

std::vector<Pattern> SymExpr::arguments_used() const {
  std::vector<Pattern> out;
  for (const auto& [k, c] : terms)
    for (const SymSymbol& s : k) out.push_back(s.r);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string SymExpr::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms) {
    if (!first) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << "-";
    first = false;
    mpz_class a = abs(c);
    if (a != 1 || k.empty()) os << a.get_str();
    bool need_star = a != 1;
    for (const SymSymbol& s : k) {
      if (need_star) os << "*";
      need_star = true;
      os << "s" << s.j << "(";
      bool bare = true;
      for (std::size_t f = 0; f < s.r.size(); ++f) {
        if (s.r[f] == 0) continue;
        if (!bare) os << "*";
        bare = false;
        os << "x" << f + 1;
        if (s.r[f] > 1) os << "^" << s.r[f];
      }
      if (bare) os << "1";
      os << ")";
    }
  }
  return os.str();
}

namespace {

std::mutex memo_lock;

}  // namespace

SymExpr PolarizationEngine::express(const std::vector<int>& alpha) {
  const int q = static_cast<int>(alpha.size());
  {
    std::lock_guard<std::mutex> hold(memo_lock);
    auto it = memo_.find(alpha);
    if (it != memo_.end()) return it->second;
  }
  int weight = 0;
  for (int a : alpha) weight += a;
  if (weight > n_)
    throw Error("symfunc", "polarization index exceeds the variable count");

  SymExpr expr = SymExpr::constant(n_, q, 1);
  if (weight > 0) {
    // The naive product of one elementary symmetric function per family.
    FormalPoly prod = FormalPoly::constant(n_, q, 1);
    for (int l = 0; l < q; ++l) {
      if (alpha[static_cast<std::size_t>(l)] == 0) continue;
      Pattern unit(static_cast<std::size_t>(q), 0);
      unit[static_cast<std::size_t>(l)] = 1;
      SymSymbol s{alpha[static_cast<std::size_t>(l)], unit};
      expr = expr.mul(SymExpr::symbol(n_, q, s));
      prod = prod.mul(
          elementary(s.j, n_, q, symbol_args(n_, q, unit)));
    }
    // Everything the product contains beyond the polarization has some
    // index carrying two families at once, hence strictly lower weight.
    FormalPoly delta = prod.sub(partial_polarization(alpha, n_, q));
    while (!delta.is_zero()) {
      const auto& [e, c] = *delta.terms.begin();
      // Read off the distinct per-index exponent columns and their counts:
      // they name the unique canonical lower polarization this term is in.
      std::map<Pattern, int> cols;
      for (int i = 0; i < n_; ++i) {
        Pattern col(static_cast<std::size_t>(q), 0);
        bool live = false;
        for (int f = 0; f < q; ++f) {
          col[static_cast<std::size_t>(f)] =
              e[static_cast<std::size_t>(f) * n_ + i];
          live |= col[static_cast<std::size_t>(f)] != 0;
        }
        if (live) ++cols[col];
      }
      std::vector<int> beta;
      std::vector<Pattern> pats;
      for (const auto& [p, cnt] : cols) {
        pats.push_back(p);
        beta.push_back(cnt);
      }
      int bw = 0;
      for (int b : beta) bw += b;
      if (bw >= weight)
        throw Error("symfunc", "inversion failed to lose weight");
      mpz_class coeff = c;
      delta = delta.sub([&] {
        FormalPoly g = polarization_general(beta, pats, n_, q);
        FormalPoly s = FormalPoly::zero(n_, q);
        for (const auto& [ge, gc] : g.terms) s.terms[ge] = gc * coeff;
        return s;
      }());
      // Rewrite that polarization through the lemma for its own slot count,
      // then substitute each slot's monomial pattern into the symbols.
      SymExpr pure = express(beta);
      SymExpr sub = SymExpr::zero(n_, q);
      for (const auto& [k, kc] : pure.terms) {
        std::vector<SymSymbol> key;
        for (const SymSymbol& s : k) {
          Pattern r(static_cast<std::size_t>(q), 0);
          for (std::size_t t = 0; t < s.r.size(); ++t)
            for (int f = 0; f < q; ++f)
              r[static_cast<std::size_t>(f)] +=
                  s.r[t] * pats[t][static_cast<std::size_t>(f)];
          key.push_back(SymSymbol{s.j, r});
        }
        std::sort(key.begin(), key.end());
        mpz_class& slot = sub.terms[key];
        slot += kc;
        if (sgn(slot) == 0) sub.terms.erase(key);
      }
      expr = expr.sub(sub.scaled(coeff));
    }
  }
  std::lock_guard<std::mutex> hold(memo_lock);
  auto [it, ignored] = memo_.emplace(alpha, expr);
  return it->second;
}

SymExpr express_in_power_products(const std::vector<int>& alpha, int n,
                                  int q) {
  if (alpha.size() != static_cast<std::size_t>(q))
    throw Error("symfunc", "index arity must match the family count");
  PolarizationEngine engine(n);
  return engine.express(alpha);
}

bool verify_identity(const SymExpr& expr, const std::vector<int>& alpha,
                     const std::vector<mpz_class>& assignment) {
  FormalPoly pol = partial_polarization(alpha, expr.n, expr.q);
  return expr.eval(assignment) == pol.eval(assignment);
}

}  // namespace invlab
