#include "invlab/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <set>
#include <sstream>

namespace invlab {

struct AlgebraImpl {
  BaseRing base;
  std::vector<ComponentSpec> comps;
  int default_truncation = 0;
  std::vector<BasisKey> basis;
  std::map<std::pair<std::uint32_t, std::vector<int>>, std::uint32_t> index;
  std::map<std::string, std::pair<std::uint32_t, std::uint32_t>> var_lookup;
  std::vector<std::size_t> var_offset;  // per comp, into global var ids
  std::size_t total_vars = 0;

  bool survives(std::uint32_t c, const std::vector<int>& exps) const {
    const auto& comp = comps[c];
    for (const auto& cap : comp.caps) {
      int s = 0;
      for (int v : cap.vars) s += exps[v];
      if (s >= cap.bound) return false;
    }
    for (const auto& rel : comp.relations) {
      bool div = true;
      for (std::size_t v = 0; v < rel.size(); ++v)
        if (exps[v] < rel[v]) { div = false; break; }
      if (div) return false;
    }
    return true;
  }

  bool same(const AlgebraImpl& o) const {
    if (this == &o) return true;
    if (!base.same(o.base) || comps.size() != o.comps.size()) return false;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      const auto& a = comps[c];
      const auto& b = o.comps[c];
      if (a.vars != b.vars || a.relations != b.relations) return false;
      if (a.caps.size() != b.caps.size()) return false;
      for (std::size_t i = 0; i < a.caps.size(); ++i)
        if (a.caps[i].vars != b.caps[i].vars ||
            a.caps[i].bound != b.caps[i].bound)
          return false;
    }
    return true;
  }
};

namespace {

void enumerate_basis(AlgebraImpl& impl) {
  for (std::uint32_t c = 0; c < impl.comps.size(); ++c) {
    const auto& comp = impl.comps[c];
    std::size_t nv = comp.vars.size();
    std::vector<int> bound(nv, INT_MAX);
    for (const auto& cap : comp.caps)
      for (int v : cap.vars) bound[v] = std::min(bound[v], cap.bound - 1);
    for (const auto& rel : comp.relations) {
      int nz = 0, which = -1;
      for (std::size_t v = 0; v < nv; ++v)
        if (rel[v] > 0) { ++nz; which = static_cast<int>(v); }
      if (nz == 1) bound[which] = std::min(bound[which], rel[which] - 1);
    }
    for (std::size_t v = 0; v < nv; ++v)
      if (bound[v] == INT_MAX)
        throw Error("algebra", "variable " + comp.vars[v] +
                                   " has no degree bound; basis is infinite");
    std::vector<BasisKey> keys;
    std::vector<int> e(nv, 0);
    for (;;) {
      if (impl.survives(c, e)) keys.push_back(BasisKey{c, e});
      if (nv == 0) break;
      std::size_t i = 0;
      while (i < nv && ++e[i] > bound[i]) e[i++] = 0;
      if (i == nv) break;
    }
    std::sort(keys.begin(), keys.end(), [](const BasisKey& a,
                                           const BasisKey& b) {
      int da = a.degree(), db = b.degree();
      if (da != db) return da < db;
      return a.exps < b.exps;
    });
    for (auto& k : keys) {
      impl.index[{c, k.exps}] =
          static_cast<std::uint32_t>(impl.basis.size());
      impl.basis.push_back(std::move(k));
    }
  }
}

std::shared_ptr<AlgebraImpl> build_impl(const BaseRing& base,
                                        std::vector<ComponentSpec> comps,
                                        int default_truncation) {
  if (!base.valid()) throw Error("algebra", "invalid base ring");
  auto impl = std::make_shared<AlgebraImpl>();
  impl->base = base;
  impl->comps = std::move(comps);
  impl->default_truncation = default_truncation;
  std::set<std::string> seen;
  for (std::uint32_t c = 0; c < impl->comps.size(); ++c) {
    auto& comp = impl->comps[c];
    impl->var_offset.push_back(impl->total_vars);
    for (std::size_t v = 0; v < comp.vars.size(); ++v) {
      if (!seen.insert(comp.vars[v]).second)
        throw Error("algebra", "duplicate variable name " + comp.vars[v]);
      impl->var_lookup[comp.vars[v]] = {c, static_cast<std::uint32_t>(v)};
      ++impl->total_vars;
    }
    for (const auto& rel : comp.relations) {
      if (rel.size() != comp.vars.size())
        throw Error("algebra", "relation arity mismatch");
      bool nz = false;
      for (int x : rel) { if (x < 0) throw Error("algebra", "negative exponent"); if (x > 0) nz = true; }
      if (!nz) throw Error("algebra", "relation 1 = 0 is not allowed");
    }
  }
  enumerate_basis(*impl);
  return impl;
}

// Parses a monomial like "x^3" or "x*y" over the component's variables.
std::vector<int> parse_monomial(const ComponentSpec& comp,
                                const std::string& text) {
  std::vector<int> e(comp.vars.size(), 0);
  std::size_t i = 0;
  auto skip = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
  skip();
  while (i < text.size()) {
    std::size_t j = i;
    while (j < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[j])) ||
            text[j] == '_' || text[j] == '\''))
      ++j;
    std::string name = text.substr(i, j - i);
    auto it = std::find(comp.vars.begin(), comp.vars.end(), name);
    if (name.empty() || it == comp.vars.end())
      throw Error("parse", "unknown variable '" + name + "' in relation '" +
                               text + "'");
    std::size_t v = static_cast<std::size_t>(it - comp.vars.begin());
    i = j;
    skip();
    int exp = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      skip();
      std::size_t k = i;
      while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
      if (k == i) throw Error("parse", "missing exponent in '" + text + "'");
      exp = std::stoi(text.substr(i, k - i));
      i = k;
      skip();
    }
    e[v] += exp;
    if (i < text.size()) {
      if (text[i] != '*')
        throw Error("parse", "expected '*' in relation '" + text + "'");
      ++i;
      skip();
    }
  }
  return e;
}

}  // namespace

Algebra Algebra::single(const BaseRing& base,
                        const std::vector<std::string>& vars,
                        const std::vector<std::string>& relations,
                        int truncation, const std::string& label) {
  ComponentSpec comp;
  comp.label = label;
  comp.vars = vars;
  ComponentSpec::Cap cap;
  for (std::size_t v = 0; v < vars.size(); ++v)
    cap.vars.push_back(static_cast<int>(v));
  cap.bound = truncation;
  comp.caps.push_back(std::move(cap));
  for (const auto& r : relations)
    comp.relations.push_back(parse_monomial(comp, r));
  return from_components(base, {std::move(comp)}, truncation);
}

Algebra Algebra::from_components(const BaseRing& base,
                                 std::vector<ComponentSpec> comps,
                                 int default_truncation) {
  return Algebra(build_impl(base, std::move(comps), default_truncation));
}

Algebra Algebra::product(const std::vector<Algebra>& factors) {
  if (factors.empty()) throw Error("algebra", "empty product");
  const BaseRing& base = factors[0].base();
  std::map<std::string, int> name_count;
  for (const auto& f : factors) {
    if (!f.base().same(base))
      throw Error("algebra", "product factors over different base rings");
    for (std::size_t c = 0; c < f.component_count(); ++c)
      for (const auto& v : f.component(c).vars) ++name_count[v];
  }
  std::vector<ComponentSpec> comps;
  int trunc = 0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    trunc = std::max(trunc, factors[i].default_truncation());
    for (std::size_t c = 0; c < factors[i].component_count(); ++c) {
      ComponentSpec comp = factors[i].component(c);
      comp.label = "p" + std::to_string(i) +
                   (factors[i].component_count() > 1 ? "." + comp.label : "");
      for (auto& v : comp.vars)
        if (name_count[v] > 1) v += std::to_string(i);
      comps.push_back(std::move(comp));
    }
  }
  return from_components(base, std::move(comps), trunc);
}

const BaseRing& Algebra::base() const { return impl_->base; }
std::size_t Algebra::dim() const { return impl_->basis.size(); }
std::size_t Algebra::component_count() const { return impl_->comps.size(); }
const ComponentSpec& Algebra::component(std::size_t c) const {
  return impl_->comps[c];
}
int Algebra::default_truncation() const { return impl_->default_truncation; }
const BasisKey& Algebra::basis_key(std::uint32_t i) const {
  return impl_->basis[i];
}

std::int64_t Algebra::index_of(std::uint32_t comp,
                               const std::vector<int>& exps) const {
  auto it = impl_->index.find({comp, exps});
  return it == impl_->index.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::int64_t Algebra::mul_basis(std::uint32_t i, std::uint32_t j) const {
  const BasisKey& a = impl_->basis[i];
  const BasisKey& b = impl_->basis[j];
  if (a.comp != b.comp) return -1;
  std::vector<int> e(a.exps.size());
  for (std::size_t v = 0; v < e.size(); ++v) e[v] = a.exps[v] + b.exps[v];
  if (!impl_->survives(a.comp, e)) return -1;
  return index_of(a.comp, e);
}

bool Algebra::same(const Algebra& o) const {
  if (impl_ == o.impl_) return true;
  if (!impl_ || !o.impl_) return false;
  return impl_->same(*o.impl_);
}

std::string Algebra::describe() const {
  std::ostringstream os;
  os << impl_->base.describe() << "[";
  for (std::size_t c = 0; c < impl_->comps.size(); ++c) {
    if (c) os << " x ";
    const auto& comp = impl_->comps[c];
    for (std::size_t v = 0; v < comp.vars.size(); ++v)
      os << (v ? "," : "") << comp.vars[v];
  }
  os << "], dim " << dim() << ", truncation " << impl_->default_truncation;
  return os.str();
}

std::size_t Algebra::var_count() const { return impl_->total_vars; }

std::pair<std::uint32_t, std::uint32_t> Algebra::var_location(
    std::size_t gid) const {
  for (std::uint32_t c = 0; c < impl_->comps.size(); ++c) {
    std::size_t off = impl_->var_offset[c];
    if (gid < off + impl_->comps[c].vars.size())
      return {c, static_cast<std::uint32_t>(gid - off)};
  }
  throw Error("algebra", "variable id out of range");
}

std::size_t Algebra::var_gid(std::uint32_t comp, std::uint32_t vi) const {
  return impl_->var_offset[comp] + vi;
}

const std::string& Algebra::var_name(std::size_t gid) const {
  auto [c, v] = var_location(gid);
  return impl_->comps[c].vars[v];
}

Element Algebra::zero() const { return Element(*this, {}); }

Element Algebra::unit(std::uint32_t comp) const {
  std::vector<int> e(impl_->comps[comp].vars.size(), 0);
  std::int64_t i = index_of(comp, e);
  if (i < 0) throw Error("algebra", "component unit not in basis");
  return Element(*this, {{static_cast<std::uint32_t>(i), base().one()}});
}

Element Algebra::one() const {
  std::vector<std::pair<std::uint32_t, Scalar>> t;
  for (std::uint32_t c = 0; c < impl_->comps.size(); ++c) {
    std::vector<int> e(impl_->comps[c].vars.size(), 0);
    std::int64_t i = index_of(c, e);
    if (i < 0) throw Error("algebra", "component unit not in basis");
    t.emplace_back(static_cast<std::uint32_t>(i), base().one());
  }
  std::sort(t.begin(), t.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return Element(*this, std::move(t));
}

Element Algebra::var(const std::string& name) const {
  auto it = impl_->var_lookup.find(name);
  if (it == impl_->var_lookup.end())
    throw Error("algebra", "unknown variable " + name);
  auto [c, v] = it->second;
  std::vector<int> e(impl_->comps[c].vars.size(), 0);
  e[v] = 1;
  std::int64_t i = index_of(c, e);
  if (i < 0) throw Error("algebra", "variable " + name + " reduces to zero");
  return Element(*this, {{static_cast<std::uint32_t>(i), base().one()}});
}

Element Algebra::basis_element(std::uint32_t i) const {
  return Element(*this, {{i, base().one()}});
}

Element Algebra::from_scalar(const Scalar& c) const {
  if (base().is_zero(c)) return zero();
  return one().scaled(c);
}

Element Algebra::from_int(std::int64_t n) const {
  return from_scalar(base().from_int(n));
}

Element Algebra::reduce_raw(
    const std::vector<std::pair<BasisKey, Scalar>>& terms) const {
  std::map<std::uint32_t, Scalar> acc;
  for (const auto& [key, c] : terms) {
    if (key.comp >= impl_->comps.size())
      throw Error("algebra", "component index out of range");
    if (key.exps.size() != impl_->comps[key.comp].vars.size())
      throw Error("algebra", "exponent arity mismatch");
    if (!impl_->survives(key.comp, key.exps)) continue;
    std::int64_t i = index_of(key.comp, key.exps);
    auto [it, fresh] = acc.emplace(static_cast<std::uint32_t>(i), c);
    if (!fresh) it->second = base().add(it->second, c);
  }
  std::vector<std::pair<std::uint32_t, Scalar>> t;
  for (auto& [i, c] : acc)
    if (!base().is_zero(c)) t.emplace_back(i, std::move(c));
  return Element(*this, std::move(t));
}

Element Algebra::from_terms(
    std::vector<std::pair<std::uint32_t, Scalar>> t) const {
  std::map<std::uint32_t, Scalar> acc;
  for (auto& [i, c] : t) {
    if (i >= dim()) throw Error("algebra", "basis index out of range");
    auto [it, fresh] = acc.emplace(i, c);
    if (!fresh) it->second = base().add(it->second, c);
  }
  std::vector<std::pair<std::uint32_t, Scalar>> out;
  for (auto& [i, c] : acc)
    if (!base().is_zero(c)) out.emplace_back(i, std::move(c));
  return Element(*this, std::move(out));
}

// ---------------------------------------------------------------------------
// Element operations

Scalar Element::coeff(std::uint32_t basis_index) const {
  for (const auto& [i, c] : t_)
    if (i == basis_index) return c;
  return a_.base().zero();
}

int Element::degree() const {
  int d = -1;
  for (const auto& [i, c] : t_)
    d = std::max(d, a_.basis_key(i).degree());
  return d;
}

int Element::valuation() const {
  int d = INT_MAX;
  for (const auto& [i, c] : t_)
    d = std::min(d, a_.basis_key(i).degree());
  return d;
}

std::uint32_t Element::leading_index() const {
  if (t_.empty()) throw Error("algebra", "leading index of zero");
  return t_.back().first;
}

namespace {
void check_parents(const Element& a, const Element& b) {
  if (!a.parent().same(b.parent()))
    throw Error("parent mismatch",
                "elements belong to different algebras");
}
}  // namespace

Element Element::add(const Element& o) const {
  if (t_.empty()) return o;
  if (o.t_.empty()) return *this;
  check_parents(*this, o);
  const BaseRing& R = a_.base();
  std::vector<std::pair<std::uint32_t, Scalar>> out;
  out.reserve(t_.size() + o.t_.size());
  std::size_t i = 0, j = 0;
  while (i < t_.size() || j < o.t_.size()) {
    if (j >= o.t_.size() || (i < t_.size() && t_[i].first < o.t_[j].first)) {
      out.push_back(t_[i++]);
    } else if (i >= t_.size() || o.t_[j].first < t_[i].first) {
      out.push_back(o.t_[j++]);
    } else {
      Scalar c = R.add(t_[i].second, o.t_[j].second);
      if (!R.is_zero(c)) out.emplace_back(t_[i].first, std::move(c));
      ++i; ++j;
    }
  }
  return Element(a_, std::move(out));
}

Element Element::neg() const {
  const BaseRing& R = a_.base();
  auto t = t_;
  for (auto& [i, c] : t) c = R.neg(c);
  return Element(a_, std::move(t));
}

Element Element::sub(const Element& o) const { return add(o.neg()); }

Element Element::scaled(const Scalar& c) const {
  const BaseRing& R = a_.base();
  if (R.is_zero(c)) return Element(a_, {});
  std::vector<std::pair<std::uint32_t, Scalar>> t;
  t.reserve(t_.size());
  for (const auto& [i, x] : t_) {
    Scalar y = R.mul(x, c);
    if (!R.is_zero(y)) t.emplace_back(i, std::move(y));
  }
  return Element(a_, std::move(t));
}

Element Element::mul(const Element& o) const {
  if (t_.empty()) return *this;
  if (o.t_.empty()) return o;
  check_parents(*this, o);
  const BaseRing& R = a_.base();
  std::vector<Scalar> dense(a_.dim(), R.zero());
  std::vector<bool> touched(a_.dim(), false);
  for (const auto& [i, x] : t_)
    for (const auto& [j, y] : o.t_) {
      std::int64_t k = a_.mul_basis(i, j);
      if (k < 0) continue;
      dense[k] = R.add(dense[k], R.mul(x, y));
      touched[k] = true;
    }
  std::vector<std::pair<std::uint32_t, Scalar>> t;
  for (std::uint32_t k = 0; k < dense.size(); ++k)
    if (touched[k] && !R.is_zero(dense[k]))
      t.emplace_back(k, std::move(dense[k]));
  return Element(a_, std::move(t));
}

Element Element::pow(std::int64_t e) const {
  if (e < 0) throw Error("algebra", "negative element power");
  Element r = a_.one(), b = *this;
  while (e > 0) {
    if (e & 1) r = r.mul(b);
    b = b.mul(b);
    e >>= 1;
  }
  return r;
}

bool Element::equal(const Element& o) const {
  check_parents(*this, o);
  return sub(o).is_zero();
}

Element Element::truncated_below(int bound) const {
  std::vector<std::pair<std::uint32_t, Scalar>> t;
  for (const auto& [i, c] : t_)
    if (a_.basis_key(i).degree() < bound) t.emplace_back(i, c);
  return Element(a_, std::move(t));
}

// ---------------------------------------------------------------------------
// Printing

std::string Algebra::monomial_str(std::uint32_t i) const {
  const BasisKey& key = impl_->basis[i];
  const auto& comp = impl_->comps[key.comp];
  std::string s;
  for (std::size_t v = 0; v < comp.vars.size(); ++v) {
    if (key.exps[v] == 0) continue;
    if (!s.empty()) s += "*";
    s += comp.vars[v];
    if (key.exps[v] > 1) s += "^" + std::to_string(key.exps[v]);
  }
  if (s.empty())
    return impl_->comps.size() > 1 ? "u" + std::to_string(key.comp) : "1";
  return s;
}

std::string Element::str() const {
  if (t_.empty()) return "0";
  const BaseRing& R = a_.base();
  std::string out;
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    std::string c = R.to_string(it->second);
    std::string mono = a_.monomial_str(it->first);
    bool unit_mono = (mono == "1");
    bool needs_paren = false;
    for (std::size_t k = 1; k < c.size(); ++k)
      if (c[k] == '+' || c[k] == '-') { needs_paren = true; break; }
    std::string piece;
    if (unit_mono) {
      piece = needs_paren ? "(" + c + ")" : c;
    } else if (c == "1" && !needs_paren) {
      piece = mono;
    } else if (c == "-1" && !needs_paren) {
      piece = "-" + mono;
    } else {
      piece = (needs_paren ? "(" + c + ")" : c) + "*" + mono;
    }
    if (out.empty()) {
      out = piece;
    } else if (!piece.empty() && piece[0] == '-') {
      out += " - " + piece.substr(1);
    } else {
      out += " + " + piece;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Expression parser

namespace {

struct Lexer {
  std::string s;
  std::size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool done() { skip(); return i >= s.size(); }
  char peek() { skip(); return i < s.size() ? s[i] : '\0'; }
  char get() { skip(); return s[i++]; }
  std::string ident() {
    skip();
    std::size_t j = i;
    while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) ||
                            s[j] == '_' || s[j] == '\''))
      ++j;
    std::string r = s.substr(i, j - i);
    i = j;
    return r;
  }
  std::string number() {
    skip();
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    std::string r = s.substr(i, j - i);
    i = j;
    return r;
  }
};

struct ExprParser {
  const Algebra& a;
  Lexer lex;

  Element parse_expr() {
    Element r = parse_term();
    for (;;) {
      char c = lex.peek();
      if (c == '+') { lex.get(); r = r.add(parse_term()); }
      else if (c == '-') { lex.get(); r = r.sub(parse_term()); }
      else break;
    }
    return r;
  }

  Element parse_term() {
    Element r = parse_power();
    for (;;) {
      char c = lex.peek();
      if (c == '*') { lex.get(); r = r.mul(parse_power()); }
      else if (c == '/') {
        lex.get();
        r = r.mul(invert_constant(parse_power()));
      } else break;
    }
    return r;
  }

  Element invert_constant(const Element& x) {
    const BaseRing& R = a.base();
    // accept only a "global scalar": same coefficient on every component unit
    Scalar c = R.zero();
    bool first = true;
    for (std::uint32_t comp = 0; comp < a.component_count(); ++comp) {
      Element u = a.unit(comp);
      Scalar cc = x.coeff(u.terms()[0].first);
      if (first) { c = cc; first = false; }
      else if (!R.equal(c, cc))
        throw Error("parse", "division by a non-scalar element");
    }
    if (!x.equal(a.from_scalar(c)))
      throw Error("parse", "division by a non-scalar element");
    return a.from_scalar(R.inv(c));
  }

  Element parse_power() {
    // unary minus binds looser than '^': -x^2 means -(x^2)
    if (lex.peek() == '-') {
      lex.get();
      return parse_power().neg();
    }
    Element b = parse_atom();
    if (lex.peek() == '^') {
      lex.get();
      std::string n = lex.number();
      if (n.empty()) throw Error("parse", "missing exponent");
      return b.pow(std::stoll(n));
    }
    return b;
  }

  Element parse_atom() {
    char c = lex.peek();
    if (c == '(') {
      lex.get();
      Element r = parse_expr();
      if (lex.peek() != ')') throw Error("parse", "missing ')'");
      lex.get();
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string n = lex.number();
      return a.from_scalar(a.base().from_mpz(mpz_class(n)));
    }
    std::string id = lex.ident();
    if (id.empty()) throw Error("parse", "unexpected character in expression");
    // variable name wins; then component unit u<k>; then a base-ring atom
    try {
      return a.var(id);
    } catch (const Error&) {}
    if (id.size() > 1 && id[0] == 'u') {
      bool digits = true;
      for (std::size_t k = 1; k < id.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(id[k]))) digits = false;
      if (digits) {
        std::uint32_t comp = static_cast<std::uint32_t>(std::stoul(id.substr(1)));
        if (comp < a.component_count()) return a.unit(comp);
      }
    }
    return a.from_scalar(a.base().parse_atom(id));
  }
};

}  // namespace

Element Algebra::parse(const std::string& text) const {
  ExprParser p{*this, Lexer{text, 0}};
  Element r = p.parse_expr();
  if (!p.lex.done())
    throw Error("parse", "trailing input in expression '" + text + "'");
  return r;
}

// ---------------------------------------------------------------------------
// Homomorphism application

Element ElementHom::apply(const Element& x) const {
  Element acc = target.zero();
  std::map<std::pair<std::size_t, int>, Element> powers;
  auto power = [&](std::size_t gid, int e) {
    auto it = powers.find({gid, e});
    if (it != powers.end()) return it->second;
    Element p = var_images[gid].pow(e);
    powers.emplace(std::make_pair(gid, e), p);
    return p;
  };
  for (const auto& [i, c] : x.terms()) {
    const BasisKey& key = x.parent().basis_key(i);
    Element img = unit_images[key.comp];
    for (std::size_t v = 0; v < key.exps.size(); ++v) {
      if (key.exps[v] == 0) continue;
      img = img.mul(power(x.parent().var_gid(key.comp,
                                             static_cast<std::uint32_t>(v)),
                          key.exps[v]));
      if (img.is_zero()) break;
    }
    Scalar cc = scalar_map ? scalar_map(c) : c;
    acc = acc.add(img.scaled(cc));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Tensor products

Tensor make_tensor(const Algebra& a, const Algebra& b) {
  if (!a.base().same(b.base()))
    throw Error("algebra", "tensor factors over different base rings");
  std::set<std::string> left_names;
  for (std::size_t c = 0; c < a.component_count(); ++c)
    for (const auto& v : a.component(c).vars) left_names.insert(v);
  std::vector<ComponentSpec> comps;
  for (std::size_t ca = 0; ca < a.component_count(); ++ca) {
    for (std::size_t cb = 0; cb < b.component_count(); ++cb) {
      const auto& A = a.component(ca);
      const auto& B = b.component(cb);
      ComponentSpec comp;
      comp.label = A.label + "|" + B.label;
      // Variable names must stay globally unique: a factor component is
      // replicated once per component of the other factor, so tag names
      // with the partner index when that happens.
      std::set<std::string> pair_names;
      for (auto v : A.vars) {
        if (b.component_count() > 1) v += "@" + std::to_string(cb);
        pair_names.insert(v);
        comp.vars.push_back(std::move(v));
      }
      for (auto v : B.vars) {
        if (a.component_count() > 1) v += "~" + std::to_string(ca);
        while (left_names.count(v) || pair_names.count(v)) v += "'";
        comp.vars.push_back(v);
      }
      int na = static_cast<int>(A.vars.size());
      for (const auto& r : A.relations) {
        std::vector<int> e(comp.vars.size(), 0);
        std::copy(r.begin(), r.end(), e.begin());
        comp.relations.push_back(std::move(e));
      }
      for (const auto& r : B.relations) {
        std::vector<int> e(comp.vars.size(), 0);
        std::copy(r.begin(), r.end(), e.begin() + na);
        comp.relations.push_back(std::move(e));
      }
      for (const auto& cap : A.caps) comp.caps.push_back(cap);
      for (const auto& cap : B.caps) {
        ComponentSpec::Cap c2;
        for (int v : cap.vars) c2.vars.push_back(v + na);
        c2.bound = cap.bound;
        comp.caps.push_back(std::move(c2));
      }
      comps.push_back(std::move(comp));
    }
  }
  Tensor t;
  t.left = a;
  t.right = b;
  t.prod = Algebra::from_components(
      a.base(), std::move(comps),
      std::max(a.default_truncation(), b.default_truncation()));
  t.split_of.resize(t.prod.dim());
  for (std::uint32_t i = 0; i < t.prod.dim(); ++i) {
    const BasisKey& key = t.prod.basis_key(i);
    std::uint32_t ca = key.comp / static_cast<std::uint32_t>(b.component_count());
    std::uint32_t cb = key.comp % static_cast<std::uint32_t>(b.component_count());
    std::size_t na = a.component(ca).vars.size();
    std::vector<int> ea(key.exps.begin(), key.exps.begin() + na);
    std::vector<int> eb(key.exps.begin() + na, key.exps.end());
    std::int64_t ia = a.index_of(ca, ea);
    std::int64_t ib = b.index_of(cb, eb);
    if (ia < 0 || ib < 0)
      throw Error("algebra", "tensor basis does not split");
    t.split_of[i] = {static_cast<std::uint32_t>(ia),
                     static_cast<std::uint32_t>(ib)};
    t.join_of[{static_cast<std::uint32_t>(ia),
               static_cast<std::uint32_t>(ib)}] = i;
  }
  return t;
}

Element Tensor::pure(const Element& l, const Element& r) const {
  const BaseRing& R = prod.base();
  std::vector<std::pair<std::uint32_t, Scalar>> t;
  for (const auto& [i, x] : l.terms())
    for (const auto& [j, y] : r.terms()) {
      auto it = join_of.find({i, j});
      if (it == join_of.end())
        throw Error("algebra", "tensor join missing");
      t.emplace_back(it->second, R.mul(x, y));
    }
  return prod.from_terms(std::move(t));
}

Element Tensor::embed_left(const Element& x) const {
  return pure(x, right.one());
}

Element Tensor::embed_right(const Element& x) const {
  return pure(left.one(), x);
}

std::vector<Element> Tensor::decompose_by_left(const Element& x) const {
  std::vector<std::vector<std::pair<std::uint32_t, Scalar>>> buckets(
      left.dim());
  for (const auto& [k, c] : x.terms()) {
    auto [i, j] = split_of[k];
    buckets[i].emplace_back(j, c);
  }
  std::vector<Element> out;
  out.reserve(left.dim());
  for (std::size_t i = 0; i < buckets.size(); ++i)
    out.push_back(right.from_terms(std::move(buckets[i])));
  return out;
}

}  // namespace invlab
