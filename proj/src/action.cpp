#include "invlab/action.hpp"

#include <algorithm>

namespace invlab {

ElementHom endomorphism(const Algebra& A, const std::vector<Element>& var_images,
                        const std::vector<std::uint32_t>& comp_perm) {
  if (var_images.size() != A.var_count())
    throw Error("action", "variable image count mismatch");
  std::vector<Element> units;
  for (std::uint32_t c = 0; c < A.component_count(); ++c) {
    std::uint32_t tgt = comp_perm.empty() ? c : comp_perm.at(c);
    units.push_back(A.unit(tgt));
  }
  return ElementHom{A, A, var_images, std::move(units), {}};
}

bool well_defined_hom(const ElementHom& phi) {
  const Algebra& A = phi.source;
  if (!phi.apply(A.one()).equal(phi.target.one())) return false;
  std::vector<Element> img(A.dim());
  for (std::uint32_t i = 0; i < A.dim(); ++i)
    img[i] = phi.apply(A.basis_element(i));
  for (std::uint32_t i = 0; i < A.dim(); ++i)
    for (std::uint32_t j = i; j < A.dim(); ++j) {
      std::int64_t k = A.mul_basis(i, j);
      Element lhs = img[i].mul(img[j]);
      Element rhs = k < 0 ? phi.target.zero()
                          : phi.apply(A.basis_element(
                                static_cast<std::uint32_t>(k)));
      if (!lhs.equal(rhs)) return false;
    }
  return true;
}

Element apply_derivation(const Algebra& A,
                         const std::vector<Element>& var_images,
                         const Element& x) {
  if (var_images.size() != A.var_count())
    throw Error("action", "derivation image count mismatch");
  Element acc = A.zero();
  for (const auto& [i, c] : x.terms()) {
    const BasisKey& key = A.basis_key(i);
    for (std::size_t v = 0; v < key.exps.size(); ++v) {
      if (key.exps[v] == 0) continue;
      std::vector<int> exps = key.exps;
      exps[v] -= 1;
      std::int64_t lower = A.index_of(key.comp, exps);
      if (lower < 0) throw Error("action", "derivation hit a dead monomial");
      Element term =
          A.basis_element(static_cast<std::uint32_t>(lower))
              .mul(var_images[A.var_gid(key.comp,
                                        static_cast<std::uint32_t>(v))]);
      acc = acc.add(
          term.scaled(A.base().mul(c, A.base().from_int(key.exps[v]))));
    }
  }
  return acc;
}

struct GroupAction::Impl {
  ActionKind kind = ActionKind::Constant;
  Algebra A, H;
  Tensor HA;
  ElementHom mu;
  ConstantGroup G;
  std::vector<ElementHom> autos;
  std::vector<Element> dvar;
  std::uint32_t id_comp = 0;
  std::vector<Scalar> counit;  // per H basis index
};

namespace {

std::vector<Scalar> counit_vector(const Algebra& H, std::uint32_t id_comp) {
  std::vector<Scalar> eps(H.dim(), H.base().zero());
  for (std::uint32_t i = 0; i < H.dim(); ++i) {
    const BasisKey& k = H.basis_key(i);
    if (k.comp == id_comp && k.degree() == 0) eps[i] = H.base().one();
  }
  return eps;
}

// mu as an algebra hom A -> H (x) A from per-variable/per-unit images.
ElementHom make_mu(const Algebra& A, const Tensor& HA,
                   const std::vector<Element>& var_images,
                   const std::vector<Element>& unit_images) {
  return ElementHom{A, HA.prod, var_images, unit_images, {}};
}

Scalar inv_factorial(const BaseRing& R, int i) {
  Scalar f = R.one();
  for (int k = 2; k <= i; ++k) f = R.mul(f, R.from_int(k));
  return R.inv(f);
}

}  // namespace

GroupAction GroupAction::constant(const ConstantGroup& G, const Algebra& A,
                                  std::vector<ElementHom> autos) {
  if (static_cast<int>(autos.size()) != G.order())
    throw Error("action", "need one automorphism per group element");
  auto impl = std::make_shared<Impl>();
  impl->kind = ActionKind::Constant;
  impl->A = A;
  impl->G = G;
  impl->autos = std::move(autos);
  std::vector<ComponentSpec> comps;
  for (int g = 0; g < G.order(); ++g)
    comps.push_back(ComponentSpec{G.name(g), {}, {}, {}});
  impl->H = Algebra::from_components(A.base(), std::move(comps), 1);
  impl->HA = make_tensor(impl->H, A);
  impl->id_comp = static_cast<std::uint32_t>(G.identity());
  impl->counit = counit_vector(impl->H, impl->id_comp);
  std::vector<Element> vimg, uimg;
  for (std::size_t gid = 0; gid < A.var_count(); ++gid) {
    Element sum = impl->HA.prod.zero();
    for (int g = 0; g < G.order(); ++g) {
      Element gv = impl->autos[g].var_images[gid];
      sum = sum.add(impl->HA.pure(impl->H.unit(g), gv));
    }
    vimg.push_back(sum);
  }
  for (std::uint32_t c = 0; c < A.component_count(); ++c) {
    Element sum = impl->HA.prod.zero();
    for (int g = 0; g < G.order(); ++g)
      sum = sum.add(
          impl->HA.pure(impl->H.unit(g), impl->autos[g].unit_images[c]));
    uimg.push_back(sum);
  }
  impl->mu = make_mu(A, impl->HA, vimg, uimg);
  GroupAction a;
  a.impl_ = std::move(impl);
  return a;
}

GroupAction GroupAction::flow(const Algebra& A,
                              const std::vector<Element>& d_var_images) {
  const std::int64_t p = A.base().residue_characteristic();
  if (p < 2) throw Error("action", "flow needs positive residue characteristic");
  if (d_var_images.size() != A.var_count())
    throw Error("action", "derivation image count mismatch");
  auto impl = std::make_shared<Impl>();
  impl->kind = ActionKind::Flow;
  impl->A = A;
  impl->dvar = d_var_images;
  ComponentSpec c;
  c.label = "flow";
  c.vars = {"X"};
  c.relations = {{static_cast<int>(p)}};
  impl->H = Algebra::from_components(A.base(), {c}, static_cast<int>(p));
  impl->HA = make_tensor(impl->H, A);
  impl->id_comp = 0;
  impl->counit = counit_vector(impl->H, 0);
  std::vector<Element> vimg, uimg;
  for (std::size_t gid = 0; gid < A.var_count(); ++gid) {
    Element sum = impl->HA.prod.zero();
    Element cur = A.var(A.var_name(gid));
    for (int i = 0; i < p; ++i) {
      Element xi = impl->H.basis_element(static_cast<std::uint32_t>(
          impl->H.index_of(0, {i})));
      sum = sum.add(impl->HA.pure(xi, cur.scaled(inv_factorial(A.base(), i))));
      if (i + 1 < p) cur = apply_derivation(A, d_var_images, cur);
    }
    vimg.push_back(sum);
  }
  for (std::uint32_t cc = 0; cc < A.component_count(); ++cc)
    uimg.push_back(impl->HA.pure(impl->H.one(), A.unit(cc)));
  impl->mu = make_mu(A, impl->HA, vimg, uimg);
  GroupAction a;
  a.impl_ = std::move(impl);
  return a;
}

GroupAction GroupAction::flow_times_constant(
    const Algebra& A, const std::vector<Element>& d_var_images,
    const ConstantGroup& G, std::vector<ElementHom> autos) {
  const std::int64_t p = A.base().residue_characteristic();
  if (p < 2) throw Error("action", "flow needs positive residue characteristic");
  if (static_cast<int>(autos.size()) != G.order())
    throw Error("action", "need one automorphism per group element");
  if (d_var_images.size() != A.var_count())
    throw Error("action", "derivation image count mismatch");
  auto impl = std::make_shared<Impl>();
  impl->kind = ActionKind::FlowTimesConstant;
  impl->A = A;
  impl->G = G;
  impl->autos = std::move(autos);
  impl->dvar = d_var_images;
  std::vector<ComponentSpec> comps;
  for (int g = 0; g < G.order(); ++g) {
    ComponentSpec c;
    c.label = G.name(g);
    c.vars = {"X@" + std::to_string(g)};
    c.relations = {{static_cast<int>(p)}};
    comps.push_back(std::move(c));
  }
  impl->H = Algebra::from_components(A.base(), std::move(comps),
                                     static_cast<int>(p));
  impl->HA = make_tensor(impl->H, A);
  impl->id_comp = static_cast<std::uint32_t>(G.identity());
  impl->counit = counit_vector(impl->H, impl->id_comp);
  std::vector<Element> vimg, uimg;
  for (std::size_t gid = 0; gid < A.var_count(); ++gid) {
    Element sum = impl->HA.prod.zero();
    for (int g = 0; g < G.order(); ++g) {
      Element cur = impl->autos[g].var_images[gid];
      for (int i = 0; i < p; ++i) {
        Element hmono = impl->H.basis_element(static_cast<std::uint32_t>(
            impl->H.index_of(static_cast<std::uint32_t>(g), {i})));
        sum = sum.add(
            impl->HA.pure(hmono, cur.scaled(inv_factorial(A.base(), i))));
        if (i + 1 < p) cur = apply_derivation(A, d_var_images, cur);
      }
    }
    vimg.push_back(sum);
  }
  for (std::uint32_t c = 0; c < A.component_count(); ++c) {
    Element sum = impl->HA.prod.zero();
    for (int g = 0; g < G.order(); ++g) {
      Element eg = impl->H.basis_element(static_cast<std::uint32_t>(
          impl->H.index_of(static_cast<std::uint32_t>(g), {0})));
      sum = sum.add(impl->HA.pure(eg, impl->autos[g].unit_images[c]));
    }
    uimg.push_back(sum);
  }
  impl->mu = make_mu(A, impl->HA, vimg, uimg);
  GroupAction a;
  a.impl_ = std::move(impl);
  return a;
}

const GroupAction::Impl& GroupAction::data() const {
  if (!impl_) throw Error("action", "uninitialized action");
  return *impl_;
}

ActionKind GroupAction::kind() const { return data().kind; }
const Algebra& GroupAction::space() const { return data().A; }
const Algebra& GroupAction::hopf() const { return data().H; }
const Tensor& GroupAction::tensor() const { return data().HA; }
int GroupAction::rank() const { return static_cast<int>(data().H.dim()); }

const ConstantGroup& GroupAction::group() const {
  if (data().kind == ActionKind::Flow)
    throw Error("action", "flow actions have no constant group");
  return data().G;
}

const ElementHom& GroupAction::auto_of(int g) const {
  if (data().kind == ActionKind::Flow)
    throw Error("action", "flow actions have no automorphisms");
  return data().autos.at(g);
}

const std::vector<Element>& GroupAction::derivation() const {
  if (data().kind == ActionKind::Constant)
    throw Error("action", "constant actions have no derivation");
  return data().dvar;
}

std::vector<std::uint32_t> GroupAction::component_perm(int g) const {
  const auto& autos = data().autos;
  const Algebra& A = data().A;
  std::vector<std::uint32_t> perm;
  for (std::uint32_t c = 0; c < A.component_count(); ++c) {
    const Element& img = autos.at(g).unit_images[c];
    if (img.term_count() != 1)
      throw Error("action", "unit image is not a component unit");
    perm.push_back(A.basis_key(img.terms()[0].first).comp);
  }
  return perm;
}

bool GroupAction::acts_freely_on_components() const {
  const auto& d = data();
  for (int g = 0; g < d.G.order(); ++g) {
    if (g == d.G.identity()) continue;
    auto perm = component_perm(g);
    for (std::uint32_t c = 0; c < perm.size(); ++c)
      if (perm[c] == c) return false;
  }
  return true;
}

Element GroupAction::coact(const Element& a) const { return data().mu.apply(a); }

Element GroupAction::act(int g, const Element& a) const {
  if (data().kind == ActionKind::Flow)
    throw Error("action", "flow actions have no automorphisms");
  return data().autos.at(g).apply(a);
}

bool GroupAction::is_invariant(const Element& a) const {
  const auto& d = data();
  return coact(a).equal(d.HA.pure(d.H.one(), a));
}

Element GroupAction::counit_collapse(const Element& ha) const {
  const auto& d = data();
  auto rows = d.HA.decompose_by_left(ha);
  Element acc = d.A.zero();
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!d.A.base().is_zero(d.counit[i])) acc = acc.add(rows[i]);
  return acc;
}

void GroupAction::verify() const {
  const auto& d = data();
  if (d.kind == ActionKind::Constant ||
      d.kind == ActionKind::FlowTimesConstant) {
    for (std::size_t gid = 0; gid < d.A.var_count(); ++gid) {
      Element v = d.A.var(d.A.var_name(gid));
      if (!d.autos[d.G.identity()].apply(v).equal(v))
        throw Error("action", "identity does not act trivially");
      for (int g = 0; g < d.G.order(); ++g)
        for (int h = 0; h < d.G.order(); ++h) {
          Element lhs = d.autos[g].apply(d.autos[h].apply(v));
          Element rhs = d.autos[d.G.mul(g, h)].apply(v);
          if (!lhs.equal(rhs))
            throw Error("action", "group law fails on " + d.A.var_name(gid) +
                                      " at (" + d.G.name(g) + "," +
                                      d.G.name(h) + ")");
        }
    }
  }
  if (d.kind == ActionKind::Flow || d.kind == ActionKind::FlowTimesConstant) {
    const std::int64_t p = d.A.base().residue_characteristic();
    for (std::size_t gid = 0; gid < d.A.var_count(); ++gid) {
      Element cur = d.A.var(d.A.var_name(gid));
      for (int i = 0; i < p; ++i) cur = apply_derivation(d.A, d.dvar, cur);
      if (!cur.is_zero())
        throw Error("action", "derivation is not p-nilpotent on " +
                                  d.A.var_name(gid));
    }
  }
  if (d.kind == ActionKind::FlowTimesConstant) {
    for (int g = 0; g < d.G.order(); ++g)
      for (std::size_t gid = 0; gid < d.A.var_count(); ++gid) {
        Element v = d.A.var(d.A.var_name(gid));
        Element lhs = apply_derivation(d.A, d.dvar, d.autos[g].apply(v));
        Element rhs = d.autos[g].apply(apply_derivation(d.A, d.dvar, v));
        if (!lhs.equal(rhs))
          throw Error("action", "flow does not commute with " + d.G.name(g));
      }
  }
  if (d.kind == ActionKind::Constant) {
    if (!well_defined_hom(d.mu))
      throw Error("action", "coaction is not a well-defined algebra map");
  } else {
    // A flow coaction is the divided-power series of the derivation.  The
    // substitution hom extends variable images multiplicatively, which is
    // only forced to agree with that series on live monomials: a cap can cut
    // a product while the derivation still sees its divided powers.  So the
    // honest contract is term-by-term agreement on the basis, plus that the
    // variable images kill every declared monomial relation.
    const std::int64_t p = d.A.base().residue_characteristic();
    const int gcount = d.kind == ActionKind::Flow ? 1 : d.G.order();
    for (std::uint32_t b = 0; b < d.A.dim(); ++b) {
      Element m = d.A.basis_element(b);
      Element series = d.HA.prod.zero();
      for (int g = 0; g < gcount; ++g) {
        Element cur = d.kind == ActionKind::Flow ? m : d.autos[g].apply(m);
        for (int i = 0; i < p; ++i) {
          Element hmono = d.H.basis_element(static_cast<std::uint32_t>(
              d.H.index_of(static_cast<std::uint32_t>(g), {i})));
          series = series.add(
              d.HA.pure(hmono, cur.scaled(inv_factorial(d.A.base(), i))));
          if (i + 1 < p) cur = apply_derivation(d.A, d.dvar, cur);
        }
      }
      if (!coact(m).equal(series))
        throw Error("action", "coaction disagrees with its derivation series");
    }
    for (std::uint32_t c = 0; c < d.A.component_count(); ++c)
      for (const auto& rel : d.A.component(c).relations) {
        Element prod = d.HA.prod.one();
        for (std::size_t v = 0; v < rel.size(); ++v)
          for (int e = 0; e < rel[v]; ++e)
            prod = prod.mul(
                d.mu.var_images[d.A.var_gid(c, static_cast<std::uint32_t>(v))]);
        if (!prod.is_zero())
          throw Error("action", "flow does not respect a monomial relation");
      }
  }
  for (std::uint32_t i = 0; i < d.A.dim(); ++i) {
    Element b = d.A.basis_element(i);
    if (!counit_collapse(coact(b)).equal(b))
      throw Error("action", "counit law fails");
  }
}

std::vector<std::vector<Element>> GroupAction::mult_matrix(
    const Element& a) const {
  const auto& d = data();
  const std::size_t n = d.H.dim();
  Element mu_a = coact(a);
  std::vector<std::vector<Element>> m(n, std::vector<Element>(n, d.A.zero()));
  for (std::size_t j = 0; j < n; ++j) {
    Element prod = mu_a.mul(
        d.HA.embed_left(d.H.basis_element(static_cast<std::uint32_t>(j))));
    auto rows = d.HA.decompose_by_left(prod);
    for (std::size_t i = 0; i < n; ++i) m[i][j] = rows[i];
  }
  return m;
}

Element GroupAction::norm(const Element& a) const {
  return det(mult_matrix(a));
}

std::vector<Element> GroupAction::char_poly(const Element& a) const {
  const auto& d = data();
  const int n = rank();
  Algebra Tpoly = Algebra::single(d.A.base(), {"T"}, {}, n + 1, "Tpoly");
  Tensor TT = make_tensor(Tpoly, d.A);
  Element T = TT.embed_left(Tpoly.var("T"));
  auto M = mult_matrix(a);
  std::vector<std::vector<Element>> N(n, std::vector<Element>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      N[i][j] = TT.embed_right(M[i][j]).neg();
      if (i == j) N[i][j] = N[i][j].add(T);
    }
  Element chi = det(N);
  auto coeffs = TT.decompose_by_left(chi);
  if (!coeffs[n].equal(d.A.one()))
    throw Error("action", "characteristic polynomial is not monic");
  return coeffs;
}

std::vector<Element> GroupAction::sigmas(const Element& a) const {
  auto c = char_poly(a);
  const int n = rank();
  std::vector<Element> s;
  s.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    Element x = c[n - i];
    s.push_back(i % 2 == 0 ? x : x.neg());
  }
  return s;
}

bool GroupAction::cayley_hamilton_holds(const Element& a) const {
  return eval_poly(char_poly(a), a).is_zero();
}

Element GroupAction::orbit_product(const Element& a) const {
  const auto& d = data();
  if (d.kind != ActionKind::Constant)
    throw Error("action", "orbit product needs a constant action");
  Element acc = d.A.one();
  for (int g = 0; g < d.G.order(); ++g) acc = acc.mul(d.autos[g].apply(a));
  return acc;
}

std::vector<Element> GroupAction::invariant_basis(Exec exec) const {
  const auto& d = data();
  Mat m = mat_of(d.A, d.HA.prod, [&](const Element& x) {
    return coact(x).sub(d.HA.pure(d.H.one(), x));
  });
  return kernel_elements(d.A, m, exec);
}

Element eval_poly(const std::vector<Element>& coeffs, const Element& at) {
  if (coeffs.empty()) throw Error("action", "empty polynomial");
  Element acc = coeffs.back();
  for (std::size_t i = coeffs.size() - 1; i-- > 0;)
    acc = acc.mul(at).add(coeffs[i]);
  return acc;
}

std::vector<Element> poly_mul(const std::vector<Element>& a,
                              const std::vector<Element>& b) {
  if (a.empty() || b.empty()) throw Error("action", "empty polynomial");
  const Algebra& A = a[0].parent();
  std::vector<Element> out(a.size() + b.size() - 1, A.zero());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i + j] = out[i + j].add(a[i].mul(b[j]));
  return out;
}

std::vector<Element> poly_pow(const std::vector<Element>& a, int e) {
  if (e < 0) throw Error("action", "negative polynomial power");
  if (a.empty()) throw Error("action", "empty polynomial");
  std::vector<Element> acc{a[0].parent().one()};
  std::vector<Element> base = a;
  while (e > 0) {
    if (e & 1) acc = poly_mul(acc, base);
    base = poly_mul(base, base);
    e >>= 1;
  }
  return acc;
}

GroupAction subgroup_action(const GroupAction& a,
                            const std::vector<int>& elements) {
  const ConstantGroup& G = a.group();
  if (!G.is_subgroup(elements))
    throw Error("action", "element set is not a subgroup");
  std::vector<int> where(G.order(), -1);
  for (std::size_t i = 0; i < elements.size(); ++i) where[elements[i]] = (int)i;
  std::vector<std::string> names;
  std::vector<std::vector<int>> table(elements.size(),
                                      std::vector<int>(elements.size()));
  for (std::size_t i = 0; i < elements.size(); ++i) {
    names.push_back(G.name(elements[i]));
    for (std::size_t j = 0; j < elements.size(); ++j)
      table[i][j] = where[G.mul(elements[i], elements[j])];
  }
  ConstantGroup S = ConstantGroup::from_table(
      G.describe() + " subgroup", std::move(names), std::move(table),
      where[G.identity()]);
  std::vector<ElementHom> autos;
  for (int e : elements) autos.push_back(a.auto_of(e));
  return GroupAction::constant(S, a.space(), std::move(autos));
}

}  // namespace invlab
