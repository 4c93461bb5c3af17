#include "invlab/invariants.hpp"

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace invlab {

namespace {

// Basis rows sorted graded-lex ascending by leading monomial, the scan
// order for greedy extraction and witness reporting.
std::vector<Element> ascending_basis(const Span& s) {
  std::vector<Element> b = s.basis();
  std::sort(b.begin(), b.end(), [](const Element& x, const Element& y) {
    return x.leading_index() < y.leading_index();
  });
  return b;
}

Span invariant_span(const GroupAction& act, Exec exec) {
  return Span::of(act.space(), act.invariant_basis(exec), exec);
}

Span sigma_span(const GroupAction& act, Exec exec) {
  const Algebra& A = act.space();
  std::vector<std::vector<Element>> per(A.dim());
  const bool par = use_parallel(exec, A.dim());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) \
    num_threads(get_jobs() ? get_jobs() : 1) if (par)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(A.dim()); ++i)
    per[i] = act.sigmas(A.basis_element(static_cast<std::uint32_t>(i)));
  (void)par;
  std::vector<Element> gens;
  for (auto& sig : per)
    for (auto& s : sig)
      if (!s.is_zero()) gens.push_back(std::move(s));
  return algebra_closure(A, gens, exec);
}

}  // namespace

std::vector<Element> greedy_generators(const Span& s, Exec exec) {
  const Algebra& A = s.algebra();
  std::vector<Element> kept;
  Span closure = algebra_closure(A, {}, exec);  // the base line, span of 1
  for (const Element& b : ascending_basis(s)) {
    if (closure.contains(b)) continue;
    kept.push_back(b);
    closure = algebra_closure(A, kept, exec);
  }
  if (!closure.equals(s.joined({A.one()}, exec)))
    throw Error("invariants", "span is not multiplicatively closed");
  return kept;
}

SubalgebraSpan invariant_subring(const GroupAction& act, Exec exec) {
  SubalgebraSpan out;
  out.span = invariant_span(act, exec);
  out.generators = greedy_generators(out.span, exec);
  out.label = "Invariants";
  return out;
}

SubalgebraSpan sigma_subalgebra(const GroupAction& act, Exec exec) {
  SubalgebraSpan out;
  out.span = sigma_span(act, exec);
  out.generators = greedy_generators(out.span, exec);
  out.label = "SymmetricFunctions";
  return out;
}

ComparisonReport compare_invariants(const GroupAction& act, Exec exec) {
  Span inv = invariant_span(act, exec);
  Span sig = sigma_span(act, exec);
  if (!inv.contains_all(sig))
    throw Error("invariants", "symmetric functions escaped the invariant ring");
  ComparisonReport r;
  r.invariant_rank = inv.rank();
  r.sigma_rank = sig.rank();
  r.equal = inv.equals(sig);
  if (!r.equal) r.witness = inv.first_not_in(sig);
  return r;
}

bool gabber_power_check(const GroupAction& act, const Element& a,
                        const Span& sigma) {
  if (!act.is_invariant(a))
    throw Error("invariants", "power check requires an invariant element");
  const std::int64_t p = act.space().base().residue_characteristic();
  std::int64_t n = act.rank(), pr = 1;
  if (p >= 2)
    while (n % p == 0) {
      n /= p;
      pr *= p;
    }
  return sigma.contains(a.pow(pr));
}

bool gabber_power_check(const GroupAction& act, const Element& a, Exec exec) {
  return gabber_power_check(act, a, sigma_span(act, exec));
}

QuotientActionData quotient_action(const GroupAction& act,
                                   const std::vector<int>& H) {
  if (act.kind() != ActionKind::Constant)
    throw Error("invariants", "quotient action needs a constant action");
  const ConstantGroup& G = act.group();
  if (!G.is_normal(H))
    throw Error("invariants", "quotient needs a normal subgroup");
  const Algebra& A = act.space();
  auto acts_as_identity = [&](int g) {
    for (std::size_t gid = 0; gid < A.var_count(); ++gid) {
      Element v = A.var(A.var_name(gid));
      if (!act.act(g, v).equal(v)) return false;
    }
    for (std::uint32_t c = 0; c < A.component_count(); ++c)
      if (!act.act(g, A.unit(c)).equal(A.unit(c))) return false;
    return true;
  };
  for (int h : H)
    if (!acts_as_identity(h))
      throw Error("invariants", "subgroup does not act trivially");
  GroupQuotient q = G.quotient(H);
  auto reps = G.coset_reps(H);
  // Representative independence: members of one coset share the same
  // automorphism once H acts trivially; spot-check every element.
  for (int g = 0; g < G.order(); ++g) {
    const int rep = reps[static_cast<std::size_t>(q.proj[g])];
    for (std::size_t gid = 0; gid < A.var_count(); ++gid) {
      Element v = A.var(A.var_name(gid));
      if (!act.act(g, v).equal(act.act(rep, v)))
        throw Error("invariants", "coset members act differently");
    }
  }
  std::vector<ElementHom> autos;
  autos.reserve(reps.size());
  for (int r : reps) autos.push_back(act.auto_of(r));
  QuotientActionData out;
  out.action = GroupAction::constant(q.group, A, std::move(autos));
  out.quotient = std::move(q.group);
  out.proj = std::move(q.proj);
  return out;
}

ExtractionResult quotient_extraction(const GroupAction& act,
                                     const std::vector<int>& H,
                                     const Element& a) {
  QuotientActionData q = quotient_action(act, H);
  const Algebra& A = act.space();
  const BaseRing& R = A.base();
  const int n = act.rank();
  const int m = static_cast<int>(H.size());
  const int l = n / m;
  Scalar ms = R.from_int(m);
  if (!R.is_unit(ms))
    throw Error("invariants", "extraction requires m invertible");
  const Scalar minv = R.inv(ms);
  std::vector<Element> cg = act.char_poly(a);
  std::vector<Element> alpha(static_cast<std::size_t>(l) + 1, A.zero());
  alpha[static_cast<std::size_t>(l)] = A.one();
  for (int u = l - 1; u >= 0; --u) {
    const int j = l * (m - 1) + u;
    // Every ordered m-tuple summing to j with entries in [0, l] either
    // contains an entry u (then all others are l) or has all entries above
    // u; the first family contributes m * alpha_u, the second is known.
    Element S = A.zero();
    std::function<void(int, int, const Element&)> rec =
        [&](int pos, int rem, const Element& prod) {
          if (pos == m) {
            if (rem == 0) S = S.add(prod);
            return;
          }
          const int left = m - pos - 1;
          for (int i = u + 1; i <= l && i <= rem; ++i) {
            if (rem - i > left * l || rem - i < left * (u + 1)) continue;
            rec(pos + 1, rem - i, prod.mul(alpha[static_cast<std::size_t>(i)]));
          }
        };
    rec(0, j, A.one());
    alpha[static_cast<std::size_t>(u)] =
        cg[static_cast<std::size_t>(j)].sub(S).scaled(minv);
  }
  std::vector<Element> pw = poly_pow(alpha, m);
  if (pw.size() != cg.size())
    throw Error("invariants", "extraction degree mismatch");
  for (std::size_t i = 0; i < cg.size(); ++i)
    if (!pw[i].equal(cg[i]))
      throw Error("invariants",
                  "extraction fails to reproduce the full polynomial");
  std::vector<Element> direct = q.action.char_poly(a);
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (!direct[i].equal(alpha[i]))
      throw Error("invariants", "extraction disagrees with the quotient action");
  ExtractionResult res;
  res.coeffs = std::move(alpha);
  res.sigmas.reserve(static_cast<std::size_t>(l));
  for (int i = 1; i <= l; ++i) {
    Element s = res.coeffs[static_cast<std::size_t>(l - i)];
    if (i % 2 == 1) s = s.neg();
    res.sigmas.push_back(std::move(s));
  }
  return res;
}

InducedAction induce(const ConstantGroup& G,
                     const std::vector<int>& H_elements,
                     const GroupAction& inner) {
  if (inner.kind() != ActionKind::Constant)
    throw Error("invariants", "induction needs a constant inner action");
  if (!G.is_subgroup(H_elements))
    throw Error("invariants", "induction needs a subgroup");
  const ConstantGroup& Hg = inner.group();
  const int hsz = static_cast<int>(H_elements.size());
  if (Hg.order() != hsz)
    throw Error("invariants", "inner group order mismatch");
  std::vector<int> where(static_cast<std::size_t>(G.order()), -1);
  for (int i = 0; i < hsz; ++i) where[static_cast<std::size_t>(H_elements[i])] = i;
  for (int i = 0; i < hsz; ++i)
    for (int j = 0; j < hsz; ++j)
      if (where[static_cast<std::size_t>(
              G.mul(H_elements[static_cast<std::size_t>(i)],
                    H_elements[static_cast<std::size_t>(j)]))] != Hg.mul(i, j))
        throw Error("invariants", "inner group does not match the subgroup");

  const Algebra& C = inner.space();
  InducedAction ind;
  ind.G = G;
  ind.H_elements = H_elements;
  ind.inner = inner;
  ind.cosets = G.cosets(H_elements);
  ind.reps = G.coset_reps(H_elements);
  const std::size_t slots = ind.cosets.size();
  ind.algebra = Algebra::product(std::vector<Algebra>(slots, C));
  const Algebra& A = ind.algebra;
  const std::size_t vc = C.var_count(), cc = C.component_count();

  std::vector<int> owner(static_cast<std::size_t>(G.order()), -1);
  for (std::size_t s = 0; s < slots; ++s)
    for (int x : ind.cosets[s]) owner[static_cast<std::size_t>(x)] = static_cast<int>(s);

  ind.slot_embed.reserve(slots);
  for (std::size_t s = 0; s < slots; ++s) {
    ElementHom e;
    e.source = C;
    e.target = A;
    for (std::size_t k = 0; k < vc; ++k)
      e.var_images.push_back(A.var(A.var_name(s * vc + k)));
    for (std::size_t c = 0; c < cc; ++c)
      e.unit_images.push_back(A.unit(static_cast<std::uint32_t>(s * cc + c)));
    ind.slot_embed.push_back(std::move(e));
  }

  std::vector<ElementHom> autos;
  autos.reserve(static_cast<std::size_t>(G.order()));
  for (int g = 0; g < G.order(); ++g) {
    std::vector<Element> vimg(A.var_count(), A.zero());
    std::vector<std::uint32_t> perm(A.component_count());
    for (std::size_t s = 0; s < slots; ++s) {
      const int t = G.mul(g, ind.reps[s]);
      const int j = owner[static_cast<std::size_t>(t)];
      const int h = G.mul(G.inv(ind.reps[static_cast<std::size_t>(j)]), t);
      const int hi = where[static_cast<std::size_t>(h)];
      for (std::size_t k = 0; k < vc; ++k)
        vimg[s * vc + k] = ind.slot_embed[static_cast<std::size_t>(j)].apply(
            inner.act(hi, C.var(C.var_name(k))));
      for (std::size_t c = 0; c < cc; ++c)
        perm[s * cc + c] =
            static_cast<std::uint32_t>(static_cast<std::size_t>(j) * cc + c);
    }
    autos.push_back(endomorphism(A, vimg, perm));
  }
  ind.action = GroupAction::constant(G, A, std::move(autos));
  ind.action.verify();

  ind.origin_projection.source = A;
  ind.origin_projection.target = C;
  for (std::size_t gid = 0; gid < A.var_count(); ++gid)
    ind.origin_projection.var_images.push_back(
        gid < vc ? C.var(C.var_name(gid)) : C.zero());
  for (std::size_t c = 0; c < A.component_count(); ++c)
    ind.origin_projection.unit_images.push_back(
        c < cc ? C.unit(static_cast<std::uint32_t>(c)) : C.zero());
  return ind;
}

bool induced_identities_check(const InducedAction& ind, const Element& f,
                              Exec exec) {
  const Algebra& C = ind.inner.space();
  const Algebra& A = ind.algebra;
  if (!f.parent().same(C))
    throw Error("invariants",
                "identity check takes an element of the inner algebra");
  const int m = ind.inner.rank();
  std::vector<Element> chiH = ind.inner.char_poly(f);
  std::vector<Element> rhs{A.one()};
  for (std::size_t s = 0; s < ind.reps.size(); ++s) {
    std::vector<Element> factor(static_cast<std::size_t>(m) + 1, A.zero());
    factor[static_cast<std::size_t>(m)] = A.one();
    for (int k = 0; k < m; ++k)
      factor[static_cast<std::size_t>(k)] =
          ind.slot_embed[s].apply(chiH[static_cast<std::size_t>(k)]);
    rhs = poly_mul(rhs, factor);
  }
  std::vector<Element> lhs = ind.action.char_poly(ind.slot_embed[0].apply(f));
  if (lhs.size() != rhs.size()) return false;
  for (std::size_t i = 0; i < lhs.size(); ++i)
    if (!lhs[i].equal(rhs[i])) return false;

  Span sG = sigma_span(ind.action, exec);
  Span sH = sigma_span(ind.inner, exec);
  std::vector<Element> mapped;
  mapped.reserve(sG.rank());
  for (const Element& b : sG.basis())
    mapped.push_back(ind.origin_projection.apply(b));
  return Span::of(C, mapped, exec).equals(sH);
}

bool induced_invariants_isomorphic(const InducedAction& ind, Exec exec) {
  Span AG = invariant_span(ind.action, exec);
  Span CH = invariant_span(ind.inner, exec);
  std::vector<Element> img;
  img.reserve(AG.rank());
  for (const Element& b : AG.basis())
    img.push_back(ind.origin_projection.apply(b));
  Span phiAG = Span::of(ind.inner.space(), img, exec);
  return phiAG.equals(CH) && AG.length() == CH.length();
}

}  // namespace invlab
