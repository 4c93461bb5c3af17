#include "invlab/local_models.hpp"

#include <algorithm>

namespace invlab {

namespace {

// -1: zero or constant; 0: supported on the x-branch; 1: on the y-branch;
// -2: mixed or with a constant term.
int branch_of(const Algebra& A, const Element& e) {
  bool on_x = false, on_y = false, has_const = false;
  for (const auto& [i, c] : e.terms()) {
    const BasisKey& k = A.basis_key(i);
    if (k.exps[0] > 0)
      on_x = true;
    else if (k.exps[1] > 0)
      on_y = true;
    else
      has_const = true;
  }
  if (!on_x && !on_y) return -1;
  if (has_const || (on_x && on_y)) return -2;
  return on_x ? 0 : 1;
}

bool same_span_below(const Span& a, const Span& b, int bound, Exec exec) {
  return a.projected_below_degree(bound, exec)
      .equals(b.projected_below_degree(bound, exec));
}

}  // namespace

SmoothPointModel smooth_model(GroupAction action) {
  const Algebra& A = action.space();
  if (A.component_count() != 1 || A.var_count() != 1)
    throw Error("local", "smooth model needs one variable");
  action.verify();
  SmoothPointModel m{A, action, static_cast<int>(A.dim())};
  Element t = A.var(A.var_name(0));
  if (action.norm(t).valuation() != action.rank())
    throw Error("local", "action not generically free");
  return m;
}

SmoothReport smooth_invariants_check(const SmoothPointModel& m, Exec exec) {
  const Algebra& A = m.A;
  Element t = A.var(A.var_name(0));
  SmoothReport rep;
  rep.norm = m.action.norm(t);
  rep.valuation = rep.norm.valuation();
  rep.certified_degree = m.N - m.action.rank() + 1;
  SubalgebraSpan inv = invariant_subring(m.action, exec);
  rep.invariant_rank = inv.span.rank();
  Span gen = algebra_closure(A, {rep.norm}, exec);
  if (!inv.span.contains_all(gen))
    throw Error("local", "norm escaped the invariant ring");
  Span inv_cut = inv.span.projected_below_degree(rep.certified_degree, exec);
  Span gen_cut = gen.projected_below_degree(rep.certified_degree, exec);
  rep.equal = inv_cut.equals(gen_cut);
  if (!rep.equal) rep.witness = inv_cut.first_not_in(gen_cut);
  return rep;
}

Algebra node_algebra(const BaseRing& R, int N, const std::string& x,
                     const std::string& y) {
  std::vector<std::string> rels = {x + "*" + y, x + "^" + std::to_string(N),
                                   y + "^" + std::to_string(N)};
  return Algebra::single(R, {x, y}, rels, N, "node");
}

NodeModel node_model(GroupAction action) {
  const Algebra& A = action.space();
  if (action.kind() != ActionKind::Constant)
    throw Error("local", "node model needs a constant action");
  if (A.component_count() != 1 || A.var_count() != 2)
    throw Error("local", "node model needs exactly two branch variables");
  Element x = A.var(A.var_name(0)), y = A.var(A.var_name(1));
  if (!x.mul(y).is_zero())
    throw Error("local", "branch variables must multiply to zero");
  for (int g = 0; g < action.group().order(); ++g) {
    int bx = branch_of(A, action.act(g, x));
    int by = branch_of(A, action.act(g, y));
    if (!((bx == 0 && by == 1) || (bx == 1 && by == 0)))
      throw Error("local", action.group().name(g) +
                               " does not preserve or swap the branches");
  }
  action.verify();
  NodeModel m{A, action, static_cast<int>((A.dim() + 1) / 2)};
  return m;
}

NodeGroupData node_decompose(const NodeModel& m) {
  const Algebra& A = m.A;
  const ConstantGroup& G = m.action.group();
  Element x = A.var(A.var_name(0)), y = A.var(A.var_name(1));
  NodeGroupData d;
  for (int g = 0; g < G.order(); ++g) {
    if (branch_of(A, m.action.act(g, x)) == 0)
      d.g0.push_back(g);
    else if (d.psi < 0)
      d.psi = g;
  }
  if (static_cast<int>(d.g0.size()) != G.order() &&
      2 * static_cast<int>(d.g0.size()) != G.order())
    throw Error("local", "branch-fixing subgroup has index > 2");
  auto record = [&](const Element& img, std::vector<Element>& images) {
    for (const Element& seen : images)
      if (seen.equal(img)) return;
    images.push_back(img);
  };
  for (int g : d.g0) {
    Element gx = m.action.act(g, x), gy = m.action.act(g, y);
    if (gx.equal(x)) d.delta_x.push_back(g);
    if (gy.equal(y)) d.delta_y.push_back(g);
    record(gx, d.h_images);
    record(gy, d.k_images);
  }
  if (d.delta_x.size() * d.h_images.size() != d.g0.size() ||
      d.delta_y.size() * d.k_images.size() != d.g0.size())
    throw Error("local", "branch projection is not a homomorphism");
  return d;
}

namespace {

void gate_branch_kernels(const NodeModel& m, const NodeGroupData& d) {
  const BaseRing& R = m.A.base();
  if (!R.is_unit(R.from_int(static_cast<std::int64_t>(d.delta_x.size()))) ||
      !R.is_unit(R.from_int(static_cast<std::int64_t>(d.delta_y.size()))))
    throw Error("gate", "branch kernel orders must be invertible in the base");
}

}  // namespace

void require_node_hypotheses(const NodeModel& m) {
  gate_branch_kernels(m, node_decompose(m));
}

namespace {

Element product_of(const Algebra& A, const std::vector<Element>& xs) {
  Element p = A.one();
  for (const Element& e : xs) p = p.mul(e);
  return p;
}

}  // namespace

NodeReport node_invariants_check(const NodeModel& m, Exec exec) {
  const Algebra& A = m.A;
  NodeGroupData d = node_decompose(m);
  gate_branch_kernels(m, d);
  NodeReport rep;
  rep.u = product_of(A, d.h_images);
  rep.v = product_of(A, d.k_images);
  rep.uv_zero = rep.u.mul(rep.v).is_zero();
  rep.certified_degree = m.N - m.action.rank() + 1;
  Span ag0 = invariant_subring(subgroup_action(m.action, d.g0), exec).span;
  Span gen_uv = algebra_closure(A, {rep.u, rep.v}, exec);
  if (!ag0.contains_all(gen_uv))
    throw Error("local", "branch norms escaped the invariant ring");
  rep.g0_invariants_match =
      same_span_below(ag0, gen_uv, rep.certified_degree, exec);
  if (d.psi >= 0) {
    Element w = rep.u.add(m.action.act(d.psi, rep.u));
    Span ag = invariant_subring(m.action, exec).span;
    Span gen_w = algebra_closure(A, {w}, exec);
    if (!ag.contains_all(gen_w))
      throw Error("local", "glued norm escaped the invariant ring");
    rep.full_invariants_match =
        same_span_below(ag, gen_w, rep.certified_degree, exec);
    rep.quotient_shape = "smooth";
  } else {
    rep.full_invariants_match = rep.g0_invariants_match;
    rep.quotient_shape = "node";
  }
  return rep;
}

bool node_sigma_check(const NodeModel& m) {
  const Algebra& A = m.A;
  NodeGroupData d = node_decompose(m);
  if (d.psi < 0) throw Error("local", "no branch swap");
  Element x = A.var(A.var_name(0));
  Element nm = A.one();
  for (int g : d.g0) nm = nm.mul(m.action.act(g, x));
  Element rhs = nm.add(m.action.act(d.psi, nm));
  std::size_t l = d.g0.size();
  return m.action.sigmas(x)[l].equal(rhs);
}

bool cogenerated_check(const SmoothPointModel& m, Exec exec) {
  int guard = m.N - m.action.rank() + 1;
  Span ag = invariant_subring(m.action, exec).span;
  Span sig = sigma_subalgebra(m.action, exec).span;
  return same_span_below(ag, sig, guard, exec);
}

bool cogenerated_check(const NodeModel& m, Exec exec) {
  gate_branch_kernels(m, node_decompose(m));
  int guard = m.N - m.action.rank() + 1;
  Span ag = invariant_subring(m.action, exec).span;
  Span sig = sigma_subalgebra(m.action, exec).span;
  return same_span_below(ag, sig, guard, exec);
}

}  // namespace invlab
