#include "invlab/base_change.hpp"

#include <algorithm>

namespace invlab {

namespace {

std::vector<Scalar> sample_scalars(const BaseRing& R) {
  std::vector<Scalar> s;
  for (std::int64_t n : {0, 1, -1, 2, 3, 5, 7}) s.push_back(R.from_int(n));
  if (R.characteristic() > 1) s.push_back(R.from_int(R.characteristic() - 1));
  if (R.is_local() && !R.is_field()) s.push_back(R.pi_pow(1));
  return s;
}

// Constant embedding of a field into one of its extensions.
Scalar embed_const(const BaseRing& target, const Scalar& a) {
  if (target.kind() != RingKind::Extension)
    throw Error("base", "constant embedding needs an extension target");
  Scalar zero = target.zero();
  if (target.ext_base().is_zero(a)) return zero;
  return Scalar(Scalar::Ext{a});
}

std::int64_t int_rep(const Scalar& a) {
  return a.holds_int() ? a.i() : a.z().get_si();
}

}  // namespace

void BaseChange::verify() const {
  if (!source.valid() || !target.valid() || !map)
    throw Error("base", "incomplete base change");
  auto s = sample_scalars(source);
  if (!target.is_zero(map(source.zero())) ||
      !target.equal(map(source.one()), target.one()))
    throw Error("base", "map does not fix 0 and 1");
  bool kills = false;
  for (const Scalar& a : s) {
    if (!source.is_zero(a) && target.is_zero(map(a))) kills = true;
    for (const Scalar& b : s) {
      if (!target.equal(map(source.add(a, b)), target.add(map(a), map(b))) ||
          !target.equal(map(source.mul(a, b)), target.mul(map(a), map(b))))
        throw Error("base", "map is not a ring homomorphism");
    }
  }
  if (kills && flat)
    throw Error("base", "a flat map cannot kill a scalar");
  if (source.is_field() && !flat)
    throw Error("base", "every algebra over a field is flat");
}

BaseChange bc_identity(const BaseRing& R) {
  return {R, R, [](const Scalar& a) { return a; }, true, "identity"};
}

BaseChange bc_residue(const BaseRing& R) {
  if (!R.is_local()) throw Error("base", "residue quotient needs a local base");
  BaseRing res = R.residue_field();
  return {R, res, [R](const Scalar& a) { return R.to_residue(a); },
          R.is_field(), "residue-reduction"};
}

BaseChange bc_reduction(const BaseRing& source, const BaseRing& target) {
  bool src_ok = source.kind() == RingKind::ResidueRing ||
                source.kind() == RingKind::PrimeField;
  bool tgt_ok = target.kind() == RingKind::ResidueRing ||
                target.kind() == RingKind::PrimeField;
  if (!src_ok || !tgt_ok || source.modulus() % target.modulus() != 0)
    throw Error("base", "reduction needs compatible moduli");
  return {source, target,
          [target](const Scalar& a) { return target.from_int(int_rep(a)); },
          source.modulus() == target.modulus(), "modulus-reduction"};
}

BaseChange bc_nilpotent(const BaseRing& field, int order) {
  if (!field.is_field())
    throw Error("base", "nilpotent extension needs a field");
  BaseRing tgt = BaseRing::nilpotent_extension(field, order);
  return {field, tgt,
          [tgt](const Scalar& a) { return embed_const(tgt, a); }, true,
          order == 2 ? "dual-numbers" : "length-" + std::to_string(order)};
}

BaseChange bc_field_ext(const BaseRing& field,
                        std::vector<Scalar> modulus_low) {
  BaseRing tgt = BaseRing::field_extension(field, std::move(modulus_low));
  return {field, tgt,
          [tgt](const Scalar& a) { return embed_const(tgt, a); }, true,
          "field-extension"};
}

BaseChange bc_quadratic_ext(const BaseRing& field) {
  if (field.kind() != RingKind::PrimeField)
    throw Error("base", "quadratic extension search needs a prime field");
  std::int64_t p = field.modulus();
  for (std::int64_t b = 0; b < p; ++b)
    for (std::int64_t c = 1; c < p; ++c) {
      bool has_root = false;
      for (std::int64_t x = 0; x < p && !has_root; ++x)
        if ((x * x + b * x + c) % p == 0) has_root = true;
      if (!has_root)
        return bc_field_ext(field, {field.from_int(c), field.from_int(b)});
    }
  throw Error("base", "no irreducible quadratic found");
}

BaseChange bc_compose(const BaseChange& f, const BaseChange& g) {
  if (!f.target.same(g.source))
    throw Error("base", "composition mismatch");
  auto fm = f.map, gm = g.map;
  return {f.source, g.target,
          [fm, gm](const Scalar& a) { return gm(fm(a)); }, f.flat && g.flat,
          f.label + "+" + g.label};
}

std::vector<BaseChange> stock_base_changes(const BaseRing& R) {
  std::vector<BaseChange> out;
  out.push_back(bc_identity(R));
  switch (R.kind()) {
    case RingKind::PrimeField:
      out.push_back(bc_quadratic_ext(R));
      out.push_back(bc_nilpotent(R, 2));
      out.push_back(bc_nilpotent(R, 3));
      break;
    case RingKind::Rationals:
      out.push_back(bc_nilpotent(R, 2));
      break;
    case RingKind::ResidueRing:
      out.push_back(bc_residue(R));
      break;
    default:
      break;
  }
  return out;
}

Algebra transported_algebra(const Algebra& A, const BaseChange& bc) {
  std::vector<ComponentSpec> specs;
  for (std::size_t c = 0; c < A.component_count(); ++c)
    specs.push_back(A.component(c));
  return Algebra::from_components(bc.target, std::move(specs),
                                  A.default_truncation());
}

Element map_coefficients(const Algebra& target_algebra, const Element& e,
                         const BaseChange& bc) {
  Element out = target_algebra.zero();
  for (const auto& [i, c] : e.terms())
    out = out.add(target_algebra.basis_element(i).scaled(bc.map(c)));
  return out;
}

GroupAction tensor_action(const GroupAction& act, const BaseChange& bc) {
  const Algebra& A = act.space();
  Algebra Ap = transported_algebra(A, bc);
  auto map_hom = [&](const ElementHom& h) {
    std::vector<Element> vimg, uimg;
    for (const Element& v : h.var_images)
      vimg.push_back(map_coefficients(Ap, v, bc));
    for (const Element& u : h.unit_images)
      uimg.push_back(map_coefficients(Ap, u, bc));
    return ElementHom{Ap, Ap, std::move(vimg), std::move(uimg), {}};
  };
  auto map_derivation = [&] {
    std::vector<Element> d;
    for (const Element& v : act.derivation())
      d.push_back(map_coefficients(Ap, v, bc));
    return d;
  };
  switch (act.kind()) {
    case ActionKind::Constant: {
      std::vector<ElementHom> autos;
      for (int g = 0; g < act.group().order(); ++g)
        autos.push_back(map_hom(act.auto_of(g)));
      return GroupAction::constant(act.group(), Ap, std::move(autos));
    }
    case ActionKind::Flow:
      return GroupAction::flow(Ap, map_derivation());
    case ActionKind::FlowTimesConstant: {
      std::vector<ElementHom> autos;
      for (int g = 0; g < act.group().order(); ++g)
        autos.push_back(map_hom(act.auto_of(g)));
      return GroupAction::flow_times_constant(Ap, map_derivation(),
                                              act.group(), std::move(autos));
    }
  }
  throw Error("base", "unknown action kind");
}

std::size_t tensor_length(const Span& s, const BaseChange& bc) {
  const BaseRing& R = bc.source;
  const BaseRing& Rp = bc.target;
  const long L = R.is_field() ? 1 : R.local_length();
  const long Lp = Rp.is_field() ? 1 : Rp.local_length();
  long k = -1;  // -1: pi maps to zero (or no pi), rows become free
  if (!R.is_field()) {
    Scalar x = bc.map(R.pi_pow(1));
    if (!Rp.is_zero(x)) k = Rp.val(x);
  }
  std::size_t total = 0;
  for (int v : s.pivot_valuations())
    total += static_cast<std::size_t>(k < 0 ? Lp
                                            : std::min(Lp, k * (L - v)));
  return total;
}

ComparisonMaps comparison_maps(const GroupAction& act, const BaseChange& bc,
                               Exec exec) {
  if (!act.space().base().same(bc.source))
    throw Error("base", "action base does not match the base change source");
  bc.verify();
  ComparisonMaps cm;
  cm.tensored = tensor_action(act, bc);
  cm.inv_source = invariant_subring(act, exec).span;
  cm.sigma_source = sigma_subalgebra(act, exec).span;
  cm.inv_target = invariant_subring(cm.tensored, exec).span;
  cm.sigma_target = sigma_subalgebra(cm.tensored, exec).span;
  const Algebra& Ap = cm.tensored.space();
  auto image_of = [&](const Span& s) {
    std::vector<Element> gens;
    for (const Element& b : s.basis())
      gens.push_back(map_coefficients(Ap, b, bc));
    return Span::of(Ap, gens, exec);
  };
  cm.phi_image = image_of(cm.sigma_source);
  cm.psi_image = image_of(cm.inv_source);
  cm.sigma_tensor_length = tensor_length(cm.sigma_source, bc);
  cm.inv_tensor_length = tensor_length(cm.inv_source, bc);
  cm.phi_surjective = cm.phi_image.equals(cm.sigma_target);
  cm.phi_injective = cm.phi_image.length() == cm.sigma_tensor_length;
  cm.psi_surjective = cm.psi_image.equals(cm.inv_target);
  cm.psi_injective = cm.psi_image.length() == cm.inv_tensor_length;
  return cm;
}

bool radicial_shadow_check(const GroupAction& act, const BaseChange& bc,
                           Exec exec) {
  const BaseRing& R = bc.source;
  if (R.kind() != RingKind::PrimeField && R.kind() != RingKind::ResidueRing)
    throw Error("base", "radicial shadow needs a p-power base");
  bool quotient = bc.target.same(R) || bc.target.same(R.residue_field());
  if (!quotient)
    throw Error("base", "radicial shadow needs a quotient base change");
  const std::int64_t p = R.residue_characteristic();
  std::int64_t pr = 1;
  for (int n = act.rank(); n % p == 0; n /= static_cast<int>(p)) pr *= p;

  ComparisonMaps cm = comparison_maps(act, bc, exec);
  for (const Element& b : cm.inv_target.basis())
    if (!cm.psi_image.contains(b.pow(pr))) return false;

  auto src_basis = cm.inv_source.basis();
  const std::size_t r0 = src_basis.size();
  const Algebra& Ap = cm.tensored.space();
  Mat m(bc.target, Ap.dim(), r0);
  for (std::size_t j = 0; j < r0; ++j) {
    auto coords = to_coords(map_coefficients(Ap, src_basis[j], bc));
    for (std::size_t i = 0; i < coords.size(); ++i) m.at(i, j) = coords[i];
  }
  Mat ker = kernel(m, exec);
  if (ker.rows == 0) return true;

  // Multiplication table of the source invariants, coefficients mapped.
  std::vector<std::vector<std::vector<Scalar>>> tab(
      r0, std::vector<std::vector<Scalar>>(r0));
  for (std::size_t i = 0; i < r0; ++i)
    for (std::size_t j = 0; j < r0; ++j) {
      auto q = cm.inv_source.solve(src_basis[i].mul(src_basis[j]));
      if (!q) throw Error("base", "invariant span is not closed");
      std::vector<Scalar> row;
      for (const Scalar& s : *q) row.push_back(bc.map(s));
      tab[i][j] = std::move(row);
    }
  const BaseRing& Rp = bc.target;
  auto mul_vec = [&](const std::vector<Scalar>& a,
                     const std::vector<Scalar>& b) {
    std::vector<Scalar> out(r0, Rp.zero());
    for (std::size_t i = 0; i < r0; ++i) {
      if (Rp.is_zero(a[i])) continue;
      for (std::size_t j = 0; j < r0; ++j) {
        if (Rp.is_zero(b[j])) continue;
        Scalar cij = Rp.mul(a[i], b[j]);
        for (std::size_t k = 0; k < r0; ++k)
          out[k] = Rp.add(out[k], Rp.mul(cij, tab[i][j][k]));
      }
    }
    return out;
  };
  for (std::size_t r = 0; r < ker.rows; ++r) {
    std::vector<Scalar> c(r0);
    for (std::size_t j = 0; j < r0; ++j) c[j] = ker.at(r, j);
    std::vector<Scalar> acc = c;
    for (std::int64_t e = 1; e < pr; ++e) acc = mul_vec(acc, c);
    if (bc.target.same(R)) {
      // Identity-style quotient: the tensor is the module itself, so test
      // the represented element.
      Element e = act.space().zero();
      for (std::size_t j = 0; j < r0; ++j)
        e = e.add(src_basis[j].scaled(acc[j]));
      if (!e.is_zero()) return false;
    } else {
      for (const Scalar& s : acc)
        if (!Rp.is_zero(s)) return false;
    }
  }
  return true;
}

bool exchange_criterion(const GroupAction& act, Exec exec) {
  const BaseRing& R = act.space().base();
  if (!R.is_local())
    throw Error("base", "exchange criterion needs a local base");
  BaseChange to_res = bc_residue(R);
  if (!comparison_maps(act, to_res, exec).psi_surjective) return false;
  BaseRing omega = R.residue_field();
  for (int order : {2, 3}) {
    BaseChange ext = bc_compose(to_res, bc_nilpotent(omega, order));
    ComparisonMaps cm = comparison_maps(act, ext, exec);
    if (!(cm.psi_surjective && cm.psi_injective))
      throw Error("framework",
                  "exchange criterion held but invariants failed to commute");
  }
  return true;
}

ComparisonMaps quotient_commutes(const SmoothPointModel& m,
                                 const BaseChange& bc, Exec exec) {
  return comparison_maps(m.action, bc, exec);
}

ComparisonMaps quotient_commutes(const NodeModel& m, const BaseChange& bc,
                                 Exec exec) {
  require_node_hypotheses(m);
  return comparison_maps(m.action, bc, exec);
}

}  // namespace invlab
