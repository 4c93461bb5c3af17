#include "invlab/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "invlab/base_change.hpp"
#include "invlab/cohomology.hpp"
#include "invlab/symfunc.hpp"

#ifdef INVLAB_HAVE_OPENMP
#include <omp.h>
#endif

#ifndef INVLAB_SCENARIO_DIR
#define INVLAB_SCENARIO_DIR "scenarios"
#endif

namespace invlab {
namespace {

using json = nlohmann::ordered_json;

Error parse_fail(const std::string& where, const std::string& msg) {
  return Error("parse", where + ": " + msg);
}

const json& field(const json& j, const std::string& key,
                  const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw parse_fail(where, "missing field '" + key + "'");
  return *it;
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw parse_fail(where, "expected a list of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw parse_fail(where, "expected a list of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<int> int_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw parse_fail(where, "expected a list of integers");
  std::vector<int> out;
  for (const auto& e : j) {
    if (!e.is_number_integer())
      throw parse_fail(where, "expected a list of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Builders from the JSON specs

BaseRing build_base(const json& j, const std::string& where) {
  std::string kind = field(j, "kind", where).get<std::string>();
  if (kind == "rationals") return BaseRing::rationals();
  if (kind == "integers") return BaseRing::integers();
  if (kind == "prime_field")
    return BaseRing::prime_field(field(j, "p", where).get<std::int64_t>());
  if (kind == "residue_ring")
    return BaseRing::residue_ring(field(j, "n", where).get<std::int64_t>());
  throw parse_fail(where, "unknown base kind '" + kind + "'");
}

ConstantGroup build_group(const json& j, const std::string& where) {
  if (j.contains("cyclic")) return ConstantGroup::cyclic(j["cyclic"].get<int>());
  if (j.contains("klein_four")) return ConstantGroup::klein_four();
  if (j.contains("symmetric"))
    return ConstantGroup::symmetric(j["symmetric"].get<int>());
  if (j.contains("product")) {
    const json& fs = j["product"];
    if (fs.size() != 2) throw parse_fail(where, "product expects two factors");
    return ConstantGroup::product(build_group(fs[0], where),
                                  build_group(fs[1], where));
  }
  throw parse_fail(where, "unknown group spec");
}

Algebra build_algebra(const BaseRing& base, const json& j, int trunc_override,
                      const std::string& where) {
  if (j.contains("model")) {
    std::string model = j["model"].get<std::string>();
    if (model != "node") throw parse_fail(where, "unknown model '" + model + "'");
    int n = field(j, "truncation", where).get<int>();
    if (trunc_override > 0) n = trunc_override;
    return node_algebra(base, n);
  }
  int n = field(j, "truncation", where).get<int>();
  if (trunc_override > 0) n = trunc_override;
  std::vector<std::string> rels;
  if (j.contains("relations")) rels = string_list(j["relations"], where);
  return Algebra::single(base, string_list(field(j, "vars", where), where),
                         rels, n);
}

std::vector<Element> parse_images(const Algebra& A, const json& j,
                                  const std::string& where) {
  std::vector<Element> out;
  for (const std::string& s : string_list(j, where)) out.push_back(A.parse(s));
  return out;
}

// Expands generator images to one automorphism per group element: cyclic
// groups iterate their generator, klein four composes its two generators,
// anything else must list the images element by element.
std::vector<ElementHom> expand_autos(const Algebra& A, const ConstantGroup& G,
                                     const json& j, const std::string& where) {
  std::vector<ElementHom> autos;
  if (j.contains("images")) {
    for (const auto& imgs : field(j, "images", where))
      autos.push_back(endomorphism(A, parse_images(A, imgs, where)));
    if (static_cast<int>(autos.size()) != G.order())
      throw parse_fail(where, "need one image list per group element");
    return autos;
  }
  if (j.contains("generator")) {
    ElementHom step =
        endomorphism(A, parse_images(A, field(j, "generator", where), where));
    std::vector<Element> cur;
    for (std::size_t v = 0; v < A.var_count(); ++v)
      cur.push_back(A.var(A.var_name(v)));
    for (int g = 0; g < G.order(); ++g) {
      autos.push_back(endomorphism(A, cur));
      for (auto& c : cur) c = step.apply(c);
    }
    return autos;
  }
  if (j.contains("generators")) {
    const json& gens = j["generators"];
    if (gens.size() != 2 || G.order() != 4)
      throw parse_fail(where, "'generators' expects klein four with two lists");
    ElementHom a = endomorphism(A, parse_images(A, gens[0], where));
    ElementHom b = endomorphism(A, parse_images(A, gens[1], where));
    std::vector<Element> ab;
    for (std::size_t v = 0; v < A.var_count(); ++v)
      ab.push_back(a.apply(b.apply(A.var(A.var_name(v)))));
    std::vector<Element> id;
    for (std::size_t v = 0; v < A.var_count(); ++v)
      id.push_back(A.var(A.var_name(v)));
    autos.push_back(endomorphism(A, id));
    autos.push_back(a);
    autos.push_back(b);
    autos.push_back(endomorphism(A, ab));
    return autos;
  }
  throw parse_fail(where, "action needs 'images', 'generator' or 'generators'");
}

GroupAction build_action(const Algebra& A, const json& j,
                         const std::string& where) {
  std::string kind = field(j, "kind", where).get<std::string>();
  if (kind == "constant") {
    ConstantGroup G = build_group(field(j, "group", where), where);
    return GroupAction::constant(G, A, expand_autos(A, G, j, where));
  }
  if (kind == "flow")
    return GroupAction::flow(
        A, parse_images(A, field(j, "derivation", where), where));
  if (kind == "flow_times_constant") {
    ConstantGroup G = build_group(field(j, "group", where), where);
    return GroupAction::flow_times_constant(
        A, parse_images(A, field(j, "derivation", where), where), G,
        expand_autos(A, G, j, where));
  }
  throw parse_fail(where, "unknown action kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Task plumbing

struct Context {
  const Scenario* s = nullptr;
  RunOptions opt;
  BaseRing base;
  Algebra A;
  GroupAction action;

  const std::string& where() const { return s->path; }
  const GroupAction& need_action(const std::string& op) const {
    if (!action.valid())
      throw parse_fail(where(), "task '" + op + "' needs an action");
    return action;
  }
  // The same scenario rebuilt at a different truncation.
  GroupAction action_at(int n) const {
    Algebra B = build_algebra(base, field(s->doc, "algebra", where()), n,
                              where());
    return build_action(B, field(s->doc, "action", where()), where());
  }
};

void fail(TaskResult& r, const std::string& note) {
  if (r.outcome == "fail") return;  // keep the first reason
  r.outcome = "fail";
  r.note = note;
}

void detail(TaskResult& r, const std::string& k, const std::string& v) {
  r.details.emplace_back(k, v);
}
void detail(TaskResult& r, const std::string& k, bool v) {
  r.details.emplace_back(k, v ? "true" : "false");
}
template <typename Int>
  requires(std::is_integral_v<Int> && !std::is_same_v<Int, bool>)
void detail(TaskResult& r, const std::string& k, Int v) {
  r.details.emplace_back(k, std::to_string(v));
}
void artifact(TaskResult& r, const std::string& k, const std::string& v) {
  r.artifacts.emplace_back(k, v);
}

// The expectation block; its presence demands a provenance tag.
const json* expectations(const json& task, const std::string& where) {
  auto it = task.find("expect");
  if (it == task.end()) return nullptr;
  std::string p = field(*it, "provenance", where).get<std::string>();
  if (p != "paper" && p != "trivial" && p != "derived")
    throw parse_fail(where, "provenance must be paper, trivial or derived");
  return &*it;
}

void expect_bool(const json* exp, const std::string& key, bool actual,
                 TaskResult& r) {
  if (!exp || !exp->contains(key)) return;
  bool want = (*exp)[key].get<bool>();
  if (want != actual)
    fail(r, key + ": expected " + (want ? "true" : "false"));
}

void expect_int(const json* exp, const std::string& key, std::int64_t actual,
                TaskResult& r) {
  if (!exp || !exp->contains(key)) return;
  std::int64_t want = (*exp)[key].get<std::int64_t>();
  if (want != actual)
    fail(r, key + ": expected " + std::to_string(want) + ", got " +
                std::to_string(actual));
}

std::string join(const std::vector<std::string>& parts,
                 const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string elements_str(const std::vector<Element>& es) {
  std::vector<std::string> parts;
  for (const Element& e : es) parts.push_back(e.str());
  return join(parts, "; ");
}

std::string poly_str(const std::vector<Element>& coeffs) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    parts.push_back("(" + coeffs[i].str() + ")*T^" + std::to_string(i));
  return join(parts, " + ");
}

Element random_element(const Algebra& A, std::mt19937_64& rng) {
  const BaseRing& k = A.base();
  std::vector<std::pair<std::uint32_t, Scalar>> terms;
  for (std::uint32_t i = 0; i < A.dim(); ++i)
    terms.emplace_back(i, k.random(rng));
  return A.from_terms(std::move(terms));
}

bool poly_equal(const std::vector<Element>& a, const std::vector<Element>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].equal(b[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Task handlers

void op_verify_action(Context& c, const json& t, const json*, TaskResult& r) {
  const GroupAction& act = c.need_action(t["op"].get<std::string>());
  act.verify();
  switch (act.kind()) {
    case ActionKind::Constant: detail(r, "kind", "constant"); break;
    case ActionKind::Flow: detail(r, "kind", "flow"); break;
    case ActionKind::FlowTimesConstant: detail(r, "kind", "flow*constant");
  }
  detail(r, "rank", act.rank());
}

void op_cayley_hamilton(Context& c, const json& t, const json*, TaskResult& r) {
  const GroupAction& act = c.need_action("cayley_hamilton");
  int count = t.value("count", 20);
  std::mt19937_64 rng(t.value("seed", 1));
  for (int i = 0; i < count; ++i) {
    Element a = random_element(act.space(), rng);
    if (!act.cayley_hamilton_holds(a)) {
      fail(r, "chi_a(a) != 0 at sample " + std::to_string(i));
      return;
    }
  }
  detail(r, "checked", count);
}

void op_char_poly_oracle(Context& c, const json& t, const json*,
                         TaskResult& r) {
  const GroupAction& act = c.need_action("char_poly_oracle");
  if (act.kind() != ActionKind::Constant)
    throw parse_fail(c.where(), "char_poly_oracle needs a constant action");
  const Algebra& A = act.space();
  int count = t.value("count", 10);
  std::mt19937_64 rng(t.value("seed", 2));
  for (int i = 0; i < count; ++i) {
    Element a = random_element(A, rng);
    std::vector<Element> lhs = act.char_poly(a);
    std::vector<Element> rhs = {A.one()};
    for (int g = 0; g < act.group().order(); ++g)
      rhs = poly_mul(rhs, {act.act(g, a).neg(), A.one()});
    if (!poly_equal(lhs, rhs)) {
      fail(r, "determinant and orbit polynomials differ at sample " +
                  std::to_string(i));
      return;
    }
  }
  detail(r, "checked", count);
  if (t.contains("element")) {
    Element a = A.parse(t["element"].get<std::string>());
    artifact(r, "charpoly", poly_str(act.char_poly(a)));
    artifact(r, "norm", act.norm(a).str());
    artifact(r, "sigmas", elements_str(act.sigmas(a)));
  }
}

void op_eq2_power(Context& c, const json& t, const json*, TaskResult& r) {
  const GroupAction& act = c.need_action("eq2_power");
  const Algebra& A = act.space();
  if (act.kind() == ActionKind::Constant)
    throw parse_fail(c.where(), "eq2_power needs an infinitesimal factor");
  int m = act.kind() == ActionKind::Flow ? 1 : act.group().order();
  int pr = act.rank() / m;
  detail(r, "p_power", pr);
  int count = t.value("count", 10);
  std::mt19937_64 rng(t.value("seed", 3));
  for (int i = 0; i < count; ++i) {
    Element a = random_element(A, rng);
    std::vector<Element> reduced;
    if (act.kind() == ActionKind::Flow) {
      reduced = {a.neg(), A.one()};
    } else {
      std::vector<ElementHom> autos;
      for (int g = 0; g < act.group().order(); ++g)
        autos.push_back(act.auto_of(g));
      GroupAction red = GroupAction::constant(act.group(), A, autos);
      reduced = red.char_poly(a);
    }
    if (!poly_equal(act.char_poly(a), poly_pow(reduced, pr))) {
      fail(r, "chi_G != chi_red^" + std::to_string(pr) + " at sample " +
                  std::to_string(i));
      return;
    }
  }
  detail(r, "checked", count);
}

void op_compare_invariants(Context& c, const json&, const json* exp,
                           TaskResult& r) {
  const GroupAction& act = c.need_action("compare_invariants");
  const Algebra& A = act.space();
  SubalgebraSpan inv = invariant_subring(act, c.opt.exec);
  SubalgebraSpan sig = sigma_subalgebra(act, c.opt.exec);
  ComparisonReport cr = compare_invariants(act, c.opt.exec);
  detail(r, "equal", cr.equal);
  detail(r, "invariant_rank", static_cast<std::int64_t>(cr.invariant_rank));
  detail(r, "sigma_rank", static_cast<std::int64_t>(cr.sigma_rank));
  artifact(r, "invariant_generators", elements_str(inv.generators));
  artifact(r, "sigma_generators", elements_str(sig.generators));
  if (cr.witness) artifact(r, "witness", cr.witness->str());
  expect_bool(exp, "equal", cr.equal, r);
  if (exp && exp->contains("invariants_generated_by")) {
    Span want = algebra_closure(
        A, parse_images(A, (*exp)["invariants_generated_by"], c.where()),
        c.opt.exec);
    if (!want.equals(inv.span))
      fail(r, "invariant ring differs from the expected generators");
  }
  if (exp && exp->contains("sigma_generated_by")) {
    Span want = algebra_closure(
        A, parse_images(A, (*exp)["sigma_generated_by"], c.where()),
        c.opt.exec);
    if (!want.equals(sig.span))
      fail(r, "sigma subalgebra differs from the expected generators");
  }
  if (exp && exp->contains("witness")) {
    Element w = A.parse((*exp)["witness"].get<std::string>());
    if (!inv.span.contains(w) || sig.span.contains(w))
      fail(r, "named witness is not an invariant outside the sigma span");
  }
}

void op_gabber_power(Context& c, const json& t, const json*, TaskResult& r) {
  const GroupAction& act = c.need_action("gabber_power");
  SubalgebraSpan sig = sigma_subalgebra(act, c.opt.exec);
  std::vector<Element> targets;
  if (t.contains("elements")) {
    targets = parse_images(act.space(), t["elements"], c.where());
  } else {
    targets = invariant_subring(act, c.opt.exec).generators;
  }
  for (const Element& a : targets)
    if (!gabber_power_check(act, a, sig.span)) {
      fail(r, "power escaped the sigma span for " + a.str());
      return;
    }
  detail(r, "checked", static_cast<std::int64_t>(targets.size()));
}

void op_quotient_extraction(Context& c, const json& t, const json*,
                            TaskResult& r) {
  const GroupAction& act = c.need_action("quotient_extraction");
  std::vector<int> H = int_list(field(t, "subgroup", c.where()), c.where());
  Element a = act.space().parse(field(t, "element", c.where()).get<std::string>());
  ExtractionResult ex = quotient_extraction(act, H, a);
  int m = static_cast<int>(H.size());
  detail(r, "degree", static_cast<std::int64_t>(ex.coeffs.size() - 1));
  detail(r, "kernel_order", m);
  if (!poly_equal(poly_pow(ex.coeffs, m), act.char_poly(a)))
    fail(r, "extracted root to the m-th power misses the full polynomial");
  artifact(r, "quotient_charpoly", poly_str(ex.coeffs));
  artifact(r, "quotient_sigmas", elements_str(ex.sigmas));
}

void op_induce_check(Context& c, const json& t, const json*, TaskResult& r) {
  const GroupAction& inner = c.need_action("induce_check");
  ConstantGroup G = build_group(field(t, "group", c.where()), c.where());
  std::vector<int> H =
      int_list(field(t, "subgroup_elements", c.where()), c.where());
  InducedAction ind = induce(G, H, inner);
  Element f = ind.slot_embed[0].apply(
      inner.space().parse(field(t, "element", c.where()).get<std::string>()));
  detail(r, "cosets", static_cast<std::int64_t>(ind.cosets.size()));
  detail(r, "product_dim", static_cast<std::int64_t>(ind.algebra.dim()));
  if (!induced_identities_check(ind, f, c.opt.exec))
    fail(r, "induced characteristic identities failed");
  if (!induced_invariants_isomorphic(ind, c.opt.exec))
    fail(r, "origin projection is not an isomorphism on invariants");
}

void op_smooth_check(Context& c, const json&, const json* exp, TaskResult& r) {
  SmoothPointModel m = smooth_model(c.need_action("smooth_check"));
  SmoothReport rep = smooth_invariants_check(m, c.opt.exec);
  detail(r, "valuation", rep.valuation);
  detail(r, "certified_degree", rep.certified_degree);
  detail(r, "invariant_rank", static_cast<std::int64_t>(rep.invariant_rank));
  detail(r, "equal", rep.equal);
  bool cog = cogenerated_check(m, c.opt.exec);
  detail(r, "cogenerated", cog);
  artifact(r, "norm", rep.norm.str());
  if (rep.witness) artifact(r, "witness", rep.witness->str());
  if (!rep.equal) fail(r, "invariants escape the norm subalgebra");
  if (!cog) fail(r, "invariants are not cogenerated below the guard");
  expect_int(exp, "valuation", rep.valuation, r);
  expect_int(exp, "invariant_rank",
             static_cast<std::int64_t>(rep.invariant_rank), r);
}

void op_node_check(Context& c, const json&, const json* exp, TaskResult& r) {
  NodeModel m = node_model(c.need_action("node_check"));
  NodeGroupData data = node_decompose(m);
  NodeReport rep = node_invariants_check(m, c.opt.exec);
  detail(r, "branch_subgroup", static_cast<std::int64_t>(data.g0.size()));
  detail(r, "swap_present", data.psi >= 0);
  detail(r, "uv_zero", rep.uv_zero);
  detail(r, "g0_invariants_match", rep.g0_invariants_match);
  detail(r, "full_invariants_match", rep.full_invariants_match);
  detail(r, "quotient_shape", rep.quotient_shape);
  detail(r, "certified_degree", rep.certified_degree);
  artifact(r, "u", rep.u.str());
  artifact(r, "v", rep.v.str());
  if (data.psi >= 0) {
    Element swapped = m.action.act(data.psi, rep.u);
    artifact(r, "u_plus_swapped", rep.u.add(swapped).str());
    bool sigma_ok = node_sigma_check(m);
    detail(r, "sigma_identity", sigma_ok);
    if (!sigma_ok) fail(r, "sigma identity failed on the node");
  }
  bool cog = cogenerated_check(m, c.opt.exec);
  detail(r, "cogenerated", cog);
  if (!cog) fail(r, "invariants are not cogenerated below the guard");
  if (!rep.uv_zero || !rep.g0_invariants_match || !rep.full_invariants_match)
    fail(r, "node invariant structure failed");
  if (exp && exp->contains("quotient_shape") &&
      (*exp)["quotient_shape"].get<std::string>() != rep.quotient_shape)
    fail(r, "quotient_shape: expected " +
                (*exp)["quotient_shape"].get<std::string>());
}

BaseChange named_base_change(const BaseRing& R, const std::string& name,
                             const std::string& where) {
  if (name == "identity") return bc_identity(R);
  if (name == "residue") return bc_residue(R);
  if (name == "quadratic") return bc_quadratic_ext(R);
  if (name == "nilpotent2") return bc_nilpotent(R, 2);
  if (name == "nilpotent3") return bc_nilpotent(R, 3);
  throw parse_fail(where, "unknown base change '" + name + "'");
}

void op_base_change(Context& c, const json& t, const json* exp,
                    TaskResult& r) {
  const GroupAction& act = c.need_action("base_change");
  std::vector<BaseChange> bcs;
  const json& changes = field(t, "changes", c.where());
  if (changes.is_string() && changes.get<std::string>() == "stock") {
    bcs = stock_base_changes(c.base);
  } else {
    for (const std::string& name : string_list(changes, c.where()))
      bcs.push_back(named_base_change(c.base, name, c.where()));
  }
  for (const BaseChange& bc : bcs) {
    ComparisonMaps cm = comparison_maps(act, bc, c.opt.exec);
    std::string v = std::string("phi ") +
                    (cm.phi_surjective ? "onto" : "NOT-onto") + "/" +
                    (cm.phi_injective ? "1-1" : "NOT-1-1") + ", psi " +
                    (cm.psi_surjective ? "onto" : "NOT-onto") + "/" +
                    (cm.psi_injective ? "1-1" : "NOT-1-1");
    detail(r, bc.label, v);
    if (!cm.phi_surjective) fail(r, "phi not surjective under " + bc.label);
    if (bc.flat &&
        !(cm.phi_injective && cm.psi_surjective && cm.psi_injective))
      fail(r, "flat base change is not bijective under " + bc.label);
    if (exp && exp->contains(bc.label)) {
      const json& want = (*exp)[bc.label];
      if (want.contains("psi_surjective") &&
          want["psi_surjective"].get<bool>() != cm.psi_surjective)
        fail(r, bc.label + ": psi surjectivity differs from expectation");
      if (want.contains("psi_injective") &&
          want["psi_injective"].get<bool>() != cm.psi_injective)
        fail(r, bc.label + ": psi injectivity differs from expectation");
    }
  }
  if (t.value("radicial", false)) {
    bool rad = radicial_shadow_check(act, bc_residue(c.base), c.opt.exec);
    detail(r, "radicial_shadow", rad);
    if (!rad) fail(r, "radicial shadow check failed");
  }
  if (t.value("exchange", false)) {
    bool ex = exchange_criterion(act, c.opt.exec);
    detail(r, "exchange_criterion", ex);
    expect_bool(exp, "exchange", ex, r);
  }
}

void op_quotient_commutes(Context& c, const json& t, const json*,
                          TaskResult& r) {
  const GroupAction& act = c.need_action("quotient_commutes");
  std::string model = t.value("model", "smooth");
  BaseRing k = c.base.residue_field();
  for (int order : {2, 3}) {
    BaseChange bc = bc_nilpotent(k, order);
    ComparisonMaps cm;
    if (model == "smooth")
      cm = quotient_commutes(smooth_model(act), bc, c.opt.exec);
    else if (model == "node")
      cm = quotient_commutes(node_model(act), bc, c.opt.exec);
    else
      throw parse_fail(c.where(), "unknown model '" + model + "'");
    bool ok = cm.psi_surjective && cm.psi_injective;
    detail(r, bc.label, ok);
    if (!ok) fail(r, "psi is not bijective under " + bc.label);
  }
}

void op_polarization_sweep(Context& c, const json& t, const json*,
                           TaskResult& r) {
  (void)c;
  int max_n = t.value("max_n", 4);
  int max_q = t.value("max_q", 3);
  std::int64_t checked = 0;
  for (int n = 1; n <= max_n; ++n) {
    PolarizationEngine engine(n);
    for (int q = 1; q <= max_q; ++q) {
      // every alpha in [1..n]^q with total weight at most n
      std::vector<int> alpha(static_cast<std::size_t>(q), 1);
      for (;;) {
        int weight = 0;
        for (int a : alpha) weight += a;
        if (weight <= n) {
          SymExpr expr = engine.express(alpha);
          if (!expr.expand().equal(partial_polarization(alpha, n, q))) {
            std::string key;
            for (int a : alpha) key += std::to_string(a) + ".";
            fail(r, "expansion mismatch at n=" + std::to_string(n) +
                        " alpha=" + key);
            return;
          }
          ++checked;
        }
        int i = q - 1;
        while (i >= 0 && alpha[static_cast<std::size_t>(i)] == n) {
          alpha[static_cast<std::size_t>(i)] = 1;
          --i;
        }
        if (i < 0) break;
        ++alpha[static_cast<std::size_t>(i)];
      }
    }
  }
  detail(r, "identities", checked);
}

void op_sum_expansion_sweep(Context& c, const json& t, const json*,
                            TaskResult& r) {
  (void)c;
  int max_n = t.value("max_n", 4);
  int max_q = t.value("max_q", 3);
  std::int64_t checked = 0;
  for (int n = 1; n <= max_n; ++n)
    for (int q = 1; q <= max_q; ++q)
      for (int k = 1; k <= n; ++k) {
        SumExpansion se = sum_expansion(k, q, n);
        if (!se.holds) {
          fail(r, "sum expansion failed at k=" + std::to_string(k) +
                      " q=" + std::to_string(q) + " n=" + std::to_string(n));
          return;
        }
        ++checked;
      }
  detail(r, "identities", checked);
}

void op_polarization_control(Context& c, const json& t, const json*,
                             TaskResult& r) {
  std::vector<int> alpha =
      t.contains("alpha") ? int_list(t["alpha"], c.where()) : std::vector<int>{1, 1};
  int n = t.value("n", 2);
  int q = static_cast<int>(alpha.size());
  SymExpr good = express_in_power_products(alpha, n, q);
  std::vector<mpz_class> assignment;
  for (int i = 0; i < n * q; ++i) assignment.emplace_back(i + 2);
  if (!verify_identity(good, alpha, assignment)) {
    fail(r, "the genuine identity failed its own evaluation");
    return;
  }
  // Corrupt by an extra symbol; both the symbolic and the evaluation
  // comparisons must now detect the difference.
  Pattern all_ones(static_cast<std::size_t>(q), 1);
  SymExpr bad = good.add(SymExpr::symbol(n, q, SymSymbol{1, all_ones}));
  bool symbolic = !bad.expand().equal(partial_polarization(alpha, n, q));
  bool evaluated = !verify_identity(bad, alpha, assignment);
  detail(r, "symbolic_detects", symbolic);
  detail(r, "evaluation_detects", evaluated);
  if (!symbolic || !evaluated)
    fail(r, "corrupted expression went undetected");
  artifact(r, "expression", good.str());
}

void op_theta_h1(Context& c, const json&, const json* exp, TaskResult& r) {
  const GroupAction& act = c.need_action("theta_h1");
  GModule M = theta_module(act);
  detail(r, "module_dim", M.dim);
  detail(r, "h0", h_zero(M).dim());
  int h1 = h_one(M).dim();
  detail(r, "h1", h1);
  artifact(r, "basis", join(M.names, "; "));
  bool cyclic = true;
  try {
    int oracle = cyclic_h1_dimension(M);
    detail(r, "cyclic_oracle", oracle);
    if (oracle != h1) fail(r, "bar complex disagrees with the cyclic oracle");
  } catch (const Error&) {
    cyclic = false;
  }
  detail(r, "cyclic", cyclic);
  expect_int(exp, "h0", h_zero(M).dim(), r);
  expect_int(exp, "h1", h1, r);
  expect_int(exp, "module_dim", M.dim, r);
}

void op_res_inf(Context& c, const json& t, const json* exp, TaskResult& r) {
  const GroupAction& act = c.need_action("res_inf");
  std::vector<int> H = int_list(field(t, "subgroup", c.where()), c.where());
  GModule M = theta_module(act);
  LinearMap res = restriction_h1(M, H);
  LinearMap inf = inflation_h1(M, H);
  detail(r, "res_shape", std::to_string(res.rows) + "x" + std::to_string(res.cols));
  detail(r, "inf_shape", std::to_string(inf.rows) + "x" + std::to_string(inf.cols));
  bool zero = compose(res, inf).is_zero();
  detail(r, "res_after_inf_zero", zero);
  if (!zero) fail(r, "inflation escaped the kernel of restriction");
  if (exp && exp->contains("res_shape") &&
      (*exp)["res_shape"].get<std::string>() !=
          std::to_string(res.rows) + "x" + std::to_string(res.cols))
    fail(r, "restriction shape differs from expectation");
  if (exp && exp->contains("inf_shape") &&
      (*exp)["inf_shape"].get<std::string>() !=
          std::to_string(inf.rows) + "x" + std::to_string(inf.cols))
    fail(r, "inflation shape differs from expectation");
}

void op_induction_composite(Context& c, const json& t, const json* exp,
                            TaskResult& r) {
  std::vector<int> H = int_list(field(t, "subgroup", c.where()), c.where());

  auto run_at = [&](const GroupAction& act) {
    return induction_differential_composite(act, H, c.opt.exec);
  };

  if (!t.contains("sweep_from")) {
    CompositeReport cr = run_at(c.need_action("induction_composite"));
    detail(r, "domain_dim", cr.domain_dim);
    detail(r, "codomain_dim", cr.codomain_dim);
    detail(r, "rank", cr.map.rank());
    detail(r, "invariant_rank", cr.invariant_rank);
    expect_int(exp, "domain_dim", cr.domain_dim, r);
    expect_int(exp, "codomain_dim", cr.codomain_dim, r);
    expect_int(exp, "rank", cr.map.rank(), r);
    expect_int(exp, "invariant_rank", cr.invariant_rank, r);
    return;
  }

  // Truncation sweep: dimensions may move with N near the top degrees, so a
  // dimension counts as detected ("stable") when two consecutive N agree,
  // and all detections must agree with each other.
  int lo = t["sweep_from"].get<int>();
  int hi = field(t, "sweep_to", c.where()).get<int>();
  std::vector<std::pair<int, int>> dims;
  std::string table;
  for (int n = lo; n <= hi; ++n) {
    CompositeReport cr = run_at(c.action_at(n));
    dims.emplace_back(cr.domain_dim, cr.codomain_dim);
    if (!table.empty()) table += " ";
    table += "N=" + std::to_string(n) + ":(" + std::to_string(cr.domain_dim) +
             "," + std::to_string(cr.codomain_dim) + ")";
    detail(r, "N=" + std::to_string(n),
           "dom=" + std::to_string(cr.domain_dim) +
               " cod=" + std::to_string(cr.codomain_dim) +
               " rank=" + std::to_string(cr.map.rank()) +
               " M0=" + std::to_string(cr.invariant_rank));
  }
  artifact(r, "dimension_table", table);
  std::int64_t stable_pairs = 0;
  std::pair<int, int> stable{-1, -1};
  bool matching = true;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i)
    if (dims[i] == dims[i + 1]) {
      ++stable_pairs;
      detail(r, "stable_at",
             std::to_string(lo + static_cast<int>(i)) + "-" +
                 std::to_string(lo + static_cast<int>(i) + 1) + ": dom=" +
                 std::to_string(dims[i].first) + " cod=" +
                 std::to_string(dims[i].second));
      if (stable.first < 0)
        stable = dims[i];
      else if (stable != dims[i])
        matching = false;
    }
  detail(r, "stable_detections", stable_pairs);
  detail(r, "stable_detections_match", matching);
  if (stable_pairs == 0) fail(r, "no consecutive truncations agreed");
  if (!matching) fail(r, "stability detections disagree");
  if (exp && exp->contains("stable")) {
    std::vector<int> want = int_list((*exp)["stable"], c.where());
    if (want.size() != 2 || stable.first != want[0] || stable.second != want[1])
      fail(r, "stable dimensions differ from expectation");
  }
}

using Handler = void (*)(Context&, const json&, const json*, TaskResult&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"verify_action", op_verify_action},
      {"cayley_hamilton", op_cayley_hamilton},
      {"char_poly_oracle", op_char_poly_oracle},
      {"eq2_power", op_eq2_power},
      {"compare_invariants", op_compare_invariants},
      {"gabber_power", op_gabber_power},
      {"quotient_extraction", op_quotient_extraction},
      {"induce_check", op_induce_check},
      {"smooth_check", op_smooth_check},
      {"node_check", op_node_check},
      {"base_change", op_base_change},
      {"quotient_commutes", op_quotient_commutes},
      {"polarization_sweep", op_polarization_sweep},
      {"sum_expansion_sweep", op_sum_expansion_sweep},
      {"polarization_control", op_polarization_control},
      {"theta_h1", op_theta_h1},
      {"res_inf", op_res_inf},
      {"induction_composite", op_induction_composite},
  };
  return h;
}

TaskResult run_task(Context& c, const json& t) {
  TaskResult r;
  r.op = field(t, "op", c.where()).get<std::string>();
  r.outcome = "pass";
  auto it = handlers().find(r.op);
  if (it == handlers().end())
    throw parse_fail(c.where(), "unknown op '" + r.op + "'");
  const json* exp = expectations(t, c.where());
  std::string want_error =
      exp && exp->contains("error") ? (*exp)["error"].get<std::string>() : "";
  try {
    it->second(c, t, exp, r);
    if (!want_error.empty())
      fail(r, "expected the refusal '" + want_error + "'");
  } catch (const Error& e) {
    if (e.code() == "parse") throw;
    if (!want_error.empty()) {
      if (want_error == e.what()) {
        detail(r, "refused", e.what());
      } else {
        fail(r, std::string("refusal '") + e.what() + "' differs from '" +
                    want_error + "'");
      }
    } else if (e.code() == "gate") {
      r.outcome = "gated";
      r.note = e.what();
    } else {
      fail(r, e.what());
    }
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Reports

bool ScenarioReport::failed() const {
  for (const TaskResult& t : tasks)
    if (t.outcome == "fail") return true;
  return false;
}

std::string ScenarioReport::artifact(const std::string& name) const {
  for (const TaskResult& t : tasks)
    for (const auto& [k, v] : t.artifacts)
      if (k == name) return v;
  return "";
}

nlohmann::ordered_json ScenarioReport::tree(bool with_timing) const {
  json out;
  out["schema"] = 1;
  out["scenario"] = name;
  out["tags"] = tags;
  out["base"] = base;
  out["truncation"] = truncation;
  out["tasks"] = json::array();
  for (const TaskResult& t : tasks) {
    json jt;
    jt["op"] = t.op;
    jt["outcome"] = t.outcome;
    if (!t.note.empty()) jt["note"] = t.note;
    jt["details"] = json::object();
    for (const auto& [k, v] : t.details) {
      if (jt["details"].contains(k)) {
        if (!jt["details"][k].is_array()) {
          json prev = jt["details"][k];
          jt["details"][k] = json::array({prev});
        }
        jt["details"][k].push_back(v);
      } else {
        jt["details"][k] = v;
      }
    }
    jt["artifacts"] = json::object();
    for (const auto& [k, v] : t.artifacts) jt["artifacts"][k] = v;
    out["tasks"].push_back(std::move(jt));
  }
  out["result"] = failed() ? "fail" : "pass";
  if (with_timing) out["timing_ms"] = timing_ms;
  return out;
}

std::string ScenarioReport::render(const std::string& format,
                                   bool with_timing) const {
  if (format == "tree") return tree(with_timing).dump(2) + "\n";
  std::ostringstream os;
  os << "schema: 1\n";
  os << "scenario: " << name << "\n";
  os << "tags: " << join(tags, ", ") << "\n";
  os << "base: " << base << "\n";
  os << "truncation: " << truncation << "\n";
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const TaskResult& t = tasks[i];
    os << "task " << (i + 1) << ": " << t.op << "\n";
    os << "  outcome: " << t.outcome << "\n";
    if (!t.note.empty()) os << "  note: " << t.note << "\n";
    for (const auto& [k, v] : t.details) os << "  " << k << ": " << v << "\n";
    for (const auto& [k, v] : t.artifacts)
      os << "  artifact " << k << ": " << v << "\n";
  }
  os << "result: " << (failed() ? "fail" : "pass") << "\n";
  if (with_timing) os << "timing_ms: " << timing_ms << "\n";
  return os.str();
}

bool Scenario::has_tag(const std::string& t) const {
  return std::find(tags.begin(), tags.end(), t) != tags.end();
}

// ---------------------------------------------------------------------------
// Loading and running

Scenario parse_scenario(const std::string& text, const std::string& path) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_fail(path, e.what());
  }
  if (!doc.is_object() || doc.value("schema", 0) != 1)
    throw parse_fail(path, "scenario must be an object with schema: 1");
  Scenario s;
  s.path = path;
  s.doc = std::move(doc);
  s.name = field(s.doc, "name", path).get<std::string>();
  if (s.doc.contains("tags")) s.tags = string_list(s.doc["tags"], path);
  if (!s.doc.contains("tasks") || !s.doc["tasks"].is_array())
    throw parse_fail(path, "missing task list");
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_fail(path, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

ScenarioReport run_scenario(const Scenario& s, const RunOptions& opt) {
  auto start = std::chrono::steady_clock::now();
  Context c;
  c.s = &s;
  c.opt = opt;

  ScenarioReport rep;
  rep.name = s.name;
  rep.tags = s.tags;
  if (s.doc.contains("base")) {
    c.base = build_base(s.doc["base"], s.path);
    rep.base = c.base.describe();
  } else {
    rep.base = "none";
  }
  if (s.doc.contains("algebra")) {
    if (!c.base.valid()) throw parse_fail(s.path, "algebra needs a base");
    c.A = build_algebra(c.base, s.doc["algebra"], opt.truncation_override,
                        s.path);
    rep.truncation = c.A.default_truncation();
  }
  if (s.doc.contains("action")) {
    if (!c.A.valid()) throw parse_fail(s.path, "action needs an algebra");
    c.action = build_action(c.A, s.doc["action"], s.path);
  }
  for (const json& t : s.doc["tasks"]) rep.tasks.push_back(run_task(c, t));
  rep.timing_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return rep;
}

std::string default_scenario_dir() {
  if (const char* env = std::getenv("INVLAB_SCENARIO_DIR")) return env;
  return INVLAB_SCENARIO_DIR;
}

std::vector<std::string> corpus_files(const std::string& dir) {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
    if (entry.path().extension() == ".json")
      out.push_back(entry.path().string());
  if (ec) throw parse_fail(dir, "cannot list scenario directory");
  std::sort(out.begin(), out.end());
  return out;
}

bool CorpusReport::failed() const {
  for (const ScenarioReport& r : reports)
    if (r.failed()) return true;
  return false;
}

std::string CorpusReport::render(const std::string& format,
                                 bool with_timing) const {
  if (format == "tree") {
    json out;
    out["schema"] = 1;
    out["scenarios"] = json::array();
    for (const ScenarioReport& r : reports)
      out["scenarios"].push_back(r.tree(with_timing));
    out["result"] = failed() ? "fail" : "pass";
    return out.dump(2) + "\n";
  }
  std::ostringstream os;
  for (const ScenarioReport& r : reports)
    os << r.render("text", with_timing) << "\n";
  os << "summary:\n";
  for (const ScenarioReport& r : reports)
    os << "  " << r.name << ": " << (r.failed() ? "fail" : "pass") << "\n";
  os << "scenarios: " << reports.size() << "\n";
  os << "result: " << (failed() ? "fail" : "pass") << "\n";
  return os.str();
}

CorpusReport run_corpus(const std::string& dir, const std::string& tag,
                        int jobs, const RunOptions& opt) {
  std::vector<Scenario> scenarios;
  for (const std::string& f : corpus_files(dir)) {
    Scenario s = load_scenario(f);
    if (tag.empty() || s.has_tag(tag)) scenarios.push_back(std::move(s));
  }
  CorpusReport out;
  out.reports.resize(scenarios.size());

  // Scenario-level parallelism; the library kernels themselves are bitwise
  // deterministic, so reports match across any job count.
  std::exception_ptr first_error;
#ifdef INVLAB_HAVE_OPENMP
  if (jobs != 1) {
    int n = jobs > 0 ? jobs : omp_get_max_threads();
    RunOptions inner = opt;
    inner.exec = Exec::Serial;
#pragma omp parallel for schedule(dynamic) num_threads(n)
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      try {
        out.reports[i] = run_scenario(scenarios[i], inner);
      } catch (...) {
#pragma omp critical
        if (!first_error) first_error = std::current_exception();
      }
    }
  } else
#endif
  {
    (void)jobs;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      try {
        out.reports[i] = run_scenario(scenarios[i], opt);
      } catch (...) {
        if (!first_error) first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  std::sort(out.reports.begin(), out.reports.end(),
            [](const ScenarioReport& a, const ScenarioReport& b) {
              return a.name < b.name;
            });
  return out;
}

}  // namespace invlab
