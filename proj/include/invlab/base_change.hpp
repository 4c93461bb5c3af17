#pragma once
// Base-change laboratory: ring morphisms between supported bases, transport
// of an action along one, and the two comparison maps between
// "invariants, then extend scalars" and "extend scalars, then invariants":
//   phi: Sigma_R(A) (x) R' -> Sigma_{R'}(A (x) R')
//   psi: A^G (x) R'       -> (A (x) R')^G
// Verdicts are exact: surjectivity by span equality, injectivity by module
// length against the length of the tensored source module.

#include <functional>
#include <string>
#include <vector>

#include "invlab/local_models.hpp"

namespace invlab {

struct BaseChange {
  BaseRing source, target;
  std::function<Scalar(const Scalar&)> map;
  bool flat = true;
  std::string label;

  // Spot-checks the ring-homomorphism laws on a scalar sample and the
  // declared flatness flag (a killed scalar contradicts "flat"; a field
  // source forces it).  Throws Error("base", ...).
  void verify() const;
};

BaseChange bc_identity(const BaseRing& R);
// Quotient to the residue field; flat only when R is already a field.
BaseChange bc_residue(const BaseRing& R);
// Z/n -> Z/m for m dividing n (including Z/p^k -> F_p); not flat unless n = m.
BaseChange bc_reduction(const BaseRing& source, const BaseRing& target);
// Field -> field[e]/(e^order), free hence flat.
BaseChange bc_nilpotent(const BaseRing& field, int order);
// F_p -> F_p[z]/(f) with f irreducible; free hence flat.
BaseChange bc_field_ext(const BaseRing& field, std::vector<Scalar> modulus_low);
// F_p -> F_{p^2} along a searched irreducible monic quadratic.
BaseChange bc_quadratic_ext(const BaseRing& field);
BaseChange bc_compose(const BaseChange& f, const BaseChange& g);

// The stock set a scenario is run against, keyed by the base kind: fields
// get the identity, a quadratic extension (prime fields), and dual numbers
// of length 2 and 3; Z/p^k gets the identity and the residue reduction.
std::vector<BaseChange> stock_base_changes(const BaseRing& R);

// Same presentation over bc.target with every coefficient mapped.
Algebra transported_algebra(const Algebra& A, const BaseChange& bc);
Element map_coefficients(const Algebra& target_algebra, const Element& e,
                         const BaseChange& bc);
GroupAction tensor_action(const GroupAction& act, const BaseChange& bc);

// Length of (row span) (x)_R R' as an R'-module: each canonical row of
// pivot valuation v contributes min(len R', (len R - v) * val'(map(pi))).
std::size_t tensor_length(const Span& s, const BaseChange& bc);

struct ComparisonMaps {
  GroupAction tensored;
  Span sigma_source, inv_source;  // over the source base
  Span sigma_target, inv_target;  // over the target base
  Span phi_image, psi_image;      // images inside the target algebra
  std::size_t sigma_tensor_length = 0, inv_tensor_length = 0;
  bool phi_surjective = false, phi_injective = false;
  bool psi_surjective = false, psi_injective = false;
};
ComparisonMaps comparison_maps(const GroupAction& act, const BaseChange& bc,
                               Exec exec = Exec::Default);

// For a quotient base change on a p-power base with rank = p^r * m,
// gcd(p, m) = 1: true iff every kernel element of psi has p^r-th power zero
// (computed through the multiplication table of the source invariants) and
// every target invariant has its p^r-th power inside the image of psi.
bool radicial_shadow_check(const GroupAction& act, const BaseChange& bc,
                           Exec exec = Exec::Default);

// Surjectivity of psi at the residue field.  When it holds, invariants must
// commute with the stock artinian extensions of the residue field; a
// violation there throws Error("framework", ...) because the theory rules
// it out.
bool exchange_criterion(const GroupAction& act, Exec exec = Exec::Default);

// Desk-scale quotient/base-change commutation for a local model: after the
// model's hypothesis gate, psi must be bijective.
ComparisonMaps quotient_commutes(const SmoothPointModel& m,
                                 const BaseChange& bc,
                                 Exec exec = Exec::Default);
ComparisonMaps quotient_commutes(const NodeModel& m, const BaseChange& bc,
                                 Exec exec = Exec::Default);

}  // namespace invlab
