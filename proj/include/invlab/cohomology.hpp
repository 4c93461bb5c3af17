#pragma once
// Tangent-space cohomology for actions on truncated power-series lines:
// the module Theta_T of derivations h(T) d/dT with the adjoint action,
// bar-complex H^0 / H^1 over a field, restriction and inflation on classes,
// and the composite map into the derivations of the invariant coordinate
// Y = Nm_H(T).  Dimensions may depend on the truncation near the top
// degrees, so reports carry N and callers compare consecutive values.

#include <string>
#include <vector>

#include "invlab/action.hpp"

namespace invlab {

// Finite-dimensional module over a field with one matrix per group element
// (columns are images of basis vectors).
struct GModule {
  ConstantGroup G;
  BaseRing k;
  int dim = 0;
  std::vector<std::vector<std::vector<Scalar>>> act;  // [g][row][col]
  std::vector<std::string> names;                     // basis labels

  // Identity acts as identity and the matrices realize the group table.
  void verify() const;
  std::vector<Scalar> apply(int g, const std::vector<Scalar>& v) const;
};

GModule trivial_module(const ConstantGroup& G, const BaseRing& k, int dim);

// Derivations t^i d/dt of k[t]/(t^N) for a constant action, with g acting
// by conjugation.  The constant field d/dt only kills t^N when the residue
// characteristic divides N, so the basis starts at i = theta_shift(A):
// 0 in that case and 1 otherwise.
int theta_shift(const Algebra& A);
GModule theta_module(const GroupAction& action);

// The H-module obtained by forgetting down to a subgroup.
GModule restrict_group(const GModule& M, const std::vector<int>& H);

// M^H as a G/H-module, with the fixed basis written in M's coordinates.
struct FixedModule {
  GModule module;
  std::vector<std::vector<Scalar>> embed;
  std::vector<int> coset_reps;
};
FixedModule fixed_submodule(const GModule& M, const std::vector<int>& H);

// Chosen representatives for a cohomology quotient in degree 0 or 1; a
// degree-1 cochain on a group of order m over a d-dimensional module is a
// flat vector of m blocks of size d.
struct CohomologyClassSpace {
  int degree = 0;
  BaseRing k;
  int group_order = 0, module_dim = 0;
  std::vector<std::vector<Scalar>> reps;
  std::vector<std::vector<Scalar>> coboundaries;

  int dim() const { return static_cast<int>(reps.size()); }
  // Coordinates of a cocycle in the chosen representatives, modulo
  // coboundaries; throws when the vector is not in their joint span.
  std::vector<Scalar> coords(const std::vector<Scalar>& cocycle) const;
};

CohomologyClassSpace h_zero(const GModule& M);
// Bar complex in degrees 0..2; for cyclic groups the dimension is
// cross-checked against ker(Norm)/im(g - 1) and a disagreement throws.
CohomologyClassSpace h_one(const GModule& M);
// The cyclic oracle itself (generator of maximal order required).
int cyclic_h1_dimension(const GModule& M);

struct LinearMap {
  BaseRing k;
  int rows = 0, cols = 0;
  std::vector<std::vector<Scalar>> entries;

  bool is_zero() const;
  bool is_identity() const;
  int rank() const;
};
LinearMap compose(const LinearMap& f, const LinearMap& g);  // f after g

// Classes of G restricted to cocycles on a subgroup.
LinearMap restriction_h1(const GModule& M, const std::vector<int>& H);
// Classes of G/H on M^H pulled back along the projection (H normal).
LinearMap inflation_h1(const GModule& M, const std::vector<int>& H);

// H^1(G/H, Theta_T^H) -> H^1(G/H, Theta_Y) induced by reading an H-invariant
// vector field as a field in Y = Nm_H(t); needs the H-invariants to be the
// polynomials in Y, else throws Error("cohomology", "Theta_Y unavailable").
struct CompositeReport {
  LinearMap map;
  int domain_dim = 0, codomain_dim = 0;
  int invariant_rank = 0;  // dimension of k[Y]
};
CompositeReport induction_differential_composite(const GroupAction& action,
                                                 const std::vector<int>& H,
                                                 Exec exec = Exec::Default);

}  // namespace invlab
