#pragma once
// Group actions on the finite algebras, in coaction form.  One engine covers
// constant finite groups (one automorphism per element), height-one
// infinitesimal flows given by a nilpotent derivation, and commuting
// products of the two: the acting object is presented by its coordinate
// algebra H, the action by the coaction mu: A -> H (x) A, and every derived
// quantity (norms, characteristic polynomials, invariants) is computed from
// the multiplication matrix of mu(a) on H (x) A as a free A-module.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "invlab/algebra.hpp"
#include "invlab/group.hpp"
#include "invlab/linalg.hpp"

namespace invlab {

// Endomorphism of A from variable images; comp_perm[c] names the component
// whose unit receives u_c (identity permutation when empty).
ElementHom endomorphism(const Algebra& A, const std::vector<Element>& var_images,
                        const std::vector<std::uint32_t>& comp_perm = {});

// Multiplicativity of a hom on all basis pairs (catches maps that do not
// descend to the quotient by relations/truncation), and phi(1) = 1.
bool well_defined_hom(const ElementHom& phi);

// Leibniz extension of variable images to the whole algebra (units go to 0).
Element apply_derivation(const Algebra& A,
                         const std::vector<Element>& var_images,
                         const Element& x);

enum class ActionKind { Constant, Flow, FlowTimesConstant };

class GroupAction {
 public:
  GroupAction() = default;

  static GroupAction constant(const ConstantGroup& G, const Algebra& A,
                              std::vector<ElementHom> autos);
  // Height-one flow from a derivation D with D^p = 0, p the residue
  // characteristic: coacts along k[X]/(X^p), v -> sum X^i (x) D^i(v)/i!.
  static GroupAction flow(const Algebra& A,
                          const std::vector<Element>& d_var_images);
  // Commuting product: the flow after the constant action.
  static GroupAction flow_times_constant(
      const Algebra& A, const std::vector<Element>& d_var_images,
      const ConstantGroup& G, std::vector<ElementHom> autos);

  bool valid() const { return impl_ != nullptr; }
  ActionKind kind() const;
  const Algebra& space() const;
  const Algebra& hopf() const;
  const Tensor& tensor() const;
  int rank() const;  // dim H
  const ConstantGroup& group() const;  // Constant / FlowTimesConstant only
  const ElementHom& auto_of(int g) const;
  // Variable images of D, Flow / FlowTimesConstant only.
  const std::vector<Element>& derivation() const;
  std::vector<std::uint32_t> component_perm(int g) const;
  bool acts_freely_on_components() const;

  Element coact(const Element& a) const;
  Element act(int g, const Element& a) const;
  bool is_invariant(const Element& a) const;
  Element counit_collapse(const Element& ha) const;  // (counit (x) id)

  // Throws Error("action", ...) when the presented data is not an action:
  // ill-defined images, group law failures, D^p != 0, or non-commuting
  // factors.
  void verify() const;

  std::vector<std::vector<Element>> mult_matrix(const Element& a) const;
  Element norm(const Element& a) const;
  // chi_a(T) = sum c_i T^i as coefficients c_0..c_n over A, c_n = 1.
  std::vector<Element> char_poly(const Element& a) const;
  // sigma_i = (-1)^i c_{n-i}: sigma_0 = 1, sigma_n = norm.
  std::vector<Element> sigmas(const Element& a) const;
  bool cayley_hamilton_holds(const Element& a) const;
  Element orbit_product(const Element& a) const;  // Constant only (oracle)

  std::vector<Element> invariant_basis(Exec exec = Exec::Default) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  const Impl& data() const;
};

// Horner evaluation of a coefficient list at an element of A.
Element eval_poly(const std::vector<Element>& coeffs, const Element& at);

// Polynomials over A as coefficient lists c_0..c_n (dense, exact length).
std::vector<Element> poly_mul(const std::vector<Element>& a,
                              const std::vector<Element>& b);
std::vector<Element> poly_pow(const std::vector<Element>& a, int e);

// Constant action of the subgroup spanned by `elements` (which must be
// closed): the same space with the automorphism subset, as its own action.
GroupAction subgroup_action(const GroupAction& a,
                            const std::vector<int>& elements);

}  // namespace invlab
