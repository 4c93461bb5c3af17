#pragma once
// Finitely presented commutative algebras with monomial relations and
// total-degree truncation, as free modules on the surviving monomials in
// graded-lex order. An Algebra is a finite product of such "components";
// products of basis monomials are again basis monomials or zero, which keeps
// every ring operation exact and normal forms trivial to maintain.
//
// Components also carry independent degree caps per variable group, which is
// how tensor factors keep separate truncations (adjoining T with its own
// degree bound, or forming R[G] (x) A without the group-scheme coordinates
// eating into A's truncation budget).

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "invlab/ring.hpp"

namespace invlab {

struct BasisKey {
  std::uint32_t comp = 0;
  std::vector<int> exps;
  int degree() const {
    int d = 0;
    for (int e : exps) d += e;
    return d;
  }
};

struct ComponentSpec {
  std::string label;
  std::vector<std::string> vars;
  std::vector<std::vector<int>> relations;  // exponent vectors, nonzero
  struct Cap {
    std::vector<int> vars;  // indices into this component's vars
    int bound;              // sum of exponents over `vars` stays < bound
  };
  std::vector<Cap> caps;
};

struct AlgebraImpl;
class Element;

class Algebra {
public:
  Algebra() = default;

  // Single component: all variables share one total-degree cap `truncation`;
  // relations are monomial strings over `vars` such as "x^3" or "x*y".
  static Algebra single(const BaseRing& base,
                        const std::vector<std::string>& vars,
                        const std::vector<std::string>& relations,
                        int truncation, const std::string& label = "c0");
  // Fully explicit form.
  static Algebra from_components(const BaseRing& base,
                                 std::vector<ComponentSpec> comps,
                                 int default_truncation);
  // Direct product: components concatenated; variable names that occur in
  // more than one factor get the factor index appended so names stay unique.
  static Algebra product(const std::vector<Algebra>& factors);

  bool valid() const { return impl_ != nullptr; }
  const BaseRing& base() const;
  std::size_t dim() const;
  std::size_t component_count() const;
  const ComponentSpec& component(std::size_t c) const;
  int default_truncation() const;
  const BasisKey& basis_key(std::uint32_t i) const;
  // Index of a monomial, or -1 if it is not a basis monomial.
  std::int64_t index_of(std::uint32_t comp, const std::vector<int>& exps) const;
  // Product of two basis monomials: basis index or -1 when the product dies
  // (different components, a relation divides it, or a cap kills it).
  std::int64_t mul_basis(std::uint32_t i, std::uint32_t j) const;
  std::string monomial_str(std::uint32_t i) const;

  bool same(const Algebra& o) const;
  std::string describe() const;

  Element zero() const;
  Element one() const;                    // sum of all component units
  Element unit(std::uint32_t comp) const;
  Element var(const std::string& name) const;
  Element basis_element(std::uint32_t i) const;
  Element from_scalar(const Scalar& c) const;
  Element from_int(std::int64_t n) const;
  // Normal form from a raw coefficient list: dead monomials are dropped,
  // duplicates merged, zero coefficients removed.
  Element reduce_raw(
      const std::vector<std::pair<BasisKey, Scalar>>& terms) const;
  // Canonical element from (basis index, coefficient) pairs; merges and
  // drops zeros.
  Element from_terms(std::vector<std::pair<std::uint32_t, Scalar>> t) const;
  Element parse(const std::string& text) const;

  // total number of variables across components; global variable ids
  std::size_t var_count() const;
  std::pair<std::uint32_t, std::uint32_t> var_location(std::size_t gid) const;
  std::size_t var_gid(std::uint32_t comp, std::uint32_t vi) const;
  const std::string& var_name(std::size_t gid) const;

  const std::shared_ptr<const AlgebraImpl>& impl() const { return impl_; }

private:
  std::shared_ptr<const AlgebraImpl> impl_;
  explicit Algebra(std::shared_ptr<const AlgebraImpl> impl)
      : impl_(std::move(impl)) {}
  friend struct AlgebraImpl;
};

class Element {
public:
  Element() = default;

  const Algebra& parent() const { return a_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t term_count() const { return t_.size(); }
  const std::vector<std::pair<std::uint32_t, Scalar>>& terms() const {
    return t_;
  }
  Scalar coeff(std::uint32_t basis_index) const;
  // max / min total degree over the support; zero element: -1 / INT_MAX
  int degree() const;
  int valuation() const;
  // basis index of the graded-lex largest monomial in the support
  std::uint32_t leading_index() const;

  Element add(const Element& o) const;
  Element sub(const Element& o) const;
  Element neg() const;
  Element mul(const Element& o) const;
  Element scaled(const Scalar& c) const;
  Element pow(std::int64_t e) const;
  bool equal(const Element& o) const;
  // drop all terms of total degree >= bound
  Element truncated_below(int bound) const;

  std::string str() const;

private:
  Algebra a_;
  std::vector<std::pair<std::uint32_t, Scalar>> t_;  // sorted by index, no 0s
  Element(Algebra a, std::vector<std::pair<std::uint32_t, Scalar>> t)
      : a_(std::move(a)), t_(std::move(t)) {}
  friend class Algebra;
  friend struct AlgebraImpl;
};

// Algebra homomorphism data: images of every variable (by global id) and of
// every component unit, plus a map on coefficients. Covers automorphisms,
// coactions into tensor algebras, base change, and inclusions.
struct ElementHom {
  Algebra source;
  Algebra target;
  std::vector<Element> var_images;   // indexed by source global var id
  std::vector<Element> unit_images;  // indexed by source component
  std::function<Scalar(const Scalar&)> scalar_map;  // optional

  Element apply(const Element& x) const;
};

// Tensor product with bookkeeping to embed factors and split along the left
// factor's basis. Basis of `prod` is exactly left basis x right basis.
struct Tensor {
  Algebra left, right, prod;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> split_of;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> join_of;

  Element embed_left(const Element& x) const;
  Element embed_right(const Element& x) const;
  Element pure(const Element& l, const Element& r) const;
  // coefficients of x along the left basis: vector of right-algebra elements
  std::vector<Element> decompose_by_left(const Element& x) const;
};

Tensor make_tensor(const Algebra& a, const Algebra& b);

}  // namespace invlab
