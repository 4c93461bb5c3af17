#pragma once
// Exact linear algebra over the scalar rings and over algebra coordinate
// spaces.  Everything reduces to one canonical-form engine: Howell normal
// form over a local artinian base (fields are the length-1 case), with
// pivots chosen by minimal pi-adic valuation.  Two row sets span the same
// module iff their forms are entrywise identical, which is what Span
// comparisons lean on.
//
// Coordinate convention: coordinate 0 of an algebra of dimension d is the
// basis monomial of index d-1 (the graded-lex largest).  Pivots therefore
// sit on leading monomials and reduction eliminates from the top degree
// down.

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "invlab/algebra.hpp"
#include "invlab/parallel.hpp"
#include "invlab/ring.hpp"

namespace invlab {

struct Mat {
  BaseRing ring;
  std::size_t rows = 0, cols = 0;
  std::vector<Scalar> a;  // row-major

  Mat() = default;
  Mat(BaseRing r, std::size_t nr, std::size_t nc);

  Scalar& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  const Scalar& at(std::size_t r, std::size_t c) const {
    return a[r * cols + c];
  }
  static Mat identity(const BaseRing& r, std::size_t n);
  bool equal(const Mat& o) const;
  std::string str() const;
};

struct PivotInfo {
  std::size_t col;
  int val;  // pi-adic valuation of the pivot entry
};

// In-place Howell canonical form.  Zero rows are dropped; returns the pivot
// layout.  Requires a local base (field, Z/p^k, or a nilpotent extension of
// a field); throws Error("linalg", ...) otherwise.
std::vector<PivotInfo> howell(Mat& m, Exec exec = Exec::Default);

// Generators of { x : m x = 0 } as rows of the result (m acts on column
// vectors of length m.cols).  Canonical via the augmented-Howell
// construction; same base restrictions as howell().
Mat kernel(const Mat& m, Exec exec = Exec::Default);

// Membership of a row vector in the row span of a Howell form (the output
// of howell()/kernel(); pivots are re-read from the rows).
bool in_row_span(const Mat& h, const std::vector<Scalar>& v);

// Division-free determinant by Laplace expansion with column-subset
// memoization; sound over rings with zero divisors.  n up to ~14.
Scalar det(const Mat& m);
Element det(const std::vector<std::vector<Element>>& m);

// Algebra coordinates (reversed basis order, see header comment).
std::vector<Scalar> to_coords(const Element& x);
Element from_coords(const Algebra& a, const std::vector<Scalar>& v);

// Matrix of a linear operator in algebra coordinates: column c holds the
// coordinates of f applied to the basis element with coordinate index c.
Mat mat_of(const Algebra& domain, const Algebra& codomain,
           const std::function<Element(const Element&)>& f);

std::vector<Element> kernel_elements(const Algebra& domain, const Mat& m,
                                     Exec exec = Exec::Default);

// A submodule of an algebra's underlying module, held in canonical form.
class Span {
 public:
  Span() = default;
  explicit Span(Algebra a);  // zero span
  static Span of(const Algebra& a, const std::vector<Element>& gens,
                 Exec exec = Exec::Default);

  bool valid() const { return alg_.valid(); }
  const Algebra& algebra() const { return alg_; }
  std::size_t rank() const { return mat_.rows; }  // canonical row count
  std::vector<Element> basis() const;
  const Mat& rows() const { return mat_; }

  // Module length: sum over canonical rows of (base length - pivot
  // valuation); equals rank() over a field.  Two spans of equal length with
  // one containing the other coincide.
  std::size_t length() const;
  // Pivot valuations of the canonical rows, in row order.
  std::vector<int> pivot_valuations() const;

  bool contains(const Element& x) const;
  bool equals(const Span& o) const;
  bool contains_all(const Span& o) const;
  Span joined(const std::vector<Element>& more, Exec exec = Exec::Default) const;
  // Image under coefficientwise projection onto degrees < bound.
  Span projected_below_degree(int bound, Exec exec = Exec::Default) const;
  // Coefficients c (over basis()) with sum c_i b_i = x, if x is a member.
  std::optional<std::vector<Scalar>> solve(const Element& x) const;
  // First basis element of this span that `other` misses (for witnesses).
  std::optional<Element> first_not_in(const Span& other) const;

 private:
  Algebra alg_;
  Mat mat_;
  std::vector<PivotInfo> piv_;
};

// Smallest subspan containing 1 and `gens` that is closed under products.
// Rounds of pairwise basis products until the canonical form stabilizes.
Span algebra_closure(const Algebra& a, const std::vector<Element>& gens,
                     Exec exec = Exec::Default);

// One multiplicative-closure round for testing: span of s's basis products.
bool closed_under_products(const Span& s, Exec exec = Exec::Default);

}  // namespace invlab
