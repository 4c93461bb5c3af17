#pragma once
// Invariant rings and their symmetric-function approximations.  Two
// subalgebras of the acted-on algebra are computed as canonical spans: the
// full invariant ring A^G (kernel of the coaction-minus-identity map) and
// the subalgebra generated by the symmetric functions of basis monomials.
// The module compares them, extracts quotient-group data out of
// characteristic-polynomial coefficients alone, and builds induced actions
// from a subgroup action on a smaller algebra.

#include <optional>
#include <string>
#include <vector>

#include "invlab/action.hpp"
#include "invlab/algebra.hpp"
#include "invlab/group.hpp"
#include "invlab/linalg.hpp"
#include "invlab/parallel.hpp"

namespace invlab {

struct SubalgebraSpan {
  Span span;                        // module basis in canonical form
  std::vector<Element> generators;  // greedy algebra generators
  std::string label;                // "Invariants" | "SymmetricFunctions"
};

// Greedy generator extraction: scan the span's basis graded-lex ascending
// and keep an element iff it is outside the subalgebra generated by the
// elements kept so far.  Deterministic presentation of any closed span.
std::vector<Element> greedy_generators(const Span& s,
                                       Exec exec = Exec::Default);

// A^G as a span: kernel of x -> coact(x) - 1 (x) x, with generators.
SubalgebraSpan invariant_subring(const GroupAction& act,
                                 Exec exec = Exec::Default);

// Subalgebra generated by { sigma_i(m) : m basis monomial, 1 <= i <= n },
// saturated under products.  Sums need no extra generators: symmetric
// functions of a sum are integer polynomials in symmetric functions of
// monomials.
SubalgebraSpan sigma_subalgebra(const GroupAction& act,
                                Exec exec = Exec::Default);

struct ComparisonReport {
  bool equal = false;
  std::optional<Element> witness;  // invariant element outside the sigma span
  std::size_t invariant_rank = 0;
  std::size_t sigma_rank = 0;
};

// Module comparison of the two spans.  The sigma span lying inside the
// invariant span is a theorem, not an input: a violation throws.
ComparisonReport compare_invariants(const GroupAction& act,
                                    Exec exec = Exec::Default);

// For invariant a and |G| = p^r m with p the residue characteristic and
// gcd(p, m) = 1: whether a^(p^r) lies in the sigma span (p^r = 1 when the
// base has characteristic zero residue field or p does not divide |G|).
bool gabber_power_check(const GroupAction& act, const Element& a,
                        Exec exec = Exec::Default);
bool gabber_power_check(const GroupAction& act, const Element& a,
                        const Span& sigma);

// The G/H action on the same space when the subgroup H (element list of the
// acting constant group) acts trivially; each coset acts through any of its
// representatives, and representative-independence is verified.
struct QuotientActionData {
  ConstantGroup quotient;  // G/H
  std::vector<int> proj;   // G element -> quotient element
  GroupAction action;      // G/H acting on the original space
};
QuotientActionData quotient_action(const GroupAction& act,
                                   const std::vector<int>& H);

// Coefficients of the degree-l = n/m characteristic polynomial of `a` for
// the quotient action, reconstructed from the coefficients of the full
// characteristic polynomial alone by decreasing induction: with
// chi^G = sum_j c_j T^j and alpha_l = 1, the coefficient of T^(l(m-1)+u)
// splits off m * alpha_u, all other products involving only indices above
// u.  Requires m = |H| invertible in the base.  The result is verified two
// ways before being returned: its m-th power reproduces chi^G, and it
// matches the characteristic polynomial computed directly from the
// quotient action.
struct ExtractionResult {
  std::vector<Element> coeffs;  // ascending, degree l; coeffs[l] = 1
  std::vector<Element> sigmas;  // sigma_1..sigma_l of the quotient action
};
ExtractionResult quotient_extraction(const GroupAction& act,
                                     const std::vector<int>& H,
                                     const Element& a);

// Induced action: C carries an action of the subgroup H <= G (inner's
// group must be H with the same multiplication table under the index map
// H_elements[i] <-> i); the induced algebra is a product of [G:H] copies of
// C indexed by the left cosets, G permutes the slots and twists by H.
struct InducedAction {
  ConstantGroup G;
  std::vector<int> H_elements;
  GroupAction inner;   // H acting on C
  Algebra algebra;     // product of [G:H] copies of C
  GroupAction action;  // G acting on the product
  std::vector<int> reps;                 // coset representatives, reps[0] = e
  std::vector<std::vector<int>> cosets;  // left cosets, sorted
  ElementHom origin_projection;          // evaluation at the origin slot
  std::vector<ElementHom> slot_embed;    // C -> slot factor (unit -> slot unit)
};
InducedAction induce(const ConstantGroup& G, const std::vector<int>& H_elements,
                     const GroupAction& inner);

// For f supported in the origin slot: the full characteristic polynomial of
// its embedding equals the product over cosets of the slot-transported
// inner characteristic polynomial, and the origin projection maps the sigma
// span of the induced action onto the sigma span of the inner action.
bool induced_identities_check(const InducedAction& ind, const Element& f,
                              Exec exec = Exec::Default);

// The origin projection restricts to an isomorphism from the induced
// invariants onto the inner invariants: image span equality plus equal
// module lengths.
bool induced_invariants_isomorphic(const InducedAction& ind,
                                   Exec exec = Exec::Default);

}  // namespace invlab
