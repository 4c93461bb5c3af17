#pragma once
// Local models of a curve at a fixed point of a finite action: the
// one-variable truncated ring at a smooth point and the two-branch node
// ring, with the structure theory of their invariant subrings.  Truncation
// at N certifies ring equalities only strictly below degree N - rank + 1
// (norms multiply valuations), so every report states its certified degree.

#include <optional>
#include <string>
#include <vector>

#include "invlab/invariants.hpp"

namespace invlab {

// k[t]/(t^N) with a verified action whose norm has t-valuation equal to the
// acting rank -- the finite stand-in for freeness at the generic point.
struct SmoothPointModel {
  Algebra A;
  GroupAction action;
  int N = 0;
};
// Validates shape, action, and the valuation gate.
// Throws Error("local", "action not generically free") when val N(t) != rank.
SmoothPointModel smooth_model(GroupAction action);

struct SmoothReport {
  Element norm;                    // N(t)
  int valuation = 0;               // t-adic valuation of the norm
  int certified_degree = 0;        // comparisons made strictly below this
  std::size_t invariant_rank = 0;  // rank of A^G
  bool equal = false;              // A^G == k[N(t)] below certified degree
  std::optional<Element> witness;  // invariant outside k[N(t)], if any
};
SmoothReport smooth_invariants_check(const SmoothPointModel& m,
                                     Exec exec = Exec::Default);

// k[x,y]/(xy, x^N, y^N): two smooth branches glued at the origin.  The
// action must be constant and every automorphism must send the branch ideal
// (x) into (x) or into (y).
struct NodeModel {
  Algebra A;
  GroupAction action;
  int N = 0;
};
NodeModel node_model(GroupAction action);
Algebra node_algebra(const BaseRing& R, int N, const std::string& x = "x",
                     const std::string& y = "y");

// Branch decomposition of a node action.  H and K are the images of the
// branch-fixing subgroup in the automorphisms of the x- and y-branch; a
// one-variable branch automorphism is determined by its variable image, so
// they are stored as the distinct images.
struct NodeGroupData {
  std::vector<int> g0;       // branch-fixing subgroup, ascending
  std::vector<int> delta_x;  // elements of g0 acting trivially on x-branch
  std::vector<int> delta_y;
  std::vector<Element> h_images;  // {g(x) : g in g0}, one per element of H
  std::vector<Element> k_images;  // {g(y) : g in g0}, one per element of K
  int psi = -1;  // first branch-swapping element in group order, -1 if none
};
NodeGroupData node_decompose(const NodeModel& m);

struct NodeReport {
  Element u;  // Nm_H(x)
  Element v;  // Nm_K(y)
  bool uv_zero = false;
  bool g0_invariants_match = false;    // A^{G_0} == k[u,v]/(uv) below guard
  bool full_invariants_match = false;  // A^G == k[u + psi(u)] below guard
  std::string quotient_shape;          // "node" (no swap) or "smooth"
  int certified_degree = 0;
};
// Throws Error("gate", ...) when |delta_x| or |delta_y| is not invertible
// in the base: the structure theory needs branch kernels of invertible
// order, and a violated hypothesis is refused rather than reported false.
NodeReport node_invariants_check(const NodeModel& m, Exec exec = Exec::Default);

// With l = |G_0| = rank/2 and a branch swap psi present:
//   sigma_l(x) = Nm_{G_0}(x) + psi(Nm_{G_0}(x))
// exactly (mixed orbit products die against xy = 0).
bool node_sigma_check(const NodeModel& m);

// Throws Error("gate", ...) unless |delta_x| and |delta_y| are invertible.
void require_node_hypotheses(const NodeModel& m);

// A^G equals the subalgebra generated by all symmetric functions, compared
// strictly below the certified degree, after the model's hypothesis gate.
bool cogenerated_check(const SmoothPointModel& m, Exec exec = Exec::Default);
bool cogenerated_check(const NodeModel& m, Exec exec = Exec::Default);

}  // namespace invlab
