// Loop constructions (rectangles, the stacked family, the special 10-, 12-
// and 16-edge loops), the c_{I,P} and S(n) combinatorics, the a_P/b_P
// factorization of U_n, and decomposition of a loop into two loops.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "z2lgt/box.hpp"
#include "z2lgt/chain.hpp"
#include "z2lgt/ursell.hpp"

namespace z2lgt {

struct StackedLoopFamily {
  std::vector<Chain> surfaces;  // q_1..q_n, flat and pairwise disjoint
  std::vector<Chain> loops;     // gamma_i = boundary(q_i)
  int l1 = 0, l2 = 0;
};

// n congruent rectangular loops stacked along the third axis: q_1 is the
// L1 x L2 rectangle of plaquettes at `anchor` in the (e1,e2) plane and
// q_{i+1} is q_i translated by e3. Requires m >= 3 and the family inside
// the box.
StackedLoopFamily build_stacked_family(const BoxGeometry& box, const std::vector<int>& anchor,
                                       int l1, int l2, int n);

// Boundary of the L1 x L2 rectangle of plaquettes at `anchor` spanning
// directions (dir_a, dir_b).
Chain rectangle_loop(const BoxGeometry& box, const std::vector<int>& anchor, int l1, int l2,
                     int dir_a = 0, int dir_b = 1);
Chain rectangle_surface(const BoxGeometry& box, const std::vector<int>& anchor, int l1, int l2,
                        int dir_a = 0, int dir_b = 1);

// c_{I,P} = number of blocks of the partition meeting I an odd number of
// times. I is a bitmask over the partition's ground set.
int c_coefficient(std::uint32_t interaction_set, const SetPartition& partition);

// S(n) = sum over partitions with an even number of blocks of (|P|-1)!.
// (The one-block partition is odd, so it never contributes.)
std::uint64_t s_of_n(int n);

struct UrsellFactorization {
  double a_full = 0.0;                               // a_{[n]}
  std::vector<std::pair<SetPartition, double>> b;    // b_P for P != {[n]}
  double v_plus = 0.0, v_minus = 0.0;

  double reconstruct() const { return a_full * (1.0 + v_plus + v_minus); }
};

// a_P = (-1)^{|P|-1} (|P|-1)! prod_B E[prod_{i in B} X_i]; b_P = a_P / a_{[n]};
// v_plus / v_minus collect b_P by parity of |P|. Throws DomainError when
// a_{[n]} vanishes.
UrsellFactorization factorize_ursell(int n, const MomentProvider& moments);

enum class SpecialLoopKind { fig3_10edge, fig4_12edge, fig5_16edge_2d };

// The anchored special loops. fig3/fig4 need m >= 3; fig5 lives in the
// (e1,e2) plane of any box. `anchor` is the hub vertex for fig3/fig4 and
// the lower-left inner corner region for fig5.
Chain special_loop(const BoxGeometry& box, SpecialLoopKind kind, const std::vector<int>& anchor);

// All unordered pairs of loops (gamma_1, gamma_2) with gamma = gamma_1 +
// gamma_2 as formal sums: the support splits in two, each part connected
// and closed with its inherited coefficients. Guarded to |gamma| <= 24.
std::vector<std::pair<Chain, Chain>> decompose_two_loops(const BoxGeometry& box,
                                                         const Chain& gamma);

}  // namespace z2lgt
