// Discrete exterior calculus on a box: boundary, coboundary, exterior
// derivative, evaluation of forms on chains, Stokes pairing and GF(2)
// solving for the Poincare lemma.
#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "z2lgt/box.hpp"
#include "z2lgt/chain.hpp"

namespace z2lgt {

// Boundary of an oriented cell, 1 <= k <= m. For a plaquette this is the
// four-edge perimeter chain.
Chain boundary(const BoxGeometry& box, const KCell& cell);
// Linear extension to chains.
Chain boundary(const BoxGeometry& box, const Chain& chain);

// Coboundary: the (k+1)-cells whose boundary contains the cell (with the
// incidence sign), clipped to the box. Requires k <= m-1.
Chain coboundary(const BoxGeometry& box, const KCell& cell);

// Exterior derivative of a Z2 k-form, k <= m-1: (df)(y) = sum_{c in dy} f(c).
Z2Form exterior_derivative(const BoxGeometry& box, const Z2Form& f);

// Z2 pairing: sum of f over the support of q, coefficients taken mod 2.
// Degrees must match.
int eval_on_chain(const BoxGeometry& box, const Z2Form& f, const Chain& q);

// Chain predicates. A loop is a degree-1 chain with coefficients in
// {-1,0,1}, zero boundary and connected support.
bool is_loop(const BoxGeometry& box, const Chain& gamma);

// Orient an undirected edge set as a loop: a closed +-1 chain supported on
// exactly those edges. Exists iff every vertex meets an even number of the
// edges and the set is connected; the choice (an Euler traversal from the
// smallest vertex, smallest edge first) is deterministic.
std::optional<Chain> orient_as_loop(const BoxGeometry& box, const std::vector<int>& edge_indices);
// A surface with boundary gamma: degree-2 chain with coefficients in
// {-1,0,1} whose boundary equals gamma.
bool is_surface_with_boundary(const BoxGeometry& box, const Chain& q, const Chain& gamma);

// Both sides of the discrete Stokes identity for a 1-form sigma and a
// surface q whose boundary is a loop: (sum_{e in dq} sigma(e),
// sum_{p in q} dsigma(p)). Throws DomainError when dq is not a loop.
std::pair<int, int> stokes_pair(const BoxGeometry& box, const Z2Form& sigma, const Chain& q);

// Solve d sigma = nu over GF(2). Returns nullopt when nu is not closed (or
// not in the image of d); any closed 2-form on a box is exact, so for
// closed nu a solution is returned.
std::optional<Z2Form> poincare_solve(const BoxGeometry& box, const Z2Form& nu);

// log2 of the number of solutions sigma of d sigma = nu for solvable nu:
// the kernel dimension of d on 1-forms. Independent of nu.
int poincare_count_log2(const BoxGeometry& box);
// The count itself; capacity error if it does not fit in 64 bits.
std::uint64_t poincare_count(const BoxGeometry& box);

// Flip all edge values incident to a vertex (a gauge transformation).
void gauge_flip_vertex(const BoxGeometry& box, Z2Form& sigma, int vertex_idx);

}  // namespace z2lgt
