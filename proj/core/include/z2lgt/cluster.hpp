// Low-temperature cluster expansion machinery: the plaquette adjacency
// graph G2, vortex (connected closed 2-form) enumeration, signed
// connected-graph coefficients, activities and correlated activities,
// interaction classification against oriented surfaces, and truncated sums
//   Psi_beta[I]          (sum of correlated activities over Xi[I])
//   -log E[W_gamma]      (truncated to a support budget).
//
// Activities follow the convention phi_beta(nu) = exp(-4 beta |supp nu+|).
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "z2lgt/box.hpp"
#include "z2lgt/chain.hpp"

namespace z2lgt {

struct PlaquetteGraph {
  // adj[p] lists plaquettes q != p such that some 3-cell contains both
  // (coboundary supports intersect). Sorted ascending. Empty lists for m=2.
  std::vector<std::vector<int>> adj;
};

PlaquetteGraph build_plaquette_graph(const BoxGeometry& box);

// A vortex: closed 2-form whose positive support induces a connected
// subgraph of G2. Canonical representative: the sorted support itself
// (its minimal plaquette is the paper's canonical anchor).
struct Vortex {
  std::vector<int> support;  // sorted plaquette indices

  int support_size() const { return static_cast<int>(support.size()); }
};

struct TruncationPolicy {
  int max_total_support = 8;   // cap on |V| = sum of multiplicities x support sizes
  int max_multiplicity = 4;    // cap on n(V)
  std::vector<int> region;     // sorted plaquette indices allowed to carry support
  std::uint64_t max_nodes = 200'000'000;  // enumeration budget

  TruncationPolicy() = default;
};

// All non-boundary positive plaquettes (the paper's vortex support set).
std::vector<int> interior_region(const BoxGeometry& box);
// Every positive plaquette, including box faces. Used when the expansion
// must reproduce a finite-box expectation exactly.
std::vector<int> full_region(const BoxGeometry& box);
// Plaquettes within an L-infinity pad of the bounding box of the given
// 2-chains' supports; interior only unless include_boundary.
std::vector<int> slab_region(const BoxGeometry& box, const std::vector<Chain>& surfaces, int pad,
                             bool include_boundary = false);

// Enumerate every vortex with support inside policy.region and
// |supp| <= policy.max_total_support, each exactly once. When anchors is
// nonempty only vortices containing at least one anchor plaquette are
// produced. Requires m >= 3. Throws CapacityError past policy.max_nodes.
std::vector<Vortex> enumerate_vortices(const BoxGeometry& box, const PlaquetteGraph& graph,
                                       const TruncationPolicy& policy,
                                       const std::vector<int>& anchors = {});

// Shape classes of small vortices, recovered by searching for a generating
// 1-form: a single edge (butterfly), two edges (bent: perpendicular at a
// shared vertex; parallel: opposite sides of a plaquette), or three
// mutually perpendicular edges at one vertex (tripod).
enum class VortexShape { edge_butterfly, bent_pair, parallel_pair, vertex_tripod, other };
VortexShape classify_vortex_shape(const BoxGeometry& box, const Vortex& v);
const char* vortex_shape_name(VortexShape s);

// Signed sum over connected graphs on [k] whose edges all join adjacent
// vertices: sum_{G connected} (-1)^{|E(G)|} prod_{(i,j) in E(G)} adj(i,j).
// Guarded to k <= 8.
long long connected_graph_sum(int k, const std::function<bool(int, int)>& adjacent);

// The tuple coefficient U(nu_1..nu_k) = connected_graph_sum / k!.
double ursell_graph_coefficient(int k, const std::function<bool(int, int)>& adjacent);

// A vortex cluster: multiset of registry ids with multiplicities, sorted by
// id. total_support = |V|, n_total = n(V).
struct VortexCluster {
  std::vector<std::pair<int, int>> parts;  // (vortex id, multiplicity)
  int total_support = 0;
  int n_total = 0;
};

// phi_beta(nu) = exp(-4 beta |supp nu+|).
double activity(const Vortex& nu, double beta);

// Correlated activity Psi_beta(V) = U(V) exp(-4 beta |V|), where the
// multiset coefficient carries the polymer normalization
// U(V) = connected_graph_sum(labeled copies) / prod_nu n_V(nu)!.
double correlated_activity(const VortexCluster& cluster, const std::vector<Vortex>& registry,
                           const PlaquetteGraph& graph, double beta);

// Subset I of surface indices the cluster interacts with:
// i in I iff V(q_i) = sum_nu n_V(nu) nu(q_i) = 1 in Z2.
std::uint32_t classify_interaction(const VortexCluster& cluster,
                                   const std::vector<Vortex>& registry,
                                   const std::vector<Chain>& surfaces);

struct TruncatedSum {
  double value = 0.0;
  // Empirical surrogate for the first discarded order: (number of included
  // interacting clusters at the largest included order) x the activity two
  // support units beyond it. Zero when nothing was enumerated.
  double remainder_indicator = 0.0;
  long clusters_used = 0;
};

// Psi_beta[I]: sum of correlated activities of clusters interacting with
// exactly the surfaces indexed by I (bitmask over `surfaces`).
TruncatedSum psi_beta_I(const BoxGeometry& box, const PlaquetteGraph& graph,
                        const std::vector<Chain>& surfaces, std::uint32_t interaction_set,
                        double beta, const TruncationPolicy& policy);

// Truncated -log E[W_gamma] = sum over clusters of 2 V(q) Psi_beta(V);
// requires boundary(q) == gamma.
TruncatedSum truncated_log_wilson(const BoxGeometry& box, const PlaquetteGraph& graph,
                                  const Chain& gamma, const Chain& surface, double beta,
                                  const TruncationPolicy& policy);

// Enumerate clusters over an explicit registry (visible for tests and the
// partition-of-Xi property). Calls back with each cluster whose total
// support fits the policy; when require_anchor is set at least one part
// must be flagged anchored.
void for_each_cluster(const std::vector<Vortex>& registry, const std::vector<char>& anchored,
                      const PlaquetteGraph& graph, const BoxGeometry& box,
                      const TruncationPolicy& policy, bool require_anchor,
                      const std::function<void(const VortexCluster&)>& visit);

}  // namespace z2lgt
