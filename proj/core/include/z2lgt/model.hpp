// Ising (Z2) lattice gauge theory on a box: Wilson action, Gibbs measure
// mu_{N,beta} ~ exp(-beta S), Wilson loop observables, and exact
// gauge-fixed enumeration of expectations.
//
// The action sums one representative orientation per plaquette,
//   S(sigma) = - sum_{p in P+} rho(dsigma(p)),  rho(g) = 1 - 2g,
// so the per-configuration Gibbs weight relative to sigma = 0 is
// exp(-2 beta #{p : dsigma(p) = 1}). Exact enumeration accumulates
// beta-independent counts indexed by (joint observable parity, flipped
// plaquette count); a single pass then serves every beta and every product
// observable over the tracked chains.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "z2lgt/box.hpp"
#include "z2lgt/chain.hpp"

namespace z2lgt {

struct ModelParams {
  BoxGeometry box;
  double beta = 0.0;
};

// A gauge field configuration: Z2 spins on positive edges.
struct GaugeConfig {
  Z2Form spins;  // degree 1

  static GaugeConfig zero(const BoxGeometry& box) { return {Z2Form::zero(box, 1)}; }
  // rho of the spin on a positive edge: +1 or -1.
  int spin_sign(int edge_idx) const { return spins.value(edge_idx) ? -1 : +1; }
};

double wilson_action(const BoxGeometry& box, const GaugeConfig& sigma);

// rho(sum of sigma over gamma) in {-1,+1}; gamma must be a degree-1 chain.
int wilson_loop_value(const BoxGeometry& box, const GaugeConfig& sigma, const Chain& gamma);

// BFS spanning tree from the lexicographically smallest vertex; edges are
// explored in ascending edge index so the tree is deterministic.
struct GaugePlan {
  std::vector<int> tree_edges;
  std::vector<int> free_edges;  // ascending
};
GaugePlan gauge_fixing_plan(const BoxGeometry& box, bool gauge_fix);

// beta-independent enumeration result: counts[mask][flips] = number of
// enumerated configurations with the given joint parity mask over the
// tracked chains and the given number of plaquettes with dsigma = 1.
class JointCounts {
 public:
  JointCounts(int n_chains, int max_flips);

  int n_chains() const { return n_; }
  double& at(std::uint32_t mask, int flips) { return w_[std::size_t(mask) * (max_flips_ + 1) + flips]; }
  double at(std::uint32_t mask, int flips) const { return w_[std::size_t(mask) * (max_flips_ + 1) + flips]; }

  double partition_sum(double beta) const;
  // E[prod_{i in subset} rho(sigma(chain_i))] at the given beta.
  double moment(double beta, std::uint32_t subset) const;

  void accumulate(const JointCounts& other);

 private:
  int n_, max_flips_;
  std::vector<double> w_;
};

// Enumerate the model exactly, tracking the Z2 parity of each chain.
// With gauge_fix the spins on a spanning tree are pinned to zero, which is
// valid for gauge-invariant observables (products over closed loops);
// disable it for bare edge spins. Throws CapacityError when the number of
// free edges exceeds budget_log2 (message names the required exponent).
JointCounts exact_joint_counts(const BoxGeometry& box, const std::vector<Chain>& chains,
                               bool gauge_fix, int budget_log2 = 30, int workers = 1);

// Generic exact expectation of an arbitrary observable. Slower path; the
// observable must be gauge invariant when gauge_fix is set.
double exact_expectation(const ModelParams& params,
                         const std::function<double(const GaugeConfig&)>& observable,
                         bool gauge_fix = true, int budget_log2 = 30);

// E[prod_{i in subset} W_{loops[i]}] by exact enumeration.
double exact_wilson_moment(const ModelParams& params, const std::vector<Chain>& loops,
                           std::uint32_t subset, int budget_log2 = 30, int workers = 1);

}  // namespace z2lgt
