// Set-partition combinatorics and Ursell (connected correlation) functions
//   U_n = sum over partitions P of [n] of (-1)^{|P|-1} (|P|-1)! prod_B E[prod_{i in B} X_i],
// plus the specializations to edge spins and Wilson loops. Moments are
// abstracted behind a provider keyed by index subset so the combinatorics
// is independent of the measure.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "z2lgt/mcmc.hpp"
#include "z2lgt/model.hpp"

namespace z2lgt {

struct SetPartition {
  // Disjoint nonempty blocks covering [0, n); canonical order: blocks sorted
  // by their minimum element, elements ascending within a block.
  std::vector<std::vector<int>> blocks;

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  friend bool operator==(const SetPartition& a, const SetPartition& b) {
    return a.blocks == b.blocks;
  }
};

// Stream every partition of [0, n) exactly once in canonical
// (restricted-growth string) order. The visitor returns false to stop.
// Capacity guard: 1 <= n <= 14.
void for_each_partition(int n, const std::function<bool(const SetPartition&)>& visit);

// Materialized list; guarded to n <= 12 (Bell numbers grow fast).
std::vector<SetPartition> partitions(int n);

std::uint64_t bell_number(int n);

// E[prod_{i in mask} X_i]; must return 1 for the empty mask.
using MomentProvider = std::function<double(std::uint32_t)>;

double ursell(int n, const MomentProvider& moments);

// The formal sum of the given directed edges, when it is a loop: zero
// boundary and connected support. Any positive edge hit more than once
// (in either orientation) disqualifies the set.
std::optional<Chain> forms_loop(const BoxGeometry& box, const std::vector<KCell>& edges);

struct MethodSpec {
  enum class Kind { exact, mcmc } kind = Kind::exact;
  int budget_log2 = 30;
  int workers = 1;
  McmcOptions mcmc;
};

// A product-of-Wilson-loops moment E[prod_{i in subset} W_{loops[i]}].
struct MomentRequest {
  std::vector<Chain> loops;
  std::uint32_t subset = 0;  // bitmask over `loops`
};

double moment(const ModelParams& params, const MomentRequest& request, const MethodSpec& spec);

// Exact moment provider over the tracked chains, memoized per subset.
MomentProvider exact_moment_provider(const ModelParams& params, const std::vector<Chain>& chains,
                                     bool gauge_fix, const MethodSpec& spec);

// U_n of the edge spins rho(sigma(e_i)). Partitions containing a block
// whose edges do not form a loop contribute exactly zero and are skipped;
// set use_loop_shortcut = false to evaluate every block anyway (the
// cancellation oracle).
double ursell_edges(const ModelParams& params, const std::vector<KCell>& edges,
                    const MethodSpec& spec, bool use_loop_shortcut = true);

// U_n of Wilson observables W_{gamma_i}.
double ursell_wilson(const ModelParams& params, const std::vector<Chain>& loops,
                     const MethodSpec& spec);
// MCMC variant reporting a jackknife standard error as well.
std::pair<double, double> ursell_wilson_mcmc(const ModelParams& params,
                                             const std::vector<Chain>& loops,
                                             const McmcOptions& opts);

// Partitions of the edge index set in which every block forms a loop.
std::vector<SetPartition> nonzero_partition_report(const BoxGeometry& box,
                                                   const std::vector<KCell>& edges);

}  // namespace z2lgt
