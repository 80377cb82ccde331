// Single-site heat-bath sampler over edges in deterministic order with a
// counter-based RNG: identical (seed, params, sweeps) inputs give
// bit-identical estimates. Measurements are grouped into batches; standard
// errors come from the batch means, and derived quantities (e.g. cumulants
// of several tracked loops) get jackknife errors over batches.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "z2lgt/model.hpp"

namespace z2lgt {

enum class McmcStart { cold, hot };

// Counter-based uniform in [0,1): a splitmix64-style hash of
// (seed, sweep, site).
double counter_uniform(std::uint64_t seed, std::uint64_t sweep, std::uint64_t site);

struct McmcOptions {
  long sweeps = 10000;       // measurement sweeps (after burn-in)
  std::uint64_t seed = 1;
  McmcStart start = McmcStart::cold;
  int batches = 32;
  long burnin = -1;          // default: sweeps / 5
};

// Per-batch joint parity tallies of the tracked chains.
class McmcMoments {
 public:
  McmcMoments(int n_chains, int batches, long per_batch);

  int n_chains() const { return n_; }
  int batches() const { return batches_; }

  void record(int batch, std::uint32_t mask) { counts_[std::size_t(batch) << n_ | mask] += 1.0; }

  // Mean and standard error of E[prod_{i in subset} rho(sigma(chain_i))].
  std::pair<double, double> moment(std::uint32_t subset) const;
  // Moment from all batches except `skip` (skip = -1 uses all batches).
  double moment_mean(std::uint32_t subset, int skip = -1) const;

  // Jackknife mean/SE of any statistic of the moment table.
  std::pair<double, double> jackknife(
      const std::function<double(const std::function<double(std::uint32_t)>&)>& stat) const;

 private:
  int n_, batches_;
  long per_batch_;
  std::vector<double> counts_;
};

// Run the heat-bath chain tracking the parity of each chain per sweep.
McmcMoments mcmc_joint_moments(const ModelParams& params, const std::vector<Chain>& chains,
                               const McmcOptions& opts);

// Mean and standard error of a single Wilson-type product observable.
std::pair<double, double> mcmc_estimate(const ModelParams& params, const Chain& loop,
                                        const McmcOptions& opts);

// Mean and standard error of an arbitrary observable, measured once per
// sweep after burn-in.
std::pair<double, double> mcmc_estimate(const ModelParams& params,
                                        const std::function<double(const GaugeConfig&)>& observable,
                                        const McmcOptions& opts);

}  // namespace z2lgt
