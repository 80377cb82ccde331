#include "z2lgt/mcmc.hpp"

#include <cmath>

#include "z2lgt/dec.hpp"

namespace z2lgt {

namespace {

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t sweep, std::uint64_t site) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (sweep + 1) + 0xd1342543de82ef95ULL * (site + 1);
  x = mix64(mix64(x));
  return double(x >> 11) * 0x1.0p-53;
}

McmcMoments::McmcMoments(int n_chains, int batches, long per_batch)
    : n_(n_chains), batches_(batches), per_batch_(per_batch),
      counts_(std::size_t(batches) << n_chains, 0.0) {}

double McmcMoments::moment_mean(std::uint32_t subset, int skip) const {
  double num = 0.0, den = 0.0;
  for (int b = 0; b < batches_; ++b) {
    if (b == skip) continue;
    for (std::uint32_t mask = 0; mask < (1u << n_); ++mask) {
      double c = counts_[std::size_t(b) << n_ | mask];
      den += c;
      num += (popcount32(mask & subset) & 1) ? -c : c;
    }
  }
  return num / den;
}

std::pair<double, double> McmcMoments::moment(std::uint32_t subset) const {
  std::vector<double> means(batches_);
  for (int b = 0; b < batches_; ++b) {
    double num = 0.0, den = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n_); ++mask) {
      double c = counts_[std::size_t(b) << n_ | mask];
      den += c;
      num += (popcount32(mask & subset) & 1) ? -c : c;
    }
    means[b] = num / den;
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= batches_;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= (batches_ > 1) ? (batches_ - 1) : 1;
  return {mean, std::sqrt(var / batches_)};
}

std::pair<double, double> McmcMoments::jackknife(
    const std::function<double(const std::function<double(std::uint32_t)>&)>& stat) const {
  double full = stat([this](std::uint32_t s) { return moment_mean(s, -1); });
  std::vector<double> leave(batches_);
  for (int b = 0; b < batches_; ++b)
    leave[b] = stat([this, b](std::uint32_t s) { return moment_mean(s, b); });
  double lbar = 0.0;
  for (double v : leave) lbar += v;
  lbar /= batches_;
  double var = 0.0;
  for (double v : leave) var += (v - lbar) * (v - lbar);
  var *= double(batches_ - 1) / batches_;
  double mean = batches_ * full - (batches_ - 1) * lbar;  // bias-corrected
  return {mean, std::sqrt(var)};
}

namespace {

// Deterministic heat-bath run: edges in index order, counter-based draws,
// one measurement callback per post-burn-in sweep.
void run_heat_bath(const ModelParams& params, const McmcOptions& opts, long measured,
                   const std::function<void(long, const Z2Form&)>& measure) {
  const BoxGeometry& box = params.box;
  const double beta = params.beta;
  int ne = box.num_cells(1);
  int np = box.num_cells(2);

  std::vector<std::vector<int>> edge_plaq(ne);
  int max_coord = 0;
  for (int e = 0; e < ne; ++e) {
    for (auto& [p, s] : box.cofaces_of(1, e)) edge_plaq[e].push_back(p);
    max_coord = std::max(max_coord, static_cast<int>(edge_plaq[e].size()));
  }
  std::vector<double> p_zero(2 * max_coord + 1);  // index h + max_coord
  for (int h = -max_coord; h <= max_coord; ++h)
    p_zero[h + max_coord] = 1.0 / (1.0 + std::exp(-2.0 * beta * h));

  Z2Form spins = Z2Form::zero(box, 1);
  std::vector<std::uint8_t> plaq_parity(np, 0);
  auto toggle_edge = [&](int e) {
    spins.toggle(e);
    for (int p : edge_plaq[e]) plaq_parity[p] ^= 1;
  };
  if (opts.start == McmcStart::hot) {
    for (int e = 0; e < ne; ++e)
      if (counter_uniform(opts.seed, 0, std::uint64_t(e) + 0x7f000000ULL) < 0.5) toggle_edge(e);
  }

  long burnin = (opts.burnin >= 0) ? opts.burnin : opts.sweeps / 5;
  for (long sweep = 0; sweep < burnin + measured; ++sweep) {
    for (int e = 0; e < ne; ++e) {
      int h = 0;
      bool se = spins.value(e);
      for (int p : edge_plaq[e]) {
        bool other = plaq_parity[p] ^ se;  // parity of the other edges on p
        h += other ? -1 : +1;
      }
      bool want_one = counter_uniform(opts.seed, sweep + 1, e) >= p_zero[h + max_coord];
      if (want_one != se) toggle_edge(e);
    }
    if (sweep >= burnin) measure(sweep - burnin, spins);
  }
}

}  // namespace

McmcMoments mcmc_joint_moments(const ModelParams& params, const std::vector<Chain>& chains,
                               const McmcOptions& opts) {
  if (opts.sweeps < 1) throw DomainError("mcmc: sweeps must be >= 1");
  if (chains.size() > 12) throw DomainError("mcmc: at most 12 tracked chains");
  int batches = static_cast<int>(std::min<long>(opts.batches, opts.sweeps));
  long per_batch = opts.sweeps / batches;
  long measured = per_batch * batches;  // drop the remainder for equal batches
  McmcMoments acc(static_cast<int>(chains.size()), batches, per_batch);
  run_heat_bath(params, opts, measured, [&](long step, const Z2Form& spins) {
    std::uint32_t mask = 0;
    for (std::size_t c = 0; c < chains.size(); ++c)
      if (eval_on_chain(params.box, spins, chains[c])) mask |= (1u << c);
    acc.record(static_cast<int>(step / per_batch), mask);
  });
  return acc;
}

std::pair<double, double> mcmc_estimate(const ModelParams& params, const Chain& loop,
                                        const McmcOptions& opts) {
  McmcMoments m = mcmc_joint_moments(params, {loop}, opts);
  return m.moment(1u);
}

std::pair<double, double> mcmc_estimate(
    const ModelParams& params, const std::function<double(const GaugeConfig&)>& observable,
    const McmcOptions& opts) {
  if (opts.sweeps < 1) throw DomainError("mcmc: sweeps must be >= 1");
  int batches = static_cast<int>(std::min<long>(opts.batches, opts.sweeps));
  long per_batch = opts.sweeps / batches;
  long measured = per_batch * batches;
  std::vector<double> batch_sum(batches, 0.0);
  run_heat_bath(params, opts, measured, [&](long step, const Z2Form& spins) {
    batch_sum[static_cast<int>(step / per_batch)] += observable(GaugeConfig{spins});
  });
  double mean = 0.0;
  for (double s : batch_sum) mean += s / per_batch;
  mean /= batches;
  double var = 0.0;
  for (double s : batch_sum) {
    double m = s / per_batch;
    var += (m - mean) * (m - mean);
  }
  var /= (batches > 1) ? (batches - 1) : 1;
  return {mean, std::sqrt(var / batches)};
}

}  // namespace z2lgt
