#include "z2lgt/ursell.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>
#include <unordered_map>

#include "z2lgt/dec.hpp"

namespace z2lgt {

namespace {

void rgs_recurse(int n, int pos, int maxv, std::vector<int>& a,
                 const std::function<bool(const SetPartition&)>& visit, bool& stop) {
  if (stop) return;
  if (pos == n) {
    SetPartition p;
    p.blocks.assign(maxv + 1, {});
    for (int i = 0; i < n; ++i) p.blocks[a[i]].push_back(i);
    if (!visit(p)) stop = true;
    return;
  }
  for (int v = 0; v <= maxv + 1; ++v) {
    a[pos] = v;
    rgs_recurse(n, pos + 1, std::max(maxv, v), a, visit, stop);
    if (stop) return;
  }
}

}  // namespace

void for_each_partition(int n, const std::function<bool(const SetPartition&)>& visit) {
  if (n < 1 || n > 14)
    throw CapacityError("partition enumeration supports 1 <= n <= 14, got n=" + std::to_string(n),
                        n);
  std::vector<int> a(n, 0);
  bool stop = false;
  rgs_recurse(n, 1, 0, a, visit, stop);
}

std::vector<SetPartition> partitions(int n) {
  if (n > 12) throw CapacityError("materialized partition list supports n <= 12", n);
  std::vector<SetPartition> out;
  for_each_partition(n, [&](const SetPartition& p) {
    out.push_back(p);
    return true;
  });
  return out;
}

std::uint64_t bell_number(int n) {
  // Bell triangle.
  std::vector<std::vector<std::uint64_t>> tri{{1}};
  for (int i = 1; i <= n; ++i) {
    std::vector<std::uint64_t> row{tri.back().back()};
    for (std::uint64_t v : tri.back()) row.push_back(row.back() + v);
    tri.push_back(std::move(row));
  }
  return tri[n][0];
}

double ursell(int n, const MomentProvider& moments) {
  if (n < 1) throw DomainError("ursell: n must be >= 1");
  // Memoize block moments; distinct blocks across partitions repeat heavily.
  std::unordered_map<std::uint32_t, double> memo;
  auto block_moment = [&](std::uint32_t mask) {
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    double v = moments(mask);
    memo.emplace(mask, v);
    return v;
  };
  double factorial[15];
  factorial[0] = 1.0;
  for (int i = 1; i < 15; ++i) factorial[i] = factorial[i - 1] * i;

  double total = 0.0;
  for_each_partition(n, [&](const SetPartition& p) {
    double term = (p.num_blocks() % 2 == 1) ? 1.0 : -1.0;
    term *= factorial[p.num_blocks() - 1];
    for (const auto& block : p.blocks) {
      std::uint32_t mask = 0;
      for (int i : block) mask |= (1u << i);
      term *= block_moment(mask);
      if (term == 0.0) break;
    }
    total += term;
    return true;
  });
  return total;
}

std::optional<Chain> forms_loop(const BoxGeometry& box, const std::vector<KCell>& edges) {
  // Over Z2 the edge spins are orientation independent, so the loop
  // criterion is about the undirected edge set: no repeats, even degree at
  // every vertex, connected support.
  Chain gamma{1, {}};
  std::vector<int> indices;
  for (const KCell& e : edges) {
    if (e.degree() != 1) throw DomainError("forms_loop: inputs must be edges");
    int idx = box.index_of(1, e.base, e.dirs);
    if (idx < 0) throw DomainError("forms_loop: edge outside box");
    if (gamma.coeffs.count(idx)) return std::nullopt;  // multiplicity > 1
    gamma.add(idx, e.sign);
    indices.push_back(idx);
  }
  if (gamma.empty()) return std::nullopt;
  if (is_loop(box, gamma)) return gamma;  // the given orientation closes
  return orient_as_loop(box, indices);
}

double moment(const ModelParams& params, const MomentRequest& request, const MethodSpec& spec) {
  if (request.subset >> request.loops.size())
    throw DomainError("moment: subset indexes past the loop list");
  for (const Chain& loop : request.loops)
    if (!is_loop(params.box, loop)) throw DomainError("moment: every chain must be a loop");
  if (spec.kind == MethodSpec::Kind::exact)
    return exact_wilson_moment(params, request.loops, request.subset, spec.budget_log2,
                               spec.workers);
  McmcMoments m = mcmc_joint_moments(params, request.loops, spec.mcmc);
  return m.moment_mean(request.subset);
}

MomentProvider exact_moment_provider(const ModelParams& params, const std::vector<Chain>& chains,
                                     bool gauge_fix, const MethodSpec& spec) {
  auto counts = std::make_shared<JointCounts>(
      exact_joint_counts(params.box, chains, gauge_fix, spec.budget_log2, spec.workers));
  double beta = params.beta;
  return [counts, beta](std::uint32_t mask) { return counts->moment(beta, mask); };
}

namespace {

std::vector<Chain> single_edge_chains(const BoxGeometry& box, const std::vector<KCell>& edges) {
  std::vector<Chain> chains;
  for (const KCell& e : edges) {
    int idx = box.index_of(1, e.base, e.dirs);
    if (idx < 0) throw DomainError("edge outside box");
    Chain c{1, {}};
    c.add(idx, e.sign);
    chains.push_back(std::move(c));
  }
  return chains;
}

// All index subsets whose edges form a loop. Repeated positive edges make
// every superset fail, so they are screened first.
std::vector<std::uint32_t> loop_block_masks(const BoxGeometry& box,
                                            const std::vector<KCell>& edges) {
  int n = static_cast<int>(edges.size());
  if (n > 24) throw CapacityError("loop-block enumeration guarded to n <= 24", n);
  std::vector<std::uint32_t> masks;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<KCell> sub;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1) sub.push_back(edges[i]);
    if (forms_loop(box, sub)) masks.push_back(mask);
  }
  return masks;
}

// Sum over partitions of [n] whose blocks are all loop subsets, of
// (-1)^{|P|-1} (|P|-1)! prod_blocks moment(block). Blocks are generated in
// min-element order, so each partition appears once. Bell-number blowup is
// avoided entirely: only loop blocks are combined.
double loop_cover_sum(int n, const std::vector<std::uint32_t>& blocks,
                      const MomentProvider& moment) {
  double fact[32];
  fact[0] = 1.0;
  for (int i = 1; i < 32; ++i) fact[i] = fact[i - 1] * i;
  std::uint32_t all = (n == 32) ? ~0u : ((1u << n) - 1);
  double total = 0.0;
  std::function<void(std::uint32_t, int, double)> rec = [&](std::uint32_t remaining, int used,
                                                            double prod) {
    if (remaining == 0) {
      double sign = (used % 2 == 1) ? 1.0 : -1.0;
      total += sign * fact[used - 1] * prod;
      return;
    }
    std::uint32_t low = remaining & (~remaining + 1);
    for (std::uint32_t b : blocks) {
      if (!(b & low)) continue;
      if ((b & remaining) != b) continue;
      rec(remaining & ~b, used + 1, prod * moment(b));
    }
  };
  rec(all, 0, 1.0);
  return total;
}

}  // namespace

double ursell_edges(const ModelParams& params, const std::vector<KCell>& edges,
                    const MethodSpec& spec, bool use_loop_shortcut) {
  int n = static_cast<int>(edges.size());
  if (!use_loop_shortcut) {
    // Cancellation oracle: evaluate every block of every partition.
    std::vector<Chain> chains = single_edge_chains(params.box, edges);
    MomentProvider raw;
    if (spec.kind == MethodSpec::Kind::exact) {
      // Bare edge spins are not gauge invariant: full enumeration.
      raw = exact_moment_provider(params, chains, /*gauge_fix=*/false, spec);
    } else {
      auto m = std::make_shared<McmcMoments>(mcmc_joint_moments(params, chains, spec.mcmc));
      raw = [m](std::uint32_t mask) { return m->moment_mean(mask); };
    }
    return ursell(n, raw);
  }

  // Shortcut: only partitions into loop blocks contribute. Loop blocks are
  // gauge invariant, so their moments come from one gauge-fixed run (or one
  // chain) tracking each block as a Wilson product.
  std::vector<std::uint32_t> blocks = loop_block_masks(params.box, edges);
  if (blocks.empty()) return 0.0;
  if (blocks.size() > 12)
    throw CapacityError("too many loop blocks to track at once", blocks.size());
  std::vector<Chain> block_chains;
  for (std::uint32_t b : blocks) {
    Chain c{1, {}};
    for (int i = 0; i < n; ++i)
      if ((b >> i) & 1) c.add(params.box.index_of(edges[i]), edges[i].sign);
    block_chains.push_back(std::move(c));
  }
  std::unordered_map<std::uint32_t, std::uint32_t> block_slot;
  for (std::size_t s = 0; s < blocks.size(); ++s) block_slot.emplace(blocks[s], 1u << s);

  MomentProvider block_moment;
  if (spec.kind == MethodSpec::Kind::exact) {
    auto counts = std::make_shared<JointCounts>(exact_joint_counts(
        params.box, block_chains, /*gauge_fix=*/true, spec.budget_log2, spec.workers));
    double beta = params.beta;
    block_moment = [counts, beta, block_slot](std::uint32_t mask) {
      return counts->moment(beta, block_slot.at(mask));
    };
  } else {
    auto m =
        std::make_shared<McmcMoments>(mcmc_joint_moments(params, block_chains, spec.mcmc));
    block_moment = [m, block_slot](std::uint32_t mask) {
      return m->moment_mean(block_slot.at(mask));
    };
  }
  return loop_cover_sum(n, blocks, block_moment);
}

double ursell_wilson(const ModelParams& params, const std::vector<Chain>& loops,
                     const MethodSpec& spec) {
  int n = static_cast<int>(loops.size());
  if (spec.kind == MethodSpec::Kind::exact)
    return ursell(n, exact_moment_provider(params, loops, /*gauge_fix=*/true, spec));
  return ursell_wilson_mcmc(params, loops, spec.mcmc).first;
}

std::pair<double, double> ursell_wilson_mcmc(const ModelParams& params,
                                             const std::vector<Chain>& loops,
                                             const McmcOptions& opts) {
  int n = static_cast<int>(loops.size());
  McmcMoments m = mcmc_joint_moments(params, loops, opts);
  return m.jackknife(
      [n](const std::function<double(std::uint32_t)>& provider) { return ursell(n, provider); });
}

std::vector<SetPartition> nonzero_partition_report(const BoxGeometry& box,
                                                   const std::vector<KCell>& edges) {
  int n = static_cast<int>(edges.size());
  std::vector<std::uint32_t> blocks = loop_block_masks(box, edges);
  std::vector<SetPartition> out;
  if (blocks.empty()) return out;
  std::uint32_t all = (n == 32) ? ~0u : ((1u << n) - 1);
  std::vector<std::uint32_t> chosen;
  std::function<void(std::uint32_t)> rec = [&](std::uint32_t remaining) {
    if (remaining == 0) {
      SetPartition p;
      for (std::uint32_t b : chosen) {
        std::vector<int> blk;
        for (int i = 0; i < n; ++i)
          if ((b >> i) & 1) blk.push_back(i);
        p.blocks.push_back(std::move(blk));
      }
      out.push_back(std::move(p));
      return;
    }
    std::uint32_t low = remaining & (~remaining + 1);
    for (std::uint32_t b : blocks) {
      if (!(b & low) || (b & remaining) != b) continue;
      chosen.push_back(b);
      rec(remaining & ~b);
      chosen.pop_back();
    }
  };
  rec(all);
  return out;
}

}  // namespace z2lgt
