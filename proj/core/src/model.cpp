#include "z2lgt/model.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <future>
#include <queue>

#include "z2lgt/dec.hpp"

namespace z2lgt {

double wilson_action(const BoxGeometry& box, const GaugeConfig& sigma) {
  Z2Form ds = exterior_derivative(box, sigma.spins);
  int np = box.num_cells(2);
  int flips = ds.support_size();
  return -(double(np) - 2.0 * flips);
}

int wilson_loop_value(const BoxGeometry& box, const GaugeConfig& sigma, const Chain& gamma) {
  if (gamma.k != 1) throw DomainError("wilson_loop_value: expected a degree-1 chain");
  return eval_on_chain(box, sigma.spins, gamma) ? -1 : +1;
}

GaugePlan gauge_fixing_plan(const BoxGeometry& box, bool gauge_fix) {
  GaugePlan plan;
  int ne = box.num_cells(1);
  if (!gauge_fix) {
    plan.free_edges.resize(ne);
    for (int e = 0; e < ne; ++e) plan.free_edges[e] = e;
    return plan;
  }
  std::vector<char> visited(box.num_cells(0), 0);
  std::vector<char> on_tree(ne, 0);
  std::queue<int> bfs;
  bfs.push(0);  // vertex 0 is the lexicographically smallest
  visited[0] = 1;
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (int e : box.vertex_edges(v)) {
      auto [t, h] = box.edge_endpoints(e);
      int u = (t == v) ? h : t;
      if (!visited[u]) {
        visited[u] = 1;
        on_tree[e] = 1;
        plan.tree_edges.push_back(e);
        bfs.push(u);
      }
    }
  }
  for (int e = 0; e < ne; ++e)
    if (!on_tree[e]) plan.free_edges.push_back(e);
  return plan;
}

JointCounts::JointCounts(int n_chains, int max_flips)
    : n_(n_chains), max_flips_(max_flips),
      w_((std::size_t(1) << n_chains) * (max_flips + 1), 0.0) {}

double JointCounts::partition_sum(double beta) const {
  std::vector<double> boltz(max_flips_ + 1);
  for (int f = 0; f <= max_flips_; ++f) boltz[f] = std::exp(-2.0 * beta * f);
  double z = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n_); ++mask)
    for (int f = 0; f <= max_flips_; ++f) z += at(mask, f) * boltz[f];
  return z;
}

double JointCounts::moment(double beta, std::uint32_t subset) const {
  std::vector<double> boltz(max_flips_ + 1);
  for (int f = 0; f <= max_flips_; ++f) boltz[f] = std::exp(-2.0 * beta * f);
  double num = 0.0, den = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n_); ++mask) {
    double row = 0.0;
    for (int f = 0; f <= max_flips_; ++f) row += at(mask, f) * boltz[f];
    den += row;
    num += (popcount32(mask & subset) & 1) ? -row : row;
  }
  return num / den;
}

void JointCounts::accumulate(const JointCounts& other) {
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] += other.w_[i];
}

namespace {

struct EnumTables {
  std::vector<std::vector<int>> edge_plaquettes;  // per free edge
  std::vector<std::uint32_t> edge_chain_mask;     // per free edge
};

EnumTables make_tables(const BoxGeometry& box, const std::vector<Chain>& chains,
                       const std::vector<int>& free_edges) {
  EnumTables t;
  t.edge_plaquettes.resize(free_edges.size());
  t.edge_chain_mask.assign(free_edges.size(), 0);
  for (std::size_t i = 0; i < free_edges.size(); ++i) {
    int e = free_edges[i];
    for (auto& [p, s] : box.cofaces_of(1, e)) t.edge_plaquettes[i].push_back(p);
    for (std::size_t c = 0; c < chains.size(); ++c) {
      int coeff = chains[c][e];
      if (coeff & 1) t.edge_chain_mask[i] |= (1u << c);
    }
  }
  return t;
}

// Enumerate gray-coded free-edge assignments in [begin, end), accumulating
// (parity mask, flip count) occurrences.
void run_block(const BoxGeometry& box, const EnumTables& t, std::uint64_t begin,
               std::uint64_t end, JointCounts& out) {
  int nf = static_cast<int>(t.edge_plaquettes.size());
  std::vector<std::uint8_t> plaq_parity(box.num_cells(2), 0);
  int flips = 0;
  std::uint32_t mask = 0;
  auto flip_edge = [&](int i) {
    for (int p : t.edge_plaquettes[i]) {
      if (plaq_parity[p] ^= 1)
        ++flips;
      else
        --flips;
    }
    mask ^= t.edge_chain_mask[i];
  };
  std::uint64_t g = begin ^ (begin >> 1);
  for (int i = 0; i < nf; ++i)
    if ((g >> i) & 1) flip_edge(i);
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    out.at(mask, flips) += 1.0;
    std::uint64_t next = idx + 1;
    if (next < end) flip_edge(__builtin_ctzll(next));
  }
}

}  // namespace

JointCounts exact_joint_counts(const BoxGeometry& box, const std::vector<Chain>& chains,
                               bool gauge_fix, int budget_log2, int workers) {
  if (chains.size() > 12) throw DomainError("exact_joint_counts: at most 12 tracked chains");
  for (const Chain& c : chains)
    if (c.k != 1) throw DomainError("exact_joint_counts: chains must have degree 1");
  GaugePlan plan = gauge_fixing_plan(box, gauge_fix);
  int nf = static_cast<int>(plan.free_edges.size());
  if (nf > budget_log2)
    throw CapacityError("exact enumeration needs 2^" + std::to_string(nf) +
                            " configurations, over the 2^" + std::to_string(budget_log2) +
                            " budget",
                        nf);
  EnumTables tables = make_tables(box, chains, plan.free_edges);
  int np = box.num_cells(2);
  std::uint64_t total = std::uint64_t(1) << nf;

  // Fixed block decomposition keeps results independent of worker count.
  int nblocks = (nf >= 6) ? 64 : (1 << nf);
  std::uint64_t per = total / nblocks;
  std::vector<JointCounts> partial(nblocks, JointCounts(static_cast<int>(chains.size()), np));
  workers = std::max(1, workers);
  std::atomic<int> next_block{0};
  auto work = [&]() {
    for (;;) {
      int b = next_block.fetch_add(1);
      if (b >= nblocks) return;
      run_block(box, tables, per * b, (b + 1 == nblocks) ? total : per * (b + 1), partial[b]);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::future<void>> fs;
    for (int w = 0; w < workers; ++w) fs.push_back(std::async(std::launch::async, work));
    for (auto& f : fs) f.get();
  }
  JointCounts result(static_cast<int>(chains.size()), np);
  for (int b = 0; b < nblocks; ++b) result.accumulate(partial[b]);
  return result;
}

double exact_expectation(const ModelParams& params,
                         const std::function<double(const GaugeConfig&)>& observable,
                         bool gauge_fix, int budget_log2) {
  const BoxGeometry& box = params.box;
  GaugePlan plan = gauge_fixing_plan(box, gauge_fix);
  int nf = static_cast<int>(plan.free_edges.size());
  if (nf > budget_log2)
    throw CapacityError("exact enumeration needs 2^" + std::to_string(nf) +
                            " configurations, over the 2^" + std::to_string(budget_log2) +
                            " budget",
                        nf);
  EnumTables tables = make_tables(box, {}, plan.free_edges);
  GaugeConfig sigma = GaugeConfig::zero(box);
  std::vector<std::uint8_t> plaq_parity(box.num_cells(2), 0);
  int flips = 0;
  auto flip_edge = [&](int i) {
    sigma.spins.toggle(plan.free_edges[i]);
    for (int p : tables.edge_plaquettes[i]) {
      if (plaq_parity[p] ^= 1)
        ++flips;
      else
        --flips;
    }
  };
  std::uint64_t total = std::uint64_t(1) << nf;
  double num = 0.0, den = 0.0;
  for (std::uint64_t idx = 0;; ++idx) {
    double w = std::exp(-2.0 * params.beta * flips);
    num += w * observable(sigma);
    den += w;
    if (idx + 1 == total) break;
    flip_edge(__builtin_ctzll(idx + 1));
  }
  return num / den;
}

double exact_wilson_moment(const ModelParams& params, const std::vector<Chain>& loops,
                           std::uint32_t subset, int budget_log2, int workers) {
  JointCounts jc = exact_joint_counts(params.box, loops, /*gauge_fix=*/true, budget_log2, workers);
  return jc.moment(params.beta, subset);
}

}  // namespace z2lgt
