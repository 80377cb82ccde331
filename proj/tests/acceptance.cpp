// Acceptance suite: one check per acceptance criterion, each printing a
// single PASS/FAIL line (details indented below it). Run a subset by
// passing criterion numbers as arguments. The process exits with the
// number of failed criteria.
//
// Two clauses are expected to fail and are kept faithful to their stated
// form on purpose: exhaustive enumeration shows the 16-edge planar loop
// admits three two-loop decompositions (not two), and the size-6 vortex
// census contains a third shape class (the vertex tripod) beyond the two
// catalogued ones. The suite prints the counterexamples.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "z2lgt/cluster.hpp"
#include "z2lgt/dec.hpp"
#include "z2lgt/loops.hpp"
#include "z2lgt/mcmc.hpp"
#include "z2lgt/model.hpp"
#include "z2lgt/search2d.hpp"
#include "z2lgt/ursell.hpp"

using namespace z2lgt;

namespace {

int g_workers = 4;

struct Detail {
  std::vector<std::string> lines;
  bool ok = true;

  void expect(bool cond, const std::string& what) {
    ok = ok && cond;
    lines.push_back(std::string("    ") + (cond ? "ok   " : "FAIL ") + what);
  }
};

std::string fnum(double v) {
  char buf[40];
  snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---- criterion 1: 2d exactness ------------------------------------------

bool criterion1(Detail& d) {
  BoxGeometry box({0, 0}, {4, 4});
  struct Shape {
    int l1, l2;
  } shapes[] = {{1, 1}, {2, 1}, {2, 2}};
  for (double beta : {0.3, 0.7, 1.2}) {
    for (auto [l1, l2] : shapes) {
      Chain loop = rectangle_loop(box, {1, 1}, l1, l2);
      double exact = exact_wilson_moment(ModelParams{box, beta}, {loop}, 1u, 30, g_workers);
      double closed = std::pow(std::tanh(beta), l1 * l2);
      d.expect(std::abs(exact - closed) < 1e-12,
               "beta=" + fnum(beta) + " area=" + std::to_string(l1 * l2) + " err=" +
                   fnum(std::abs(exact - closed)) + " < 1e-12");
    }
  }
  return d.ok;
}

// ---- criterion 2: Elitzur and odd-n vanishing ----------------------------

bool criterion2(Detail& d) {
  BoxGeometry box2({0, 0}, {2, 2});
  double beta = 0.8;
  double worst_edge = 0.0;
  for (int e = 0; e < box2.num_cells(1); ++e) {
    Chain c{1, {}};
    c.add(e, 1);
    JointCounts jc = exact_joint_counts(box2, {c}, /*gauge_fix=*/false);
    worst_edge = std::max(worst_edge, std::abs(jc.moment(beta, 1u)));
  }
  d.expect(worst_edge < 1e-14, "max |E[spin]| over all edges = " + fnum(worst_edge) + " < 1e-14");

  BoxGeometry box3({0, 0, 0}, {1, 1, 1});
  std::mt19937_64 rng(42);
  MethodSpec spec;
  double worst_u = 0.0;
  for (int t = 0; t < 50; ++t) {
    const BoxGeometry& b = (t % 2) ? box3 : box2;
    ModelParams params{b, (t % 2) ? 0.6 : 0.8};
    int n = (t % 3 == 0) ? 2 : ((t % 3 == 1) ? 3 : 5);
    std::uniform_int_distribution<int> pick(0, b.num_cells(1) - 1);
    std::set<int> chosen;
    while (static_cast<int>(chosen.size()) < n) chosen.insert(pick(rng));
    std::vector<KCell> edges;
    for (int idx : chosen) edges.push_back(b.cell(1, idx));
    worst_u = std::max(worst_u, std::abs(ursell_edges(params, edges, spec, false)));
  }
  d.expect(worst_u < 1e-12, "max |U_n| over 50 random tuples = " + fnum(worst_u) + " < 1e-12");
  return d.ok;
}

// ---- criterion 3: rectangular positivity ---------------------------------

bool criterion3(Detail& d) {
  BoxGeometry box({0, 0}, {2, 2});
  ModelParams params{box, 0.7};
  MethodSpec spec;
  Chain loop = rectangle_loop(box, {0, 0}, 1, 1);
  std::vector<KCell> edges;
  for (auto& [e, c] : loop.coeffs) {
    KCell cell = box.cell(1, e);
    cell.sign = c;
    edges.push_back(cell);
  }
  double ew = exact_wilson_moment(params, {loop}, 1u);
  double u4 = ursell_edges(params, edges, spec, /*use_loop_shortcut=*/false);
  d.expect(ew > 0.0, "E[W_square] = " + fnum(ew) + " > 0");
  d.expect(std::abs(u4 - ew) < 1e-14, "|U4 - E[W]| = " + fnum(std::abs(u4 - ew)) + " < 1e-14");
  return d.ok;
}

// ---- criterion 4: the 10-edge loop ---------------------------------------

bool criterion4(Detail& d) {
  BoxGeometry box({0, 0, 0}, {3, 3, 3});
  Chain gamma = special_loop(box, SpecialLoopKind::fig3_10edge, {1, 1, 1});
  auto pairs = decompose_two_loops(box, gamma);
  d.expect(pairs.size() == 3, "decompose_two_loops returns " + std::to_string(pairs.size()) +
                                  " pairs (want 3)");
  for (auto& [a, b] : pairs) {
    std::set<std::size_t> sizes{a.coeffs.size(), b.coeffs.size()};
    d.expect(sizes == std::set<std::size_t>{4, 6}, "pair sizes are {4,6}");
  }

  ModelParams params{box, 1.2};
  McmcOptions mc;
  mc.sweeps = 60000;
  mc.seed = 7;
  std::vector<Chain> loops{gamma};
  for (auto& [a, b] : pairs) {
    loops.push_back(a);
    loops.push_back(b);
  }
  McmcMoments moments = mcmc_joint_moments(params, loops, mc);
  auto [e_gamma, se_gamma] = moments.moment(1u);
  d.expect(e_gamma - 3.0 * se_gamma > 0.9, "E[W_gamma] = " + fnum(e_gamma) + " > 0.9 (3 sigma)");
  double u10 = moments.moment_mean(1u);
  for (std::size_t i = 1; i + 1 < loops.size() + 1; i += 2) {
    auto [m1, s1] = moments.moment(1u << i);
    auto [m2, s2] = moments.moment(1u << (i + 1));
    double prod = m1 * m2;
    double se = std::abs(m1) * s2 + std::abs(m2) * s1;
    d.expect(prod - 3.0 * se > 0.9,
             "product E" + std::to_string(i) + "*E" + std::to_string(i + 1) + " = " + fnum(prod) +
                 " > 0.9 (3 sigma)");
    u10 -= prod;
  }
  d.expect(u10 < -1.0, "reduced U10 = " + fnum(u10) + " < -1");
  return d.ok;
}

// ---- criterion 5: Appendix A ---------------------------------------------

bool criterion5(Detail& d) {
  Search2DReport r14 = min_doubly_decomposable_search(14);
  d.expect(r14.items.empty(), "search(max_len=14) reports " + std::to_string(r14.items.size()) +
                                  " loops (want 0); enumerated " +
                                  std::to_string(r14.loops_raw) + " loops");
  BoxGeometry flat({0, 0}, {5, 5});
  Chain fig5 = special_loop(flat, SpecialLoopKind::fig5_16edge_2d, {1, 1});
  auto pairs = decompose_two_loops(flat, fig5);
  // Stated criterion: exactly 2. Exhaustive decomposition finds a third
  // split (two octagons through the touch vertices); kept faithful, so
  // this clause fails with the counterexample on display.
  d.expect(pairs.size() == 2,
           "16-edge loop decompositions = " + std::to_string(pairs.size()) +
               " (stated 2; the extra split is into two octagons through the touch points)");
  return d.ok;
}

// ---- criterion 6: vortex census ------------------------------------------

bool criterion6(Detail& d) {
  BoxGeometry box({0, 0, 0}, {3, 3, 3});
  PlaquetteGraph graph = build_plaquette_graph(box);
  TruncationPolicy policy;
  policy.max_total_support = 8;
  policy.region = interior_region(box);
  std::vector<Vortex> vortices = enumerate_vortices(box, graph, policy);

  bool all_even = true, small_sizes_ok = true;
  std::map<std::string, int> shapes;
  for (const Vortex& v : vortices) {
    int s = v.support_size();
    all_even = all_even && (s % 2 == 0);
    if (s < 8) small_sizes_ok = small_sizes_ok && (s == 4 || s == 6);
    if (s == 6) shapes[vortex_shape_name(classify_vortex_shape(box, v))]++;
  }
  d.expect(all_even, "every vortex support size is even");
  d.expect(small_sizes_ok, "sizes below 8 are exactly {4, 6}");
  // Stated criterion: size-6 vortices match the two catalogued shapes.
  // Exhaustive enumeration also finds vertex tripods; kept faithful, so
  // this clause fails with the census on display.
  std::string census;
  for (auto& [name, count] : shapes) census += name + "=" + std::to_string(count) + " ";
  bool only_two = shapes.count("vertex_tripod") == 0 && shapes.count("other") == 0;
  d.expect(only_two, "size-6 shapes: " + census + "(stated: bent_pair and parallel_pair only)");
  return d.ok;
}

// ---- criterion 7: cluster expansion leading orders ------------------------

bool criterion7(Detail& d) {
  BoxGeometry box = BoxGeometry::from_vertex_counts({12, 12, 12});
  PlaquetteGraph graph = build_plaquette_graph(box);
  StackedLoopFamily fam = build_stacked_family(box, {5, 5, 5}, 1, 1, 2);
  TruncationPolicy policy;
  policy.max_total_support = 8;
  policy.max_multiplicity = 4;
  policy.region = slab_region(box, fam.surfaces, 8);
  struct Case {
    double beta, tol;
  } cases[] = {{1.5, 0.15}, {2.0, 0.05}};
  for (auto [beta, tol] : cases) {
    TruncatedSum psi = psi_beta_I(box, graph, fam.surfaces, 0b11u, beta, policy);
    double ratio = psi.value / (4.0 * std::exp(-24.0 * beta));
    d.expect(std::abs(ratio - 1.0) < tol, "Psi ratio at beta=" + fnum(beta) + " is " +
                                              fnum(ratio) + " within " + fnum(tol) + " of 1");
  }

  BoxGeometry small({0, 0, 0}, {2, 2, 2});
  PlaquetteGraph small_graph = build_plaquette_graph(small);
  Chain q = rectangle_surface(small, {1, 1, 1}, 1, 1);
  Chain gamma = boundary(small, q);
  TruncationPolicy full;
  full.max_total_support = 8;
  full.max_multiplicity = 4;
  full.region = full_region(small);
  double beta = 1.5;
  TruncatedSum t = truncated_log_wilson(small, small_graph, gamma, q, beta, full);
  // The activity convention exp(-4 beta |supp|) corresponds to the model
  // Gibbs weight at inverse temperature 2 beta.
  double exact =
      -std::log(exact_wilson_moment(ModelParams{small, 2.0 * beta}, {gamma}, 1u, 30, g_workers));
  double rel = std::abs(t.value - exact) / exact;
  d.expect(rel < 0.10, "truncated -log E[W] rel err = " + fnum(rel) + " < 0.10 (truncated=" +
                           fnum(t.value) + ", exact=" + fnum(exact) + ")");
  return d.ok;
}

// ---- criterion 8: factorization identity ----------------------------------

bool criterion8(Detail& d) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  for (int n = 2; n <= 6; ++n) {
    std::vector<double> val(std::size_t(1) << n, 1.0);
    for (std::size_t m = 1; m < val.size(); ++m) val[m] = u(rng);
    MomentProvider mom = [&](std::uint32_t mask) { return val[mask]; };
    UrsellFactorization f = factorize_ursell(n, mom);
    double direct = ursell(n, mom);
    double err = std::abs(f.reconstruct() - direct);
    d.expect(err < 1e-12 * std::max(1.0, std::abs(direct)),
             "synthetic n=" + std::to_string(n) + " reconstruction err = " + fnum(err));
  }
  for (int n = 3; n <= 4; ++n) {
    BoxGeometry box({0, 0, 0}, {1, 1, n});
    StackedLoopFamily fam = build_stacked_family(box, {0, 0, 0}, 1, 1, n);
    MethodSpec spec;
    MomentProvider mom = exact_moment_provider(ModelParams{box, 1.0}, fam.loops, true, spec);
    UrsellFactorization f = factorize_ursell(n, mom);
    double direct = ursell(n, mom);
    double err = std::abs(f.reconstruct() - direct);
    d.expect(err < 1e-12, "exact moments n=" + std::to_string(n) + " reconstruction err = " +
                              fnum(err));
  }
  // b coefficients are blind to singleton interaction weights.
  int n = 4;
  std::map<std::uint32_t, double> psi;
  std::uniform_real_distribution<double> w(0.001, 0.05);
  for (std::uint32_t inter = 1; inter < (1u << n); ++inter) psi[inter] = w(rng);
  auto provider = [](const std::map<std::uint32_t, double>& weights) {
    return MomentProvider([weights](std::uint32_t p_mask) {
      double s = 0.0;
      for (auto& [imask, wt] : weights)
        if (popcount32(imask & p_mask) & 1) s += wt;
      return std::exp(-2.0 * s);
    });
  };
  UrsellFactorization base = factorize_ursell(n, provider(psi));
  auto perturbed = psi;
  perturbed[0b0100u] += 0.6;
  UrsellFactorization pert = factorize_ursell(n, provider(perturbed));
  double drift = 0.0;
  for (std::size_t i = 0; i < base.b.size(); ++i)
    drift = std::max(drift, std::abs(base.b[i].second - pert.b[i].second));
  d.expect(std::abs(base.a_full - pert.a_full) > 1e-6, "a_[n] responds to the perturbation");
  d.expect(drift < 1e-12, "max |b_P drift| = " + fnum(drift) + " < 1e-12");
  return d.ok;
}

// ---- criterion 9: theorem-1 desk scale ------------------------------------

bool criterion9(Detail& d) {
  const double betas[] = {0.5, 1.0, 1.5, 2.0, 2.5};
  MethodSpec spec;
  {
    BoxGeometry box({0, 0, 0}, {1, 1, 2});
    StackedLoopFamily fam = build_stacked_family(box, {0, 0, 0}, 1, 1, 2);
    for (double beta : betas) {
      double u2 = ursell_wilson(ModelParams{box, beta}, fam.loops, spec);
      d.expect(u2 > 0.0, "U2 at beta=" + fnum(beta) + " is " + fnum(u2) + " > 0");
    }
  }
  {
    // Regression baseline from the enumeration oracle (first recorded run).
    // On this desk-scale box U3 stays negative: the loops sit on the box
    // walls, far from the asymptotic regime of the positivity statement.
    const double baseline[] = {-0.00094355950553229317, -0.0045400069453593872,
                               -0.0002151851116580783, -4.4262863247990225e-06,
                               -8.2263666323356688e-08};
    BoxGeometry box({0, 0, 0}, {1, 1, 3});
    StackedLoopFamily fam = build_stacked_family(box, {0, 0, 0}, 1, 1, 3);
    for (int i = 0; i < 5; ++i) {
      double u3 = ursell_wilson(ModelParams{box, betas[i]}, fam.loops, spec);
      double rel = std::abs(u3 - baseline[i]) / std::abs(baseline[i]);
      d.expect(rel < 1e-9, "U3 at beta=" + fnum(betas[i]) + " is " + fnum(u3) +
                               " (baseline match, rel=" + fnum(rel) + ")");
    }
  }
  return d.ok;
}

// ---- criterion 10: combinatorial baselines ---------------------------------

long long bitmask_graph_sum_oracle(int k, const std::vector<std::vector<char>>& adj) {
  int npairs = k * (k - 1) / 2;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  long long total = 0;
  for (std::uint32_t mask = 0; mask < (1u << npairs); ++mask) {
    bool ok = true;
    std::vector<int> comp(k);
    for (int i = 0; i < k; ++i) comp[i] = i;
    std::function<int(int)> find = [&](int x) {
      while (comp[x] != x) x = comp[x] = comp[comp[x]];
      return x;
    };
    int edges = 0;
    for (int b = 0; b < npairs && ok; ++b) {
      if (!((mask >> b) & 1)) continue;
      auto [i, j] = pairs[b];
      if (!adj[i][j]) ok = false;
      comp[find(i)] = find(j);
      ++edges;
    }
    if (!ok) continue;
    bool connected = true;
    for (int i = 1; i < k; ++i)
      if (find(i) != find(0)) connected = false;
    if (!connected) continue;
    total += (edges % 2 == 0) ? 1 : -1;
  }
  return total;
}

bool criterion10(Detail& d) {
  const std::uint64_t bell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140};
  for (int n = 1; n <= 8; ++n) {
    std::uint64_t count = 0;
    for_each_partition(n, [&](const SetPartition&) {
      ++count;
      return true;
    });
    d.expect(count == bell[n],
             "partition count n=" + std::to_string(n) + " is " + std::to_string(count));
  }
  d.expect(s_of_n(2) == 1, "S(2) = 1");
  d.expect(s_of_n(3) == 3, "S(3) = 3");

  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.5);
  bool coeffs_ok = true;
  for (int k = 1; k <= 5; ++k) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::vector<char>> adj(k, std::vector<char>(k, 0));
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) adj[i][j] = adj[j][i] = coin(rng);
      long long fast = connected_graph_sum(k, [&](int i, int j) { return adj[i][j] != 0; });
      coeffs_ok = coeffs_ok && (fast == bitmask_graph_sum_oracle(k, adj));
    }
  }
  d.expect(coeffs_ok, "connected-graph coefficients match the bitmask oracle for k <= 5");
  return d.ok;
}

struct Criterion {
  int id;
  const char* summary;
  double time_limit_s;
  std::function<bool(Detail&)> fn;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) {
    if (std::strncmp(argv[i], "--workers=", 10) == 0)
      g_workers = std::atoi(argv[i] + 10);
    else
      wanted.insert(std::atoi(argv[i]));
  }

  const Criterion criteria[] = {
      {1, "2d exactness: E[W] = tanh(beta)^area to 1e-12", 1.0, criterion1},
      {2, "Elitzur and odd-n vanishing", 120.0, criterion2},
      {3, "rectangular positivity: U4 = E[W_square] > 0", 60.0, criterion3},
      {4, "10-edge loop: 3 decompositions and U10 < -1", 600.0, criterion4},
      {5, "Appendix A: search empty through 14; 16-edge loop decompositions", 600.0, criterion5},
      {6, "vortex census: even sizes, {4,6} below 8, size-6 shapes", 120.0, criterion6},
      {7, "cluster expansion leading orders and exact agreement", 600.0, criterion7},
      {8, "factorization identity and b-coefficient invariance", 60.0, criterion8},
      {9, "theorem-1 desk scale: U2 > 0; U3 regression baseline", 300.0, criterion9},
      {10, "combinatorial baselines: Bell, S(n), graph coefficients", 60.0, criterion10},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    Detail d;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.fn(d);
    } catch (const std::exception& e) {
      d.lines.push_back(std::string("    exception: ") + e.what());
      ok = false;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.time_limit_s) {
      ok = false;
      d.lines.push_back("    FAIL runtime " + fnum(secs) + "s exceeds " + fnum(c.time_limit_s) +
                        "s");
    }
    printf("[%s] criterion %d: %s (%.2fs)\n", ok ? "PASS" : "FAIL", c.id, c.summary, secs);
    for (const std::string& line : d.lines) printf("%s\n", line.c_str());
    if (!ok) ++failures;
  }
  if (failures)
    printf("%d criterion(s) failed\n", failures);
  else
    printf("all criteria passed\n");
  return failures;
}
