#include "z2lgt/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

#include "z2lgt/dec.hpp"

namespace z2lgt {

PlaquetteGraph build_plaquette_graph(const BoxGeometry& box) {
  PlaquetteGraph g;
  int np = box.num_cells(2);
  g.adj.resize(np);
  if (box.dim() < 3) return g;  // no 3-cells: edgeless graph
  int nc = box.num_cells(3);
  for (int c = 0; c < nc; ++c) {
    std::vector<int> faces;
    for (auto& [p, s] : box.faces_of(3, c)) faces.push_back(p);
    for (int a : faces)
      for (int b : faces)
        if (a != b) g.adj[a].push_back(b);
  }
  for (auto& v : g.adj) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return g;
}

std::vector<int> interior_region(const BoxGeometry& box) {
  std::vector<int> r;
  for (int p = 0; p < box.num_cells(2); ++p)
    if (!box.is_boundary_cell(2, p)) r.push_back(p);
  return r;
}

std::vector<int> full_region(const BoxGeometry& box) {
  std::vector<int> r(box.num_cells(2));
  for (int p = 0; p < box.num_cells(2); ++p) r[p] = p;
  return r;
}

std::vector<int> slab_region(const BoxGeometry& box, const std::vector<Chain>& surfaces, int pad,
                             bool include_boundary) {
  int m = box.dim();
  std::vector<int> lo(m, 1 << 20), hi(m, -(1 << 20));
  for (const Chain& q : surfaces) {
    for (auto& [idx, c] : q.coeffs) {
      const KCell& cell = box.cell(q.k, idx);
      for (int a = 0; a < m; ++a) {
        int top = cell.base[a] + (((cell.dirs >> a) & 1) ? 1 : 0);
        lo[a] = std::min(lo[a], cell.base[a]);
        hi[a] = std::max(hi[a], top);
      }
    }
  }
  std::vector<int> r;
  for (int p = 0; p < box.num_cells(2); ++p) {
    if (!include_boundary && box.is_boundary_cell(2, p)) continue;
    const KCell& cell = box.cell(2, p);
    bool inside = true;
    for (int a = 0; a < m && inside; ++a) {
      int top = cell.base[a] + (((cell.dirs >> a) & 1) ? 1 : 0);
      inside = cell.base[a] >= lo[a] - pad && top <= hi[a] + pad;
    }
    if (inside) r.push_back(p);
  }
  return r;
}

namespace {

struct Bitset {
  std::vector<std::uint64_t> w;
  explicit Bitset(int n) : w((n + 63) / 64, 0) {}
  bool get(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
  void set(int i) { w[i >> 6] |= std::uint64_t(1) << (i & 63); }
  void clear(int i) { w[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
};

// Connected closed-subset growth with parity pruning. Uniqueness comes from
// the usual ban discipline: after a candidate's branch is explored it is
// banned for the rest of the call.
struct VortexEnum {
  const BoxGeometry& box;
  const PlaquetteGraph& graph;
  int cap;
  std::uint64_t max_nodes;
  Bitset allowed;
  Bitset in_set;
  Bitset banned;
  std::vector<int> current;
  std::vector<std::uint8_t> cube_parity;
  std::vector<int> touched_cubes;
  int odd_cubes = 0;
  std::uint64_t nodes = 0;
  std::vector<Vortex>* out;

  VortexEnum(const BoxGeometry& b, const PlaquetteGraph& g, int cap_, std::uint64_t max_nodes_,
             const std::vector<int>& region, std::vector<Vortex>* o)
      : box(b), graph(g), cap(cap_), max_nodes(max_nodes_), allowed(b.num_cells(2)),
        in_set(b.num_cells(2)), banned(b.num_cells(2)),
        cube_parity(b.dim() >= 3 ? b.num_cells(3) : 0, 0), out(o) {
    for (int p : region) allowed.set(p);
  }

  void add(int p) {
    in_set.set(p);
    current.push_back(p);
    for (auto& [c, s] : box.cofaces_of(2, p)) {
      touched_cubes.push_back(c);
      if (cube_parity[c] ^= 1)
        ++odd_cubes;
      else
        --odd_cubes;
    }
  }
  void remove(int p) {
    in_set.clear(p);
    current.pop_back();
    for (auto& [c, s] : box.cofaces_of(2, p)) {
      touched_cubes.pop_back();
      if (cube_parity[c] ^= 1)
        ++odd_cubes;
      else
        --odd_cubes;
    }
  }

  bool dead_cube() const {
    for (int c : touched_cubes) {
      if (!cube_parity[c]) continue;
      bool fixable = false;
      for (auto& [p, s] : box.faces_of(3, c)) {
        if (!in_set.get(p) && allowed.get(p) && !banned.get(p)) {
          fixable = true;
          break;
        }
      }
      if (!fixable) return true;
    }
    return false;
  }

  void grow(std::vector<int> cand) {
    if (++nodes > max_nodes)
      throw CapacityError("vortex enumeration exceeded the node budget",
                          static_cast<long long>(nodes));
    if (odd_cubes == 0 && !current.empty()) {
      Vortex v{current};
      std::sort(v.support.begin(), v.support.end());
      out->push_back(std::move(v));
    }
    int size = static_cast<int>(current.size());
    if (size >= cap) return;
    if (size + (odd_cubes + 1) / 2 > cap) return;  // each plaquette fixes <= 2 cubes
    if (dead_cube()) return;

    std::vector<int> my_bans;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      int v = cand[i];
      if (banned.get(v)) continue;
      std::vector<int> next(cand.begin() + i + 1, cand.end());
      for (int u : graph.adj[v]) {
        if (!allowed.get(u) || in_set.get(u) || banned.get(u)) continue;
        bool fresh = std::find(cand.begin(), cand.end(), u) == cand.end();
        if (fresh) next.push_back(u);
      }
      add(v);
      grow(std::move(next));
      remove(v);
      banned.set(v);
      my_bans.push_back(v);
    }
    for (int v : my_bans) banned.clear(v);
  }
};

}  // namespace

std::vector<Vortex> enumerate_vortices(const BoxGeometry& box, const PlaquetteGraph& graph,
                                       const TruncationPolicy& policy,
                                       const std::vector<int>& anchors) {
  if (box.dim() < 3) throw DomainError("vortex enumeration requires m >= 3");
  if (policy.max_total_support < 2) throw DomainError("support cap below the smallest vortex");
  std::vector<Vortex> out;
  VortexEnum en(box, graph, policy.max_total_support, policy.max_nodes, policy.region, &out);

  std::vector<int> roots = anchors.empty() ? policy.region : anchors;
  std::vector<int> sorted_roots = roots;
  std::sort(sorted_roots.begin(), sorted_roots.end());
  sorted_roots.erase(std::unique(sorted_roots.begin(), sorted_roots.end()), sorted_roots.end());
  for (std::size_t ri = 0; ri < sorted_roots.size(); ++ri) {
    int r = sorted_roots[ri];
    if (!en.allowed.get(r)) continue;
    // Exclude earlier roots so each vortex is generated from its least root.
    for (std::size_t j = 0; j < ri; ++j) en.banned.set(sorted_roots[j]);
    en.add(r);
    std::vector<int> cand;
    for (int u : graph.adj[r])
      if (en.allowed.get(u) && !en.banned.get(u)) cand.push_back(u);
    en.grow(std::move(cand));
    en.remove(r);
    for (std::size_t j = 0; j < ri; ++j) en.banned.clear(sorted_roots[j]);
  }
  std::sort(out.begin(), out.end(),
            [](const Vortex& a, const Vortex& b) { return a.support < b.support; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Vortex& a, const Vortex& b) { return a.support == b.support; }),
            out.end());
  return out;
}

VortexShape classify_vortex_shape(const BoxGeometry& box, const Vortex& v) {
  int ne = box.num_cells(1);
  auto matches = [&](const std::vector<int>& edges) {
    Z2Form sigma = Z2Form::zero(box, 1);
    for (int e : edges) sigma.set(e, true);
    return exterior_derivative(box, sigma).support() == v.support;
  };
  if (v.support_size() == 2 * (box.dim() - 1)) {
    for (int e = 0; e < ne; ++e)
      if (matches({e})) return VortexShape::edge_butterfly;
  }
  for (int e1 = 0; e1 < ne; ++e1) {
    for (int e2 = e1 + 1; e2 < ne; ++e2) {
      if (!matches({e1, e2})) continue;
      const KCell& a = box.cell(1, e1);
      const KCell& b = box.cell(1, e2);
      if (a.dirs != b.dirs) return VortexShape::bent_pair;
      int diff = 0;
      for (int ax = 0; ax < box.dim(); ++ax) diff += std::abs(a.base[ax] - b.base[ax]);
      if (diff == 1) return VortexShape::parallel_pair;
      return VortexShape::other;
    }
  }
  for (int vx = 0; vx < box.num_cells(0); ++vx) {
    const auto& star = box.vertex_edges(vx);
    int k = static_cast<int>(star.size());
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        for (int l = j + 1; l < k; ++l) {
          const KCell &a = box.cell(1, star[i]), &b = box.cell(1, star[j]),
                      &c = box.cell(1, star[l]);
          if ((a.dirs | b.dirs | c.dirs) != (a.dirs ^ b.dirs ^ c.dirs)) continue;
          if (matches({star[i], star[j], star[l]})) return VortexShape::vertex_tripod;
        }
  }
  return VortexShape::other;
}

const char* vortex_shape_name(VortexShape s) {
  switch (s) {
    case VortexShape::edge_butterfly: return "edge_butterfly";
    case VortexShape::bent_pair: return "bent_pair";
    case VortexShape::parallel_pair: return "parallel_pair";
    case VortexShape::vertex_tripod: return "vertex_tripod";
    default: return "other";
  }
}

long long connected_graph_sum(int k, const std::function<bool(int, int)>& adjacent) {
  if (k < 1) throw DomainError("connected_graph_sum: k >= 1");
  if (k > 8) throw CapacityError("connected_graph_sum guarded to k <= 8", k);
  // f(S) = 1 iff S is independent; peel the component of min(S):
  // f(S) = sum_{T: min(S) in T subseteq S} c(T) f(S \ T).
  int n = 1 << k;
  std::vector<long long> f(n), c(n);
  f[0] = 1;
  for (int s = 1; s < n; ++s) {
    bool indep = true;
    for (int i = 0; i < k && indep; ++i) {
      if (!((s >> i) & 1)) continue;
      for (int j = i + 1; j < k && indep; ++j)
        if (((s >> j) & 1) && adjacent(i, j)) indep = false;
    }
    f[s] = indep ? 1 : 0;
  }
  for (int s = 1; s < n; ++s) {
    int low = s & (-s);
    long long acc = f[s];
    int rest = s ^ low;
    for (int t = rest;; t = (t - 1) & rest) {
      int tt = t | low;
      if (tt != s) acc -= c[tt] * f[s ^ tt];
      if (t == 0) break;
    }
    c[s] = acc;
  }
  return c[n - 1];
}

double ursell_graph_coefficient(int k, const std::function<bool(int, int)>& adjacent) {
  long long sum = connected_graph_sum(k, adjacent);
  double kfact = 1.0;
  for (int i = 2; i <= k; ++i) kfact *= i;
  return double(sum) / kfact;
}

double activity(const Vortex& nu, double beta) {
  return std::exp(-4.0 * beta * nu.support_size());
}

namespace {

bool intersects(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    if (a[i] < b[j])
      ++i;
    else
      ++j;
  }
  return false;
}

std::vector<int> neighbor_closure(const Vortex& v, const PlaquetteGraph& graph) {
  std::vector<int> n = v.support;
  for (int p : v.support)
    for (int u : graph.adj[p]) n.push_back(u);
  std::sort(n.begin(), n.end());
  n.erase(std::unique(n.begin(), n.end()), n.end());
  return n;
}

bool vortices_adjacent(const Vortex& a, const Vortex& b, const PlaquetteGraph& graph) {
  return intersects(neighbor_closure(a, graph), b.support);
}

long long cluster_graph_sum(const VortexCluster& cluster, const std::vector<Vortex>& registry,
                            const PlaquetteGraph& graph) {
  std::vector<int> ids;
  for (auto& [id, mult] : cluster.parts)
    for (int t = 0; t < mult; ++t) ids.push_back(id);
  int k = static_cast<int>(ids.size());
  std::vector<std::vector<char>> adj(k, std::vector<char>(k, 0));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      adj[i][j] = adj[j][i] =
          (ids[i] == ids[j]) ? 1 : vortices_adjacent(registry[ids[i]], registry[ids[j]], graph);
  return connected_graph_sum(k, [&](int i, int j) { return adj[i][j] != 0; });
}

}  // namespace

double correlated_activity(const VortexCluster& cluster, const std::vector<Vortex>& registry,
                           const PlaquetteGraph& graph, double beta) {
  long long sum = cluster_graph_sum(cluster, registry, graph);
  double norm = 1.0;
  for (auto& [id, mult] : cluster.parts)
    for (int t = 2; t <= mult; ++t) norm *= t;
  return (double(sum) / norm) * std::exp(-4.0 * beta * cluster.total_support);
}

std::uint32_t classify_interaction(const VortexCluster& cluster,
                                   const std::vector<Vortex>& registry,
                                   const std::vector<Chain>& surfaces) {
  std::uint32_t result = 0;
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    int parity = 0;
    for (auto& [id, mult] : cluster.parts) {
      if (!(mult & 1)) continue;
      const Vortex& v = registry[id];
      for (int p : v.support)
        if (surfaces[i][p] & 1) parity ^= 1;
    }
    if (parity) result |= (1u << i);
  }
  return result;
}

namespace {

struct ClusterContext {
  const std::vector<Vortex>& registry;
  const PlaquetteGraph& graph;
  std::unordered_map<std::uint64_t, char> adj_memo;

  bool adjacent(int a, int b) {
    if (a == b) return true;
    std::uint64_t key = (std::uint64_t(std::min(a, b)) << 32) | std::uint64_t(std::max(a, b));
    auto it = adj_memo.find(key);
    if (it != adj_memo.end()) return it->second != 0;
    bool v = vortices_adjacent(registry[a], registry[b], graph);
    adj_memo.emplace(key, v ? 1 : 0);
    return v;
  }

  bool connected(const VortexCluster& cluster) {
    int np = static_cast<int>(cluster.parts.size());
    if (np <= 1) return true;
    std::vector<int> comp(np);
    for (int i = 0; i < np; ++i) comp[i] = i;
    std::function<int(int)> find = [&](int x) {
      while (comp[x] != x) x = comp[x] = comp[comp[x]];
      return x;
    };
    for (int i = 0; i < np; ++i)
      for (int j = i + 1; j < np; ++j)
        if (adjacent(cluster.parts[i].first, cluster.parts[j].first)) comp[find(i)] = find(j);
    for (int i = 1; i < np; ++i)
      if (find(i) != find(0)) return false;
    return true;
  }
};

}  // namespace

void for_each_cluster(const std::vector<Vortex>& registry, const std::vector<char>& anchored,
                      const PlaquetteGraph& graph, const BoxGeometry& box,
                      const TruncationPolicy& policy, bool require_anchor,
                      const std::function<void(const VortexCluster&)>& visit) {
  (void)box;
  int nv = static_cast<int>(registry.size());
  ClusterContext ctx{registry, graph, {}};
  VortexCluster cluster;
  int n_anchored = 0;

  std::function<void(int)> rec = [&](int min_id) {
    if (!cluster.parts.empty() && (!require_anchor || n_anchored > 0) && ctx.connected(cluster))
      visit(cluster);
    if (cluster.n_total >= policy.max_multiplicity) return;
    for (int id = min_id; id < nv; ++id) {
      int sz = registry[id].support_size();
      if (cluster.total_support + sz > policy.max_total_support) continue;
      bool same_as_last = !cluster.parts.empty() && cluster.parts.back().first == id;
      if (same_as_last)
        cluster.parts.back().second += 1;
      else
        cluster.parts.emplace_back(id, 1);
      cluster.total_support += sz;
      cluster.n_total += 1;
      if (anchored[id]) ++n_anchored;
      rec(id);
      if (anchored[id]) --n_anchored;
      cluster.n_total -= 1;
      cluster.total_support -= sz;
      if (same_as_last)
        cluster.parts.back().second -= 1;
      else
        cluster.parts.pop_back();
    }
  };
  rec(0);
}

namespace {

struct ClusterAccumulator {
  double value = 0.0;
  int top_order = 0;
  long top_count = 0;
  long used = 0;

  void add(double signed_psi, int order) {
    value += signed_psi;
    ++used;
    if (order > top_order) {
      top_order = order;
      top_count = 1;
    } else if (order == top_order) {
      ++top_count;
    }
  }
  TruncatedSum finish(double beta) const {
    TruncatedSum t;
    t.value = value;
    t.clusters_used = used;
    if (top_order > 0)
      t.remainder_indicator = double(top_count) * std::exp(-4.0 * beta * (top_order + 2));
    return t;
  }
};

// Clusters that interact with at least one surface all contain a vortex
// whose support meets an odd-coefficient surface cell. Enumerate them
// rooted at their minimal anchored vortex; remaining parts are drawn from
// vortices near the current union (a part at G2 distance d needs at least
// d-1 further support units to be reachable, so far candidates are pruned).
struct InteractingClusters {
  const BoxGeometry& box;
  const PlaquetteGraph& graph;
  const TruncationPolicy& policy;
  std::vector<Vortex> registry;
  std::vector<char> anchored;
  std::vector<std::vector<int>> by_plaquette;  // plaquette -> vortex ids

  ClusterContext ctx;

  InteractingClusters(const BoxGeometry& b, const PlaquetteGraph& g, const TruncationPolicy& pol,
                      const std::vector<int>& anchor_cells)
      : box(b), graph(g), policy(pol), ctx{registry, graph, {}} {
    std::vector<Vortex> anchored_vs = enumerate_vortices(box, graph, policy, anchor_cells);
    int min_anchored = policy.max_total_support;
    for (const Vortex& v : anchored_vs) min_anchored = std::min(min_anchored, v.support_size());

    std::vector<Vortex> companions;
    int companion_cap = policy.max_total_support - (anchored_vs.empty() ? 0 : min_anchored);
    if (!anchored_vs.empty() && companion_cap >= 2) {
      TruncationPolicy cpol = policy;
      cpol.max_total_support = companion_cap;
      companions = enumerate_vortices(box, graph, cpol);
    }
    std::vector<std::pair<std::vector<int>, char>> keyed;
    for (Vortex& v : anchored_vs) keyed.emplace_back(std::move(v.support), 1);
    for (Vortex& v : companions) keyed.emplace_back(std::move(v.support), 0);
    std::sort(keyed.begin(), keyed.end());
    for (auto& [supp, anch] : keyed) {
      if (!registry.empty() && registry.back().support == supp) {
        anchored.back() = anchored.back() | anch;
        continue;
      }
      registry.push_back(Vortex{supp});
      anchored.push_back(anch);
    }
    by_plaquette.resize(box.num_cells(2));
    for (std::size_t i = 0; i < registry.size(); ++i)
      for (int p : registry[i].support) by_plaquette[p].push_back(static_cast<int>(i));
  }

  // G2 distances from the union support, capped at `depth`.
  std::vector<int> ball_distances(const std::vector<int>& seed, int depth) const {
    std::vector<int> dist(box.num_cells(2), -1);
    std::queue<int> q;
    for (int p : seed) {
      dist[p] = 0;
      q.push(p);
    }
    while (!q.empty()) {
      int p = q.front();
      q.pop();
      if (dist[p] >= depth) continue;
      for (int u : graph.adj[p]) {
        if (dist[u] < 0) {
          dist[u] = dist[p] + 1;
          q.push(u);
        }
      }
    }
    return dist;
  }

  void run(const std::function<void(const VortexCluster&, const std::vector<Vortex>&)>& visit) {
    int nv = static_cast<int>(registry.size());
    VortexCluster cluster;
    std::vector<int> union_support;

    std::function<void(int, int)> extend = [&](int root, int last_rest_id) {
      if (ctx.connected(cluster)) visit(cluster, registry);
      int remaining = policy.max_total_support - cluster.total_support;
      if (remaining < 2 || cluster.n_total >= policy.max_multiplicity) return;

      std::vector<int> dist = ball_distances(union_support, 1 + 2 * (remaining - 2) + 1);
      std::vector<int> cands;
      for (int p = 0; p < box.num_cells(2); ++p) {
        if (dist[p] < 0) continue;
        for (int id : by_plaquette[p]) cands.push_back(id);
      }
      std::sort(cands.begin(), cands.end());
      cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

      for (int id : cands) {
        if (id < last_rest_id) continue;
        if (anchored[id] && id < root) continue;  // root is the least anchored id
        if (id == root) continue;                 // root multiplicity fixed upfront
        int sz = registry[id].support_size();
        if (cluster.total_support + sz > policy.max_total_support) continue;
        // Reachability: a candidate at distance d needs d-1 bridging units.
        int d = box.num_cells(2);
        for (int p : registry[id].support)
          if (dist[p] >= 0) d = std::min(d, dist[p]);
        if (d > 1 + std::max(0, 2 * (remaining - sz))) continue;

        bool same_as_last = !cluster.parts.empty() && cluster.parts.back().first == id;
        if (same_as_last)
          cluster.parts.back().second += 1;
        else
          cluster.parts.emplace_back(id, 1);
        cluster.total_support += sz;
        cluster.n_total += 1;
        std::size_t added = 0;
        for (int p : registry[id].support) {
          union_support.push_back(p);
          ++added;
        }
        extend(root, id);
        while (added--) union_support.pop_back();
        cluster.n_total -= 1;
        cluster.total_support -= sz;
        if (same_as_last)
          cluster.parts.back().second -= 1;
        else
          cluster.parts.pop_back();
      }
    };

    for (int root = 0; root < nv; ++root) {
      if (!anchored[root]) continue;
      int sz = registry[root].support_size();
      for (int mult = 1; mult * sz <= policy.max_total_support &&
                         mult <= policy.max_multiplicity; ++mult) {
        cluster.parts.assign(1, {root, mult});
        cluster.total_support = mult * sz;
        cluster.n_total = mult;
        union_support = registry[root].support;
        extend(root, 0);
      }
    }
    cluster.parts.clear();
  }
};

TruncatedSum interacting_sum(const BoxGeometry& box, const PlaquetteGraph& graph,
                             const std::vector<Chain>& surfaces, double beta,
                             const TruncationPolicy& policy,
                             const std::function<double(std::uint32_t)>& weight) {
  std::vector<int> anchors;
  for (const Chain& q : surfaces)
    for (auto& [p, c] : q.coeffs)
      if (c & 1) anchors.push_back(p);
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());

  InteractingClusters enumerator(box, graph, policy, anchors);
  ClusterAccumulator acc;
  enumerator.run([&](const VortexCluster& cluster, const std::vector<Vortex>& registry) {
    std::uint32_t mask = classify_interaction(cluster, registry, surfaces);
    double w = weight(mask);
    if (w == 0.0) return;
    acc.add(w * correlated_activity(cluster, registry, graph, beta), cluster.total_support);
  });
  return acc.finish(beta);
}

}  // namespace

TruncatedSum psi_beta_I(const BoxGeometry& box, const PlaquetteGraph& graph,
                        const std::vector<Chain>& surfaces, std::uint32_t interaction_set,
                        double beta, const TruncationPolicy& policy) {
  if (interaction_set == 0) {
    // Xi[emptyset] has no anchor: enumerate the whole region.
    std::vector<Vortex> registry = enumerate_vortices(box, graph, policy);
    std::vector<char> anchored(registry.size(), 1);
    ClusterAccumulator acc;
    for_each_cluster(registry, anchored, graph, box, policy, /*require_anchor=*/false,
                     [&](const VortexCluster& cluster) {
                       if (classify_interaction(cluster, registry, surfaces) != 0) return;
                       acc.add(correlated_activity(cluster, registry, graph, beta),
                               cluster.total_support);
                     });
    return acc.finish(beta);
  }
  return interacting_sum(box, graph, surfaces, beta, policy,
                         [interaction_set](std::uint32_t mask) {
                           return mask == interaction_set ? 1.0 : 0.0;
                         });
}

TruncatedSum truncated_log_wilson(const BoxGeometry& box, const PlaquetteGraph& graph,
                                  const Chain& gamma, const Chain& surface, double beta,
                                  const TruncationPolicy& policy) {
  if (!is_surface_with_boundary(box, surface, gamma))
    throw DomainError("truncated_log_wilson: surface boundary must equal gamma");
  return interacting_sum(box, graph, {surface}, beta, policy,
                         [](std::uint32_t mask) { return (mask & 1u) ? 2.0 : 0.0; });
}

}  // namespace z2lgt
