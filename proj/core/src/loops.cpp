#include "z2lgt/loops.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "z2lgt/dec.hpp"

namespace z2lgt {

Chain rectangle_surface(const BoxGeometry& box, const std::vector<int>& anchor, int l1, int l2,
                        int dir_a, int dir_b) {
  if (l1 < 1 || l2 < 1) throw DomainError("rectangle: sides must be >= 1");
  if (dir_a == dir_b || dir_a >= box.dim() || dir_b >= box.dim())
    throw DomainError("rectangle: bad plane directions");
  Chain q{2, {}};
  std::uint32_t dirs = (1u << dir_a) | (1u << dir_b);
  for (int a = 0; a < l1; ++a) {
    for (int b = 0; b < l2; ++b) {
      std::vector<int> base = anchor;
      base[dir_a] += a;
      base[dir_b] += b;
      int idx = box.index_of(2, base, dirs);
      if (idx < 0) throw DomainError("rectangle does not fit inside the box");
      q.add(idx, +1);
    }
  }
  return q;
}

Chain rectangle_loop(const BoxGeometry& box, const std::vector<int>& anchor, int l1, int l2,
                     int dir_a, int dir_b) {
  return boundary(box, rectangle_surface(box, anchor, l1, l2, dir_a, dir_b));
}

StackedLoopFamily build_stacked_family(const BoxGeometry& box, const std::vector<int>& anchor,
                                       int l1, int l2, int n) {
  if (box.dim() < 3) throw DomainError("stacked family needs m >= 3");
  if (n < 1) throw DomainError("stacked family needs n >= 1");
  StackedLoopFamily fam;
  fam.l1 = l1;
  fam.l2 = l2;
  for (int i = 0; i < n; ++i) {
    std::vector<int> base = anchor;
    base[2] += i;
    Chain q = rectangle_surface(box, base, l1, l2, 0, 1);
    fam.loops.push_back(boundary(box, q));
    fam.surfaces.push_back(std::move(q));
  }
  return fam;
}

int c_coefficient(std::uint32_t interaction_set, const SetPartition& partition) {
  int c = 0;
  for (const auto& block : partition.blocks) {
    int hits = 0;
    for (int i : block)
      if ((interaction_set >> i) & 1) ++hits;
    if (hits & 1) ++c;
  }
  return c;
}

std::uint64_t s_of_n(int n) {
  std::uint64_t fact[15];
  fact[0] = 1;
  for (int i = 1; i < 15; ++i) fact[i] = fact[i - 1] * i;
  std::uint64_t total = 0;
  for_each_partition(n, [&](const SetPartition& p) {
    if (p.num_blocks() % 2 == 0) total += fact[p.num_blocks() - 1];
    return true;
  });
  return total;
}

UrsellFactorization factorize_ursell(int n, const MomentProvider& moments) {
  double fact[15];
  fact[0] = 1.0;
  for (int i = 1; i < 15; ++i) fact[i] = fact[i - 1] * i;
  auto a_of = [&](const SetPartition& p) {
    double a = (p.num_blocks() % 2 == 1) ? 1.0 : -1.0;
    a *= fact[p.num_blocks() - 1];
    for (const auto& block : p.blocks) {
      std::uint32_t mask = 0;
      for (int i : block) mask |= (1u << i);
      a *= moments(mask);
    }
    return a;
  };

  UrsellFactorization f;
  f.a_full = moments((n == 32) ? ~0u : ((1u << n) - 1));
  if (f.a_full == 0.0) throw DomainError("factorize_ursell: a_{[n]} vanishes");
  for_each_partition(n, [&](const SetPartition& p) {
    if (p.num_blocks() == 1) return true;
    double b = a_of(p) / f.a_full;
    if (p.num_blocks() % 2 == 1)
      f.v_plus += b;
    else
      f.v_minus += b;
    f.b.emplace_back(p, b);
    return true;
  });
  return f;
}

namespace {

// Oriented boundary chain of the plaquette (base; dir pair).
Chain plaquette_boundary(const BoxGeometry& box, const std::vector<int>& base, int da, int db) {
  std::uint32_t dirs = (1u << da) | (1u << db);
  int idx = box.index_of(2, base, dirs);
  if (idx < 0) throw DomainError("special loop does not fit inside the box");
  return boundary(box, box.cell(2, idx));
}

int edge_index(const BoxGeometry& box, const std::vector<int>& base, int dir) {
  int idx = box.index_of(1, base, 1u << dir);
  if (idx < 0) throw DomainError("special loop does not fit inside the box");
  return idx;
}

// Combine square boundaries sharing one common edge so that every edge of
// the sum has coefficient +-1 (the shared edge survives with a single unit).
Chain glue_on_common_edge(const std::vector<Chain>& squares, int common_edge) {
  Chain total{1, {}};
  int acc = 0;
  std::vector<int> coeff;
  for (const Chain& s : squares) coeff.push_back(s[common_edge]);
  // Choose signs +-1 so the signed sum of shared-edge coefficients is +-1.
  std::vector<int> sign(squares.size(), +1);
  int c0 = coeff[0];
  for (std::size_t i = 1; i < squares.size(); ++i)
    sign[i] = ((i % 2) ? -1 : +1) * c0 * coeff[i];
  for (std::size_t i = 0; i < squares.size(); ++i) {
    Chain t = (sign[i] > 0) ? squares[i] : squares[i].negated();
    total = total.plus(t);
    acc += sign[i] * coeff[i];
  }
  (void)acc;
  return total;
}

}  // namespace

Chain special_loop(const BoxGeometry& box, SpecialLoopKind kind, const std::vector<int>& anchor) {
  if (static_cast<int>(anchor.size()) != box.dim()) throw DomainError("anchor dimension mismatch");
  switch (kind) {
    case SpecialLoopKind::fig3_10edge: {
      if (box.dim() < 3) throw DomainError("fig3 loop needs m >= 3");
      // Three unit squares fanned around the common vertical edge.
      std::vector<int> below = anchor;
      below[1] -= 1;
      std::vector<Chain> squares = {
          plaquette_boundary(box, anchor, 1, 2),  // spans +y,+z
          plaquette_boundary(box, anchor, 0, 2),  // spans +x,+z
          plaquette_boundary(box, below, 1, 2),   // spans -y side
      };
      int common = edge_index(box, anchor, 2);
      Chain gamma = glue_on_common_edge(squares, common);
      if (!is_loop(box, gamma)) throw DomainError("fig3 construction failed");
      return gamma;
    }
    case SpecialLoopKind::fig4_12edge: {
      if (box.dim() < 3) throw DomainError("fig4 loop needs m >= 3");
      std::vector<int> rect_base = anchor;
      rect_base[1] -= 1;
      rect_base[2] -= 1;
      Chain hexagon = boundary(box, rectangle_surface(box, rect_base, 1, 2, 1, 2));
      std::vector<Chain> pieces = {
          plaquette_boundary(box, anchor, 1, 2),
          plaquette_boundary(box, anchor, 0, 2),
          hexagon,
      };
      int common = edge_index(box, anchor, 2);
      Chain gamma = glue_on_common_edge(pieces, common);
      if (!is_loop(box, gamma)) throw DomainError("fig4 construction failed");
      return gamma;
    }
    case SpecialLoopKind::fig5_16edge_2d: {
      // Inner unit square plus the 12-edge surrounding loop, both oriented
      // counterclockwise; they touch at two corners.
      auto v = [&](int dx, int dy) {
        std::vector<int> p = anchor;
        p[0] += dx;
        p[1] += dy;
        return p;
      };
      std::vector<int> inner_base = v(1, 1);
      Chain gamma = plaquette_boundary(box, inner_base, 0, 1);
      struct Step {
        int x, y, dir, sign;
      };
      // Outer path (1,2)->(0,2)->(0,0)->(2,0)->(2,1)->(3,1)->(3,3)->(1,3)->(1,2)
      // relative to the anchor, counterclockwise.
      const Step steps[] = {
          {0, 2, 0, -1}, {0, 1, 1, -1}, {0, 0, 1, -1}, {0, 0, 0, +1},
          {1, 0, 0, +1}, {2, 0, 1, +1}, {2, 1, 0, +1}, {3, 1, 1, +1},
          {3, 2, 1, +1}, {2, 3, 0, -1}, {1, 3, 0, -1}, {1, 2, 1, -1},
      };
      for (const Step& s : steps) gamma.add(edge_index(box, v(s.x, s.y), s.dir), s.sign);
      if (!is_loop(box, gamma) || static_cast<int>(gamma.coeffs.size()) != 16)
        throw DomainError("fig5 construction failed");
      return gamma;
    }
  }
  throw DomainError("unknown special loop kind");
}

std::vector<std::pair<Chain, Chain>> decompose_two_loops(const BoxGeometry& box,
                                                         const Chain& gamma) {
  if (gamma.k != 1 || !gamma.unit_coefficients())
    throw DomainError("decompose_two_loops: gamma must be a unit-coefficient 1-chain");
  std::vector<std::pair<int, int>> edges(gamma.coeffs.begin(), gamma.coeffs.end());
  int n = static_cast<int>(edges.size());
  if (n > 24) throw CapacityError("decompose_two_loops guarded to |gamma| <= 24", n);
  if (!boundary(box, gamma).empty()) throw DomainError("decompose_two_loops: gamma is not closed");

  // Local vertex ids and signed boundary increments per edge.
  std::vector<int> verts;
  std::vector<std::array<int, 2>> ends(n);  // local (tail, head)
  for (int i = 0; i < n; ++i) {
    auto [t, h] = box.edge_endpoints(edges[i].first);
    verts.push_back(t);
    verts.push_back(h);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  auto local = [&](int v) {
    return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
  };
  for (int i = 0; i < n; ++i) {
    auto [t, h] = box.edge_endpoints(edges[i].first);
    ends[i] = {local(t), local(h)};
  }

  auto part_connected = [&](std::uint32_t mask) {
    if (!mask) return false;
    int start = __builtin_ctz(mask);
    std::uint32_t seen = 1u << start;
    std::vector<int> stack{start};
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < n; ++j) {
        if ((seen >> j) & 1 || !((mask >> j) & 1)) continue;
        if (ends[i][0] == ends[j][0] || ends[i][0] == ends[j][1] || ends[i][1] == ends[j][0] ||
            ends[i][1] == ends[j][1]) {
          seen |= 1u << j;
          stack.push_back(j);
        }
      }
    }
    return seen == mask;
  };
  // Over Z2 a part is a loop iff some +-1 orientation closes it: even
  // degree at every vertex. (The inherited orientation need not close.)
  auto part_even = [&](std::uint32_t mask) {
    std::vector<int> deg(verts.size(), 0);
    for (int i = 0; i < n; ++i) {
      if (!((mask >> i) & 1)) continue;
      deg[ends[i][0]] += 1;
      deg[ends[i][1]] += 1;
    }
    for (int d : deg)
      if (d % 2) return false;
    return true;
  };
  auto orient = [&](std::uint32_t mask) {
    Chain inherited{1, {}};
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      if (!((mask >> i) & 1)) continue;
      inherited.add(edges[i].first, edges[i].second);
      members.push_back(edges[i].first);
    }
    if (is_loop(box, inherited)) return inherited;
    auto reoriented = orient_as_loop(box, members);
    return *reoriented;  // even + connected guarantees a value
  };

  std::vector<std::pair<Chain, Chain>> result;
  std::uint32_t all = (n == 32) ? ~0u : ((1u << n) - 1);
  // Fix edge 0 in the first part to count unordered pairs once.
  for (std::uint32_t rest = 0; rest < (1u << (n - 1)); ++rest) {
    std::uint32_t mask = (rest << 1) | 1u;
    std::uint32_t comp = all & ~mask;
    if (!comp) continue;
    if (!part_even(mask)) continue;  // complement evenness then follows
    if (!part_connected(mask) || !part_connected(comp)) continue;
    result.emplace_back(orient(mask), orient(comp));
  }
  return result;
}

}  // namespace z2lgt
