#include "z2lgt/search2d.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "z2lgt/errors.hpp"

namespace z2lgt {

EdgeSet2 canonical_translate(EdgeSet2 edges) {
  if (edges.empty()) return edges;
  int mx = edges[0].x, my = edges[0].y;
  for (const Edge2& e : edges) {
    mx = std::min(mx, e.x);
    my = std::min(my, e.y);
  }
  for (Edge2& e : edges) {
    e.x -= mx;
    e.y -= my;
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

namespace {

// The 8 symmetries of the square lattice acting on a point.
std::pair<int, int> transform_point(int x, int y, int t) {
  switch (t) {
    case 0: return {x, y};
    case 1: return {-y, x};
    case 2: return {-x, -y};
    case 3: return {y, -x};
    case 4: return {-x, y};
    case 5: return {x, -y};
    case 6: return {y, x};
    default: return {-y, -x};
  }
}

EdgeSet2 transform_edges(const EdgeSet2& edges, int t) {
  EdgeSet2 out;
  out.reserve(edges.size());
  for (const Edge2& e : edges) {
    auto [ax, ay] = transform_point(e.x, e.y, t);
    int bx = e.x + (e.axis == 0 ? 1 : 0), by = e.y + (e.axis == 1 ? 1 : 0);
    auto [cx, cy] = transform_point(bx, by, t);
    Edge2 ne;
    ne.x = std::min(ax, cx);
    ne.y = std::min(ay, cy);
    ne.axis = (ax == cx) ? 1 : 0;
    out.push_back(ne);
  }
  return canonical_translate(std::move(out));
}

}  // namespace

EdgeSet2 canonical_symmetry(const EdgeSet2& edges) {
  EdgeSet2 best = transform_edges(edges, 0);
  for (int t = 1; t < 8; ++t) best = std::min(best, transform_edges(edges, t));
  return best;
}

EdgeSet2 edge_set_from_chain(const BoxGeometry& box, const Chain& gamma) {
  if (gamma.k != 1) throw DomainError("edge_set_from_chain: expected a 1-chain");
  EdgeSet2 out;
  for (auto& [idx, c] : gamma.coeffs) {
    const KCell& cell = box.cell(1, idx);
    Edge2 e;
    e.x = cell.base[0];
    e.y = cell.base[1];
    e.axis = cell.dir_list()[0];
    if (e.axis > 1) throw DomainError("edge_set_from_chain: chain leaves the (e1,e2) plane");
    out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EdgeSet2> self_avoiding_polygons(int perimeter) {
  // Self-avoiding walks from the origin that close; dedup up to translation.
  std::set<EdgeSet2> shapes;
  std::vector<std::pair<int, int>> path{{0, 0}};
  EdgeSet2 edges;
  const int dx[4] = {1, -1, 0, 0};
  const int dy[4] = {0, 0, 1, -1};

  std::function<void(int, int)> walk = [&](int x, int y) {
    int len = static_cast<int>(edges.size());
    if (len > 0 && x == 0 && y == 0) {
      if (len == perimeter) shapes.insert(canonical_translate(edges));
      return;
    }
    if (len >= perimeter) return;
    for (int d = 0; d < 4; ++d) {
      int nx = x + dx[d], ny = y + dy[d];
      bool revisit = false;
      for (std::size_t i = 0; i < path.size(); ++i) {
        if (path[i].first == nx && path[i].second == ny) {
          revisit = (i != 0);
          if (i == 0 && len + 1 != perimeter) revisit = true;  // close only at full length
          break;
        }
      }
      if (revisit) continue;
      Edge2 e;
      e.x = std::min(x, nx);
      e.y = std::min(y, ny);
      e.axis = (nx == x) ? 1 : 0;
      edges.push_back(e);
      path.emplace_back(nx, ny);
      walk(nx, ny);
      path.pop_back();
      edges.pop_back();
    }
  };
  // First step +x: fixes one of the 2 x perimeter walk representatives.
  if (perimeter >= 4 && perimeter % 2 == 0) {
    edges.push_back(Edge2{0, 0, 0});
    path.emplace_back(1, 0);
    walk(1, 0);
  }
  return {shapes.begin(), shapes.end()};
}

namespace {

struct VertexKey {
  int x, y;
  auto operator<=>(const VertexKey&) const = default;
};

}  // namespace

int count_sap_partitions(const EdgeSet2& edges) {
  // Vertex degrees; only degrees 2 and 4 occur in an even edge set.
  std::map<VertexKey, std::vector<int>> incident;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge2& e = edges[i];
    incident[{e.x, e.y}].push_back(static_cast<int>(i));
    incident[{e.x + (e.axis == 0 ? 1 : 0), e.y + (e.axis == 1 ? 1 : 0)}].push_back(
        static_cast<int>(i));
  }
  // Segments: maximal runs through degree-2 vertices get one color.
  int n = static_cast<int>(edges.size());
  std::vector<int> seg(n, -1);
  int nseg = 0;
  for (int i = 0; i < n; ++i) {
    if (seg[i] >= 0) continue;
    // flood along degree-2 vertices
    std::vector<int> stack{i};
    seg[i] = nseg;
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      const Edge2& e = edges[cur];
      VertexKey ends[2] = {{e.x, e.y},
                           {e.x + (e.axis == 0 ? 1 : 0), e.y + (e.axis == 1 ? 1 : 0)}};
      for (const VertexKey& v : ends) {
        const auto& inc = incident[v];
        if (inc.size() != 2) continue;
        for (int j : inc) {
          if (seg[j] < 0) {
            seg[j] = nseg;
            stack.push_back(j);
          }
        }
      }
    }
    ++nseg;
  }
  if (nseg > 20) throw CapacityError("too many segments in sap partition count", nseg);

  int count = 0;
  for (std::uint32_t coloring = 0; coloring < (1u << (nseg - 1)); ++coloring) {
    // segment 0 fixed to color 0; color(s) = bit s-1 for s >= 1
    auto color = [&](int s) { return s == 0 ? 0 : int((coloring >> (s - 1)) & 1); };
    bool ok = true;
    bool has1 = false;
    for (int s = 1; s < nseg && !has1; ++s) has1 = color(s) == 1;
    if (!has1) continue;
    // Every vertex must have degree 2 within each used color class.
    for (auto& [v, inc] : incident) {
      int c0 = 0, c1 = 0;
      for (int j : inc) (color(seg[j]) ? c1 : c0)++;
      if ((c0 != 0 && c0 != 2) || (c1 != 0 && c1 != 2)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    // Each class must be a single (connected) cycle.
    for (int cls = 0; cls < 2 && ok; ++cls) {
      std::vector<int> members;
      for (int j = 0; j < n; ++j)
        if (color(seg[j]) == cls) members.push_back(j);
      if (members.empty()) {
        ok = false;
        break;
      }
      std::map<VertexKey, std::vector<int>> local;
      for (int j : members) {
        const Edge2& e = edges[j];
        local[{e.x, e.y}].push_back(j);
        local[{e.x + (e.axis == 0 ? 1 : 0), e.y + (e.axis == 1 ? 1 : 0)}].push_back(j);
      }
      std::set<int> seen{members[0]};
      std::vector<int> stack{members[0]};
      while (!stack.empty()) {
        int cur = stack.back();
        stack.pop_back();
        const Edge2& e = edges[cur];
        VertexKey ends[2] = {{e.x, e.y},
                             {e.x + (e.axis == 0 ? 1 : 0), e.y + (e.axis == 1 ? 1 : 0)}};
        for (const VertexKey& v : ends)
          for (int j : local[v])
            if (!seen.count(j)) {
              seen.insert(j);
              stack.push_back(j);
            }
      }
      ok = seen.size() == members.size();
    }
    if (ok) ++count;
  }
  return count;
}

namespace {

std::vector<VertexKey> vertices_of(const EdgeSet2& edges) {
  std::vector<VertexKey> v;
  for (const Edge2& e : edges) {
    v.push_back({e.x, e.y});
    v.push_back({e.x + (e.axis == 0 ? 1 : 0), e.y + (e.axis == 1 ? 1 : 0)});
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Union of two edge sets when they are edge-disjoint and share a vertex.
bool try_union(const EdgeSet2& a, const EdgeSet2& b, int off_x, int off_y, EdgeSet2& out) {
  EdgeSet2 shifted;
  shifted.reserve(b.size());
  for (Edge2 e : b) {
    e.x += off_x;
    e.y += off_y;
    shifted.push_back(e);
  }
  out.clear();
  std::set_union(a.begin(), a.end(), shifted.begin(), shifted.end(), std::back_inserter(out));
  if (out.size() != a.size() + shifted.size()) return false;  // shared edge
  // Vertex contact check.
  auto va = vertices_of(a), vb = vertices_of(shifted);
  std::vector<VertexKey> inter;
  std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(inter));
  return !inter.empty();
}

}  // namespace

Search2DReport min_doubly_decomposable_search(int max_len) {
  if (max_len > 16) throw CapacityError("search guarded to max_len <= 16", max_len);
  Search2DReport report;

  // SAP building blocks by perimeter.
  std::map<int, std::vector<EdgeSet2>> saps;
  for (int p = 4; p + 4 <= max_len; p += 2) saps[p] = self_avoiding_polygons(p);
  std::set<EdgeSet2> loops;  // canonical up to translation
  for (int p = 4; p <= max_len; p += 2)
    for (const EdgeSet2& s : self_avoiding_polygons(p)) loops.insert(s);

  // Glue polygons one at a time: every connected union arises with
  // connected prefixes, so this reaches all multi-cycle loops.
  std::set<EdgeSet2> frontier;
  for (auto& [p, shapes] : saps)
    for (const EdgeSet2& s : shapes) frontier.insert(s);
  std::set<EdgeSet2> unions;
  while (!frontier.empty()) {
    std::set<EdgeSet2> next;
    for (const EdgeSet2& base : frontier) {
      int room = max_len - static_cast<int>(base.size());
      if (room < 4) continue;
      auto vb = vertices_of(base);
      for (auto& [p, shapes] : saps) {
        if (p > room) continue;
        for (const EdgeSet2& s : shapes) {
          auto vs = vertices_of(s);
          for (const VertexKey& t : vb) {
            for (const VertexKey& u : vs) {
              EdgeSet2 merged;
              if (!try_union(base, s, t.x - u.x, t.y - u.y, merged)) continue;
              EdgeSet2 canon = canonical_translate(std::move(merged));
              if (unions.insert(canon).second) next.insert(canon);
            }
          }
        }
      }
    }
    frontier.swap(next);
  }
  for (const EdgeSet2& u : unions) loops.insert(u);
  report.loops_raw = loops.size();
  std::set<EdgeSet2> classes;
  for (const EdgeSet2& l : loops) classes.insert(canonical_symmetry(l));
  report.loops_classes = classes.size();

  std::set<EdgeSet2> reported;
  for (const EdgeSet2& u : unions) {
    int d = count_sap_partitions(u);
    if (d >= 2) {
      EdgeSet2 canon = canonical_symmetry(u);
      if (reported.insert(canon).second) report.items.push_back({canon, d});
    }
  }
  std::sort(report.items.begin(), report.items.end(),
            [](const Search2DReport::Item& a, const Search2DReport::Item& b) {
              return a.edges < b.edges;
            });
  return report;
}

}  // namespace z2lgt
