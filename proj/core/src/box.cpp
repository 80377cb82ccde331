#include "z2lgt/box.hpp"

#include <algorithm>

namespace z2lgt {

std::vector<int> KCell::dir_list() const {
  std::vector<int> d;
  for (int a = 0; a < 32; ++a)
    if ((dirs >> a) & 1) d.push_back(a);
  return d;
}

BoxGeometry::BoxGeometry(std::vector<int> lo, std::vector<int> hi)
    : m_(static_cast<int>(lo.size())), lo_(std::move(lo)), hi_(std::move(hi)) {
  if (m_ < 2 || m_ > 8) throw DomainError("box dimension must be in [2,8]");
  if (static_cast<int>(hi_.size()) != m_) throw DomainError("lo/hi size mismatch");
  for (int a = 0; a < m_; ++a) {
    if (hi_[a] <= lo_[a]) throw DomainError("box must have positive extent on every axis");
    if (hi_[a] - lo_[a] > 60) throw DomainError("box extent too large");
  }
  build();
}

BoxGeometry BoxGeometry::centered(int m, int n_side) {
  if (n_side < 1) throw DomainError("n_side must be >= 1");
  return BoxGeometry(std::vector<int>(m, -n_side), std::vector<int>(m, n_side));
}

BoxGeometry BoxGeometry::from_vertex_counts(const std::vector<int>& counts) {
  std::vector<int> lo(counts.size(), 0), hi;
  hi.reserve(counts.size());
  for (int c : counts) {
    if (c < 2) throw DomainError("need at least 2 vertices per axis");
    hi.push_back(c - 1);
  }
  return BoxGeometry(std::move(lo), std::move(hi));
}

bool BoxGeometry::vertex_in_box(const std::vector<int>& v) const {
  if (static_cast<int>(v.size()) != m_) return false;
  for (int a = 0; a < m_; ++a)
    if (v[a] < lo_[a] || v[a] > hi_[a]) return false;
  return true;
}

bool BoxGeometry::cell_in_box(const std::vector<int>& base, std::uint32_t dirs) const {
  if (static_cast<int>(base.size()) != m_) return false;
  if (dirs >> m_) return false;
  for (int a = 0; a < m_; ++a) {
    int top = base[a] + (((dirs >> a) & 1) ? 1 : 0);
    if (base[a] < lo_[a] || top > hi_[a]) return false;
  }
  return true;
}

std::uint64_t BoxGeometry::pack(const std::vector<int>& base, std::uint32_t dirs) const {
  std::uint64_t key = dirs;
  for (int a = 0; a < m_; ++a) key = (key << 6) | std::uint64_t(base[a] - lo_[a]);
  return key;
}

void BoxGeometry::build() {
  cells_.resize(m_ + 1);
  index_.resize(m_ + 1);
  faces_.resize(m_ + 1);
  cofaces_.resize(m_ + 1);

  // Enumerate vertices lexicographically, then per base all direction sets
  // of each degree in ascending bitmask order (which is lexicographic on the
  // sorted direction tuples for fixed popcount).
  std::vector<int> v(lo_);
  std::vector<std::vector<std::uint32_t>> masks_by_k(m_ + 1);
  for (std::uint32_t d = 0; d < (1u << m_); ++d) masks_by_k[popcount32(d)].push_back(d);

  bool done = false;
  while (!done) {
    for (int k = 0; k <= m_; ++k) {
      for (std::uint32_t d : masks_by_k[k]) {
        if (!cell_in_box(v, d)) continue;
        index_[k].emplace(pack(v, d), static_cast<int>(cells_[k].size()));
        cells_[k].push_back(KCell{v, d, +1});
      }
    }
    int a = m_ - 1;
    while (a >= 0) {
      if (++v[a] <= hi_[a]) break;
      v[a] = lo_[a];
      --a;
    }
    done = (a < 0);
  }
  // Fix ordering: the loop above grouped by vertex, so cells of each degree
  // are already sorted by (base, dirs). (Vertex increment above iterates the
  // last axis fastest, i.e. plain lexicographic order.)

  // Incidence tables.
  for (int k = 1; k <= m_; ++k) {
    faces_[k].resize(cells_[k].size());
    for (int idx = 0; idx < num_cells(k); ++idx) {
      const KCell& c = cells_[k][idx];
      auto dl = c.dir_list();
      int pos = 0;
      for (int j : dl) {
        int s = (pos % 2 == 0) ? +1 : -1;  // (-1)^{i+1} with i = pos+1
        std::uint32_t sub = c.dirs & ~(1u << j);
        std::vector<int> shifted = c.base;
        shifted[j] += 1;
        int far_idx = index_of(k - 1, shifted, sub);
        int near_idx = index_of(k - 1, c.base, sub);
        faces_[k][idx].emplace_back(far_idx, s);
        faces_[k][idx].emplace_back(near_idx, -s);
        ++pos;
      }
    }
  }
  for (int k = 0; k < m_; ++k) {
    cofaces_[k].resize(cells_[k].size());
  }
  for (int k = 1; k <= m_; ++k) {
    for (int idx = 0; idx < num_cells(k); ++idx) {
      for (auto& [f, s] : faces_[k][idx]) cofaces_[k - 1][f].emplace_back(idx, s);
    }
  }

  vertex_edges_.resize(cells_[0].size());
  for (int v0 = 0; v0 < num_cells(0); ++v0) {
    for (auto& [e, s] : cofaces_[0][v0]) vertex_edges_[v0].push_back(e);
    std::sort(vertex_edges_[v0].begin(), vertex_edges_[v0].end());
  }
}

int BoxGeometry::index_of(int k, const std::vector<int>& base, std::uint32_t dirs) const {
  if (k < 0 || k > m_ || popcount32(dirs) != k) return -1;
  if (!cell_in_box(base, dirs)) return -1;
  auto it = index_[k].find(pack(base, dirs));
  return it == index_[k].end() ? -1 : it->second;
}

bool BoxGeometry::is_boundary_cell(int k, int idx) const {
  const KCell& c = cells_[k][idx];
  for (int a = 0; a < m_; ++a) {
    if ((c.dirs >> a) & 1) continue;
    if (c.base[a] == lo_[a] || c.base[a] == hi_[a]) return true;
  }
  return false;
}

const std::vector<std::pair<int, int>>& BoxGeometry::faces_of(int k, int idx) const {
  return faces_[k][idx];
}

const std::vector<std::pair<int, int>>& BoxGeometry::cofaces_of(int k, int idx) const {
  return cofaces_[k][idx];
}

std::pair<int, int> BoxGeometry::edge_endpoints(int edge_idx) const {
  const KCell& e = cells_[1][edge_idx];
  int tail = index_of(0, e.base, 0);
  std::vector<int> h = e.base;
  h[e.dir_list()[0]] += 1;
  int head = index_of(0, h, 0);
  return {tail, head};
}

const std::vector<int>& BoxGeometry::vertex_edges(int vertex_idx) const {
  return vertex_edges_[vertex_idx];
}

}  // namespace z2lgt
