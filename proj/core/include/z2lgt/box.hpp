// Finite axis-aligned box of Z^m and its oriented cubical cells.
//
// A positive k-cell is identified by a base vertex x and a strictly
// increasing set of direction indices j1 < ... < jk (stored as a bitmask);
// the cell spans [x, x+e_{j1}] x ... x [x, x+e_{jk}]. Cells of every degree
// are enumerated once, in lexicographic (base vertex, direction set) order,
// and that order is the canonical index used everywhere else.
#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "z2lgt/errors.hpp"

namespace z2lgt {

inline int popcount32(std::uint32_t x) { return __builtin_popcount(x); }

struct KCell {
  std::vector<int> base;   // base vertex
  std::uint32_t dirs = 0;  // bitmask of direction indices; k = popcount
  int sign = +1;           // orientation

  int degree() const { return popcount32(dirs); }
  KCell negated() const { return KCell{base, dirs, -sign}; }
  std::vector<int> dir_list() const;
};

class BoxGeometry {
 public:
  // Vertices span lo[a]..hi[a] along axis a (inclusive). Requires m >= 2,
  // hi > lo on every axis, m <= 8 and extents <= 60.
  BoxGeometry(std::vector<int> lo, std::vector<int> hi);

  // The paper-style box [-N, N]^m.
  static BoxGeometry centered(int m, int n_side);
  // Box with the given vertex count per axis, anchored at the origin.
  static BoxGeometry from_vertex_counts(const std::vector<int>& counts);

  int dim() const { return m_; }
  int lo(int axis) const { return lo_[axis]; }
  int hi(int axis) const { return hi_[axis]; }

  bool vertex_in_box(const std::vector<int>& v) const;
  bool cell_in_box(const std::vector<int>& base, std::uint32_t dirs) const;

  int num_cells(int k) const { return static_cast<int>(cells_[k].size()); }
  const KCell& cell(int k, int idx) const { return cells_[k][idx]; }

  // Index of the positive cell with the given base/dirs, or -1 if it is not
  // a cell of this box.
  int index_of(int k, const std::vector<int>& base, std::uint32_t dirs) const;
  int index_of(const KCell& c) const { return index_of(c.degree(), c.base, c.dirs); }

  // A cell is a boundary cell when it lies inside a face hyperplane of the
  // box: some axis not spanned by the cell sits at lo or hi.
  bool is_boundary_cell(int k, int idx) const;

  // Incidence tables. faces_of lists (index, coefficient) pairs of the
  // (k-1)-chain boundary of positive cell idx; cofaces_of lists the
  // (k+1)-cells whose boundary contains the cell, with the matching sign.
  const std::vector<std::pair<int, int>>& faces_of(int k, int idx) const;
  const std::vector<std::pair<int, int>>& cofaces_of(int k, int idx) const;

  // Convenience for degree-1 cells: endpoint vertex indices (tail, head).
  std::pair<int, int> edge_endpoints(int edge_idx) const;
  // Positive edges incident to a vertex, ascending edge index.
  const std::vector<int>& vertex_edges(int vertex_idx) const;

 private:
  std::uint64_t pack(const std::vector<int>& base, std::uint32_t dirs) const;
  void build();

  int m_;
  std::vector<int> lo_, hi_;
  std::vector<std::vector<KCell>> cells_;                       // per degree
  std::vector<std::unordered_map<std::uint64_t, int>> index_;   // per degree
  std::vector<std::vector<std::vector<std::pair<int, int>>>> faces_;
  std::vector<std::vector<std::vector<std::pair<int, int>>>> cofaces_;
  std::vector<std::vector<int>> vertex_edges_;
};

}  // namespace z2lgt
