// Exhaustive search over loops of the square lattice: enumerate connected
// even edge sets up to translation by gluing self-avoiding polygons, count
// the partitions of each into two self-avoiding cycles, and report every
// loop admitting at least two distinct such decompositions.
#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "z2lgt/box.hpp"
#include "z2lgt/chain.hpp"

namespace z2lgt {

struct Edge2 {
  int x = 0, y = 0;  // base vertex (lower endpoint)
  int axis = 0;      // 0: +x, 1: +y

  auto operator<=>(const Edge2&) const = default;
};

using EdgeSet2 = std::vector<Edge2>;  // sorted

// Translate so the minimal base coordinate pair is (0,0).
EdgeSet2 canonical_translate(EdgeSet2 edges);
// Minimum of canonical_translate over the 8 square-lattice symmetries.
EdgeSet2 canonical_symmetry(const EdgeSet2& edges);

// Undirected edge set of a degree-1 chain on a 2D box.
EdgeSet2 edge_set_from_chain(const BoxGeometry& box, const Chain& gamma);

// Self-avoiding polygons with the given perimeter, up to translation.
std::vector<EdgeSet2> self_avoiding_polygons(int perimeter);

// Partitions of the edge set into two self-avoiding cycles (each part
// connected with every vertex of degree 2). Returns the number of
// unordered partitions.
int count_sap_partitions(const EdgeSet2& edges);

struct Search2DReport {
  std::uint64_t loops_raw = 0;      // enumerated loops, distinct up to translation
  std::uint64_t loops_classes = 0;  // distinct up to the 8 symmetries
  struct Item {
    EdgeSet2 edges;  // canonical up to symmetry
    int decompositions = 0;
  };
  std::vector<Item> items;  // loops with >= 2 decompositions
};

// Enumerate every loop (connected even edge set) in Z^2 with at most
// max_len edges, up to translation, and report those with at least two
// distinct two-cycle decompositions. Guarded to max_len <= 16.
Search2DReport min_doubly_decomposable_search(int max_len);

}  // namespace z2lgt
