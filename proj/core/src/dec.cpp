#include "z2lgt/dec.hpp"

#include <algorithm>
#include <queue>

#include "z2lgt/gf2.hpp"

namespace z2lgt {

Chain boundary(const BoxGeometry& box, const KCell& cell) {
  int k = cell.degree();
  if (k < 1 || k > box.dim()) throw DomainError("boundary: degree must be in [1,m]");
  int idx = box.index_of(cell.degree(), cell.base, cell.dirs);
  if (idx < 0) throw DomainError("boundary: cell outside box");
  Chain r{k - 1, {}};
  for (auto& [f, s] : box.faces_of(k, idx)) r.add(f, s * cell.sign);
  return r;
}

Chain boundary(const BoxGeometry& box, const Chain& chain) {
  if (chain.k < 1 || chain.k > box.dim()) throw DomainError("boundary: degree must be in [1,m]");
  Chain r{chain.k - 1, {}};
  for (auto& [idx, c] : chain.coeffs)
    for (auto& [f, s] : box.faces_of(chain.k, idx)) r.add(f, s * c);
  return r;
}

Chain coboundary(const BoxGeometry& box, const KCell& cell) {
  int k = cell.degree();
  if (k > box.dim() - 1) throw DomainError("coboundary: degree must be <= m-1");
  int idx = box.index_of(k, cell.base, cell.dirs);
  if (idx < 0) throw DomainError("coboundary: cell outside box");
  Chain r{k + 1, {}};
  for (auto& [cf, s] : box.cofaces_of(k, idx)) r.add(cf, s * cell.sign);
  return r;
}

Z2Form exterior_derivative(const BoxGeometry& box, const Z2Form& f) {
  int k = f.degree();
  if (k > box.dim() - 1) throw DomainError("exterior_derivative: degree must be <= m-1");
  Z2Form df = Z2Form::zero(box, k + 1);
  for (int c = 0; c < box.num_cells(k); ++c) {
    if (!f.value(c)) continue;
    for (auto& [cf, s] : box.cofaces_of(k, c)) df.toggle(cf);
  }
  return df;
}

int eval_on_chain(const BoxGeometry& box, const Z2Form& f, const Chain& q) {
  (void)box;
  if (f.degree() != q.k) throw DomainError("eval_on_chain: degree mismatch");
  int acc = 0;
  for (auto& [idx, c] : q.coeffs)
    if ((c & 1) && f.value(idx)) acc ^= 1;
  return acc;
}

namespace {

// Connectivity of a set of degree-k cells through shared lower cells
// (for edges: shared endpoints).
bool support_connected(const BoxGeometry& box, int k, const std::vector<int>& cells) {
  if (cells.empty()) return false;
  std::unordered_map<int, std::vector<int>> by_face;  // face idx -> member positions
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (auto& [f, s] : box.faces_of(k, cells[i])) by_face[f].push_back(static_cast<int>(i));
  std::vector<char> seen(cells.size(), 0);
  std::queue<int> bfs;
  bfs.push(0);
  seen[0] = 1;
  std::size_t cnt = 1;
  while (!bfs.empty()) {
    int i = bfs.front();
    bfs.pop();
    for (auto& [f, s] : box.faces_of(k, cells[i])) {
      for (int j : by_face[f]) {
        if (!seen[j]) {
          seen[j] = 1;
          ++cnt;
          bfs.push(j);
        }
      }
    }
  }
  return cnt == cells.size();
}

}  // namespace

bool is_loop(const BoxGeometry& box, const Chain& gamma) {
  if (gamma.k != 1 || gamma.empty() || !gamma.unit_coefficients()) return false;
  if (!boundary(box, gamma).empty()) return false;
  std::vector<int> supp;
  for (auto& [e, c] : gamma.coeffs) supp.push_back(e);
  return support_connected(box, 1, supp);
}

std::optional<Chain> orient_as_loop(const BoxGeometry& box, const std::vector<int>& edge_indices) {
  if (edge_indices.empty()) return std::nullopt;
  // Vertex incidence; every degree must be even.
  std::map<int, std::vector<int>> incident;  // vertex -> positions
  std::vector<std::pair<int, int>> ends(edge_indices.size());
  for (std::size_t i = 0; i < edge_indices.size(); ++i) {
    ends[i] = box.edge_endpoints(edge_indices[i]);
    incident[ends[i].first].push_back(static_cast<int>(i));
    incident[ends[i].second].push_back(static_cast<int>(i));
  }
  for (auto& [v, lst] : incident)
    if (lst.size() % 2) return std::nullopt;

  // Hierholzer: repeatedly walk unused edges (smallest first) and splice.
  std::vector<char> used(edge_indices.size(), 0);
  Chain gamma{1, {}};
  std::size_t used_count = 0;
  int start_vertex = incident.begin()->first;
  std::vector<int> stack{start_vertex};
  while (!stack.empty()) {
    int v = stack.back();
    int next = -1;
    for (int i : incident[v]) {
      if (!used[i]) {
        next = i;
        break;
      }
    }
    if (next < 0) {
      stack.pop_back();
      continue;
    }
    used[next] = 1;
    ++used_count;
    auto [t, h] = ends[next];
    // positive edge runs tail -> head; sign + when traversed that way
    if (v == t) {
      gamma.add(edge_indices[next], +1);
      stack.push_back(h);
    } else {
      gamma.add(edge_indices[next], -1);
      stack.push_back(t);
    }
  }
  if (used_count != edge_indices.size()) return std::nullopt;  // disconnected
  if (!boundary(box, gamma).empty()) return std::nullopt;      // spliced cycles all close
  return gamma;
}

bool is_surface_with_boundary(const BoxGeometry& box, const Chain& q, const Chain& gamma) {
  if (q.k != 2 || !q.unit_coefficients()) return false;
  return boundary(box, q) == gamma;
}

std::pair<int, int> stokes_pair(const BoxGeometry& box, const Z2Form& sigma, const Chain& q) {
  if (sigma.degree() != 1 || q.k != 2) throw DomainError("stokes_pair: degrees must be (1,2)");
  Chain dq = boundary(box, q);
  if (!is_loop(box, dq)) throw DomainError("stokes_pair: boundary of q is not a loop");
  int lhs = eval_on_chain(box, sigma, dq);
  int rhs = eval_on_chain(box, exterior_derivative(box, sigma), q);
  return {lhs, rhs};
}

std::optional<Z2Form> poincare_solve(const BoxGeometry& box, const Z2Form& nu) {
  if (nu.degree() != 2) throw DomainError("poincare_solve: expected a 2-form");
  int ne = box.num_cells(1), np = box.num_cells(2);
  GF2Matrix a(np, ne);
  for (int p = 0; p < np; ++p)
    for (auto& [e, s] : box.faces_of(2, p)) a.set(p, e, !a.get(p, e));
  std::vector<bool> b(np);
  for (int p = 0; p < np; ++p) b[p] = nu.value(p);
  auto x = a.solve(b);
  if (!x) return std::nullopt;
  Z2Form sigma = Z2Form::zero(box, 1);
  for (int e = 0; e < ne; ++e)
    if ((*x)[e]) sigma.set(e, true);
  return sigma;
}

int poincare_count_log2(const BoxGeometry& box) {
  int ne = box.num_cells(1), np = box.num_cells(2);
  GF2Matrix a(np, ne);
  for (int p = 0; p < np; ++p)
    for (auto& [e, s] : box.faces_of(2, p)) a.set(p, e, !a.get(p, e));
  return ne - a.rank();
}

std::uint64_t poincare_count(const BoxGeometry& box) {
  int k = poincare_count_log2(box);
  if (k >= 64) throw CapacityError("poincare_count does not fit in 64 bits", k);
  return std::uint64_t(1) << k;
}

void gauge_flip_vertex(const BoxGeometry& box, Z2Form& sigma, int vertex_idx) {
  if (sigma.degree() != 1) throw DomainError("gauge_flip_vertex: expected a 1-form");
  for (int e : box.vertex_edges(vertex_idx)) sigma.toggle(e);
}

}  // namespace z2lgt
