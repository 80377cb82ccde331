// Integer chains and Z2-valued forms over the positive cells of a box.
//
// Chains keep signed integer coefficients keyed by positive-cell index (the
// box's canonical order), with zero coefficients absent. Z2 forms are stored
// as bitsets over positive cells; over Z2 the antisymmetry f(-c) = -f(c)
// makes the value orientation independent, so only positive cells are kept.
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "z2lgt/box.hpp"

namespace z2lgt {

struct Chain {
  int k = 0;
  std::map<int, int> coeffs;  // positive-cell index -> nonzero coefficient

  void add(int cell_idx, int c) {
    if (c == 0) return;
    auto it = coeffs.find(cell_idx);
    if (it == coeffs.end()) {
      coeffs.emplace(cell_idx, c);
    } else {
      it->second += c;
      if (it->second == 0) coeffs.erase(it);
    }
  }
  bool empty() const { return coeffs.empty(); }
  int operator[](int cell_idx) const {
    auto it = coeffs.find(cell_idx);
    return it == coeffs.end() ? 0 : it->second;
  }
  Chain negated() const {
    Chain r{k, {}};
    for (auto& [i, c] : coeffs) r.coeffs.emplace(i, -c);
    return r;
  }
  Chain plus(const Chain& o) const {
    Chain r = *this;
    for (auto& [i, c] : o.coeffs) r.add(i, c);
    return r;
  }
  // True when every coefficient is -1, 0, or +1.
  bool unit_coefficients() const {
    for (auto& [i, c] : coeffs)
      if (c < -1 || c > 1) return false;
    return true;
  }
  friend bool operator==(const Chain& a, const Chain& b) {
    return a.k == b.k && a.coeffs == b.coeffs;
  }
};

class Z2Form {
 public:
  Z2Form() = default;
  Z2Form(int k, int num_cells) : k_(k), bits_((num_cells + 63) / 64, 0), n_(num_cells) {}
  static Z2Form zero(const BoxGeometry& box, int k) { return Z2Form(k, box.num_cells(k)); }

  int degree() const { return k_; }
  int num_cells() const { return n_; }
  bool value(int idx) const { return (bits_[idx >> 6] >> (idx & 63)) & 1; }
  void set(int idx, bool v) {
    std::uint64_t m = std::uint64_t(1) << (idx & 63);
    if (v) bits_[idx >> 6] |= m; else bits_[idx >> 6] &= ~m;
  }
  void toggle(int idx) { bits_[idx >> 6] ^= std::uint64_t(1) << (idx & 63); }

  std::vector<int> support() const {
    std::vector<int> s;
    for (int i = 0; i < n_; ++i)
      if (value(i)) s.push_back(i);
    return s;
  }
  int support_size() const {
    int c = 0;
    for (auto w : bits_) c += __builtin_popcountll(w);
    return c;
  }
  bool is_zero() const {
    for (auto w : bits_)
      if (w) return false;
    return true;
  }
  Z2Form plus(const Z2Form& o) const {
    Z2Form r = *this;
    for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] ^= o.bits_[i];
    return r;
  }
  friend bool operator==(const Z2Form& a, const Z2Form& b) {
    return a.k_ == b.k_ && a.bits_ == b.bits_;
  }

 private:
  int k_ = 0;
  std::vector<std::uint64_t> bits_;
  int n_ = 0;
};

}  // namespace z2lgt
