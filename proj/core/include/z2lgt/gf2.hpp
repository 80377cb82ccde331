// Dense bit-packed GF(2) linear algebra, sized for desk-scale boxes.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace z2lgt {

class GF2Matrix {
 public:
  GF2Matrix(int rows, int cols)
      : rows_(rows), cols_(cols), words_((cols + 63) / 64), data_(std::size_t(rows) * words_, 0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  bool get(int r, int c) const { return (row(r)[c >> 6] >> (c & 63)) & 1; }
  void set(int r, int c, bool v) {
    std::uint64_t m = std::uint64_t(1) << (c & 63);
    if (v) row(r)[c >> 6] |= m; else row(r)[c >> 6] &= ~m;
  }

  int rank() const;

  // One solution x of A x = b, or nullopt when inconsistent.
  std::optional<std::vector<bool>> solve(const std::vector<bool>& b) const;

 private:
  std::uint64_t* row(int r) { return data_.data() + std::size_t(r) * words_; }
  const std::uint64_t* row(int r) const { return data_.data() + std::size_t(r) * words_; }

  int rows_, cols_, words_;
  std::vector<std::uint64_t> data_;
};

}  // namespace z2lgt
