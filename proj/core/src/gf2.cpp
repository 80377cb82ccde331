#include "z2lgt/gf2.hpp"

namespace z2lgt {

namespace {

// Row-reduce a copy of the matrix (optionally augmented) and report pivots.
struct Reduction {
  std::vector<std::vector<std::uint64_t>> rows;
  std::vector<int> pivot_col;  // per reduced row
  int words;
};

Reduction reduce(const GF2Matrix& m, const std::vector<bool>* aug) {
  int cols = m.cols() + (aug ? 1 : 0);
  int words = (cols + 63) / 64;
  Reduction red;
  red.words = words;
  red.rows.assign(m.rows(), std::vector<std::uint64_t>(words, 0));
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c)
      if (m.get(r, c)) red.rows[r][c >> 6] |= std::uint64_t(1) << (c & 63);
    if (aug && (*aug)[r]) red.rows[r][m.cols() >> 6] |= std::uint64_t(1) << (m.cols() & 63);
  }
  int rank = 0;
  for (int c = 0; c < m.cols() && rank < m.rows(); ++c) {
    int pivot = -1;
    for (int r = rank; r < m.rows(); ++r) {
      if ((red.rows[r][c >> 6] >> (c & 63)) & 1) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(red.rows[rank], red.rows[pivot]);
    for (int r = 0; r < m.rows(); ++r) {
      if (r == rank) continue;
      if ((red.rows[r][c >> 6] >> (c & 63)) & 1)
        for (int w = 0; w < words; ++w) red.rows[r][w] ^= red.rows[rank][w];
    }
    red.pivot_col.push_back(c);
    ++rank;
  }
  return red;
}

}  // namespace

int GF2Matrix::rank() const {
  return static_cast<int>(reduce(*this, nullptr).pivot_col.size());
}

std::optional<std::vector<bool>> GF2Matrix::solve(const std::vector<bool>& b) const {
  Reduction red = reduce(*this, &b);
  int rank = static_cast<int>(red.pivot_col.size());
  // Inconsistent iff some zero row has augmented bit set.
  for (int r = rank; r < rows_; ++r) {
    bool any = false;
    for (int c = 0; c < cols_ && !any; ++c)
      any = (red.rows[r][c >> 6] >> (c & 63)) & 1;
    bool rhs = (red.rows[r][cols_ >> 6] >> (cols_ & 63)) & 1;
    if (!any && rhs) return std::nullopt;
  }
  std::vector<bool> x(cols_, false);
  for (int r = 0; r < rank; ++r) {
    bool rhs = (red.rows[r][cols_ >> 6] >> (cols_ & 63)) & 1;
    x[red.pivot_col[r]] = rhs;  // free variables stay 0
  }
  return x;
}

}  // namespace z2lgt
