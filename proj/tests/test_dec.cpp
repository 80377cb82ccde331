// Discrete exterior calculus: boundary/coboundary, d, Stokes, Poincare.
#include "doctest.h"

#include <random>

#include "z2lgt/dec.hpp"

using namespace z2lgt;

namespace {

KCell make_cell(std::vector<int> base, std::vector<int> dirs, int sign = +1) {
  std::uint32_t mask = 0;
  for (int d : dirs) mask |= (1u << d);
  return KCell{std::move(base), mask, sign};
}

Z2Form random_form(const BoxGeometry& box, int k, std::mt19937& rng) {
  Z2Form f = Z2Form::zero(box, k);
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < box.num_cells(k); ++i)
    if (coin(rng)) f.set(i, true);
  return f;
}

}  // namespace

TEST_CASE("cell enumeration is lexicographic and stable") {
  BoxGeometry box({0, 0}, {2, 2});
  CHECK(box.num_cells(0) == 9);
  CHECK(box.num_cells(1) == 12);
  CHECK(box.num_cells(2) == 4);
  // First vertex is the lexicographically smallest.
  CHECK(box.cell(0, 0).base == std::vector<int>{0, 0});
  CHECK(box.cell(0, 1).base == std::vector<int>{0, 1});
  // Cells ordered by (base, dirs).
  for (int k = 0; k <= 2; ++k) {
    for (int i = 0; i + 1 < box.num_cells(k); ++i) {
      const KCell& a = box.cell(k, i);
      const KCell& b = box.cell(k, i + 1);
      CHECK(std::make_pair(a.base, a.dirs) < std::make_pair(b.base, b.dirs));
    }
  }
}

TEST_CASE("plaquette boundary is its oriented perimeter") {
  BoxGeometry box = BoxGeometry::centered(2, 2);
  KCell p = make_cell({0, 0}, {0, 1});
  Chain b = boundary(box, p);
  REQUIRE(b.k == 1);
  REQUIRE(b.coeffs.size() == 4);
  CHECK(b[box.index_of(1, {0, 0}, 1u)] == +1);  // bottom, +x
  CHECK(b[box.index_of(1, {1, 0}, 2u)] == +1);  // right, +y
  CHECK(b[box.index_of(1, {0, 1}, 1u)] == -1);  // top, backwards
  CHECK(b[box.index_of(1, {0, 0}, 2u)] == -1);  // left, backwards
  // Negated cell gives the negated chain.
  CHECK(boundary(box, p.negated()) == b.negated());
}

TEST_CASE("boundary of boundary vanishes exhaustively (m=2,3)") {
  for (int m : {2, 3}) {
    BoxGeometry box(std::vector<int>(m, 0), std::vector<int>(m, 3));
    for (int k = 2; k <= m; ++k) {
      for (int idx = 0; idx < box.num_cells(k); ++idx) {
        Chain b = boundary(box, box.cell(k, idx));
        CHECK(boundary(box, b).empty());
      }
    }
  }
}

TEST_CASE("boundary of a 3-cell has six signed plaquettes") {
  BoxGeometry box({0, 0, 0}, {1, 1, 1});
  Chain b = boundary(box, make_cell({0, 0, 0}, {0, 1, 2}));
  CHECK(b.coeffs.size() == 6);
  for (auto& [p, c] : b.coeffs) CHECK((c == 1 || c == -1));
  CHECK(boundary(box, b).empty());
}

TEST_CASE("coboundary counts cofaces and clips at the box face") {
  BoxGeometry box({0, 0, 0}, {2, 2, 2});
  // interior edge: 2(m-1) = 4 plaquettes
  Chain cb = coboundary(box, make_cell({1, 1, 1}, {0}));
  CHECK(cb.coeffs.size() == 4);
  // edge on a box face: 3 plaquettes
  Chain cf = coboundary(box, make_cell({1, 0, 1}, {0}));
  CHECK(cf.coeffs.size() == 3);
  // top-degree cells have no coboundary
  CHECK_THROWS_AS(coboundary(box, make_cell({0, 0, 0}, {0, 1, 2})), DomainError);
}

TEST_CASE("incidence duality on a 3^3 box") {
  BoxGeometry box({0, 0, 0}, {2, 2, 2});
  for (int e = 0; e < box.num_cells(1); ++e) {
    Chain cb = coboundary(box, box.cell(1, e));
    for (int p = 0; p < box.num_cells(2); ++p) {
      Chain bd = boundary(box, box.cell(2, p));
      bool e_in_bp = bd[e] != 0;
      bool p_in_ce = cb[p] != 0;
      CHECK(e_in_bp == p_in_ce);
      if (e_in_bp) CHECK(bd[e] == cb[p]);  // matching incidence signs
    }
  }
}

TEST_CASE("exterior derivative of a single-edge form is its coboundary support") {
  BoxGeometry box({0, 0, 0}, {2, 2, 2});
  Z2Form sigma = Z2Form::zero(box, 1);
  int e = box.index_of(1, {1, 1, 1}, 1u);
  sigma.set(e, true);
  Z2Form ds = exterior_derivative(box, sigma);
  CHECK(ds.support_size() == 4);
  for (int p : ds.support()) {
    Chain bd = boundary(box, box.cell(2, p));
    CHECK(bd[e] != 0);
  }
}

TEST_CASE("d is linear and d(df) = 0 on random forms") {
  BoxGeometry box({0, 0, 0}, {2, 2, 2});
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    Z2Form f = random_form(box, 0, rng);
    Z2Form g = random_form(box, 0, rng);
    CHECK(exterior_derivative(box, f.plus(g)) ==
          exterior_derivative(box, f).plus(exterior_derivative(box, g)));
    Z2Form s = random_form(box, 1, rng);
    CHECK(exterior_derivative(box, exterior_derivative(box, s)).is_zero());
  }
  CHECK(exterior_derivative(box, Z2Form::zero(box, 1)).is_zero());
}

TEST_CASE("eval_on_chain: additivity, zero form, mod-2 coefficients") {
  BoxGeometry box({0, 0, 0}, {2, 2, 2});
  std::mt19937 rng(11);
  Z2Form zero = Z2Form::zero(box, 2);
  Chain q{2, {}};
  q.add(0, 1);
  q.add(1, 2);  // even coefficient contributes nothing
  CHECK(eval_on_chain(box, zero, q) == 0);
  Z2Form f = random_form(box, 2, rng);
  Chain q1{2, {}}, q2{2, {}};
  q1.add(0, 1);
  q1.add(3, -1);
  q2.add(1, 1);
  q2.add(5, 1);
  CHECK(eval_on_chain(box, f, q1.plus(q2)) ==
        (eval_on_chain(box, f, q1) ^ eval_on_chain(box, f, q2)));
  CHECK_THROWS_AS(eval_on_chain(box, f, Chain{1, {}}), DomainError);
}

TEST_CASE("minimal vortex pairs to 1 with a flat surface holding one support plaquette") {
  BoxGeometry box({0, 0, 0}, {3, 3, 3});
  Z2Form sigma = Z2Form::zero(box, 1);
  int e = box.index_of(1, {1, 1, 1}, 1u);  // x-edge
  sigma.set(e, true);
  Z2Form nu = exterior_derivative(box, sigma);
  // Flat xy-rectangle whose boundary contains e: exactly one support plaquette.
  Chain q{2, {}};
  q.add(box.index_of(2, {1, 1, 1}, 0b11u), 1);
  q.add(box.index_of(2, {1, 2, 1}, 0b11u), 1);
  CHECK(eval_on_chain(box, nu, q) == 1);
}

TEST_CASE("stokes identity on random pairs over a 4^3 box") {
  BoxGeometry box({0, 0, 0}, {3, 3, 3});
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> pick01(0, 1);
  int checked = 0;
  for (int trial = 0; trial < 800 && checked < 200; ++trial) {
    Z2Form sigma = random_form(box, 1, rng);
    int da = pick01(rng);
    int db = da + 1 + (da == 0 ? pick01(rng) : 0);
    std::vector<int> base{pick01(rng), pick01(rng), pick01(rng)};
    int l1 = 1 + pick01(rng), l2 = 1 + pick01(rng);
    Chain q{2, {}};
    bool ok = true;
    for (int a = 0; a < l1 && ok; ++a)
      for (int b = 0; b < l2 && ok; ++b) {
        std::vector<int> cellbase = base;
        cellbase[da] += a;
        cellbase[db] += b;
        int idx = box.index_of(2, cellbase, (1u << da) | (1u << db));
        ok = idx >= 0;
        if (ok) q.add(idx, 1);
      }
    if (!ok) continue;
    auto [lhs, rhs] = stokes_pair(box, sigma, q);
    CHECK(lhs == rhs);
    ++checked;
  }
  CHECK(checked == 200);
  // sigma = 0 gives (0, 0).
  Chain q{2, {}};
  q.add(box.index_of(2, {1, 1, 1}, 0b11u), 1);
  auto [l, r] = stokes_pair(box, Z2Form::zero(box, 1), q);
  CHECK(l == 0);
  CHECK(r == 0);
}

TEST_CASE("two surfaces with the same boundary have equal dsigma sums") {
  BoxGeometry box({0, 0, 0}, {2, 2, 2});
  std::mt19937 rng(31);
  // q: one face of a cube; q': the other five, reoriented to share the
  // boundary loop.
  int cube = box.index_of(3, {0, 0, 0}, 0b111u);
  Chain cube_boundary = boundary(box, box.cell(3, cube));
  int first = cube_boundary.coeffs.begin()->first;
  int sign = cube_boundary.coeffs.begin()->second;
  Chain q{2, {}};
  q.add(first, sign);
  Chain qp = cube_boundary.negated();
  qp.add(first, sign);  // remove the chosen face: five remain, flipped
  CHECK(boundary(box, q) == boundary(box, qp));
  for (int trial = 0; trial < 50; ++trial) {
    Z2Form sigma = random_form(box, 1, rng);
    Z2Form ds = exterior_derivative(box, sigma);
    CHECK(eval_on_chain(box, ds, q) == eval_on_chain(box, ds, qp));
  }
}

TEST_CASE("poincare solving: round trip, closedness, solution count") {
  BoxGeometry box({0, 0, 0}, {1, 1, 1});  // 12 edges, 6 plaquettes
  CHECK(box.num_cells(1) == 12);
  CHECK(box.num_cells(2) == 6);

  auto z = poincare_solve(box, Z2Form::zero(box, 2));
  REQUIRE(z.has_value());
  CHECK(exterior_derivative(box, *z).is_zero());

  // Brute-force oracle: number of closed 1-forms on the cube.
  int closed_count = 0;
  for (int bits = 0; bits < (1 << 12); ++bits) {
    Z2Form s = Z2Form::zero(box, 1);
    for (int e = 0; e < 12; ++e)
      if ((bits >> e) & 1) s.set(e, true);
    if (exterior_derivative(box, s).is_zero()) ++closed_count;
  }
  CHECK(poincare_count(box) == static_cast<std::uint64_t>(closed_count));
  CHECK(closed_count == 128);  // 2^(12 - rank d), rank 5

  std::mt19937 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    Z2Form s0 = random_form(box, 1, rng);
    Z2Form nu = exterior_derivative(box, s0);
    auto s = poincare_solve(box, nu);
    REQUIRE(s.has_value());
    CHECK(exterior_derivative(box, *s) == nu);
    CHECK(poincare_count_log2(box) == 7);  // independent of nu
  }

  // A non-closed nu gets the no-solution marker.
  Z2Form bad = Z2Form::zero(box, 2);
  bad.set(0, true);
  REQUIRE(!exterior_derivative(box, bad).is_zero());
  CHECK(!poincare_solve(box, bad).has_value());
}

TEST_CASE("is_loop accepts rectangles and rejects broken chains") {
  BoxGeometry box({0, 0}, {3, 3});
  Chain square = boundary(box, make_cell({1, 1}, {0, 1}));
  CHECK(is_loop(box, square));
  Chain broken = square;
  broken.coeffs.erase(broken.coeffs.begin());
  CHECK(!is_loop(box, broken));
}

TEST_CASE("cells outside the box are rejected") {
  BoxGeometry box({0, 0}, {2, 2});
  CHECK_THROWS_AS(boundary(box, make_cell({5, 5}, {0, 1})), DomainError);
  CHECK_THROWS_AS(coboundary(box, make_cell({5, 5}, {0})), DomainError);
}

TEST_CASE("boundary cell flags") {
  BoxGeometry box({0, 0, 0}, {2, 2, 2});
  int face_plaq = box.index_of(2, {0, 0, 0}, 0b011u);  // xy at z=0
  int mid_plaq = box.index_of(2, {0, 0, 1}, 0b011u);   // xy at z=1
  CHECK(box.is_boundary_cell(2, face_plaq));
  CHECK(!box.is_boundary_cell(2, mid_plaq));
}
