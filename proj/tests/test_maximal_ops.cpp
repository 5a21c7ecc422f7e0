#include <doctest.h>

#include <cmath>
#include <vector>

#include "radmax/maximal.hpp"

using namespace radmax;

TEST_CASE("weighted norms on snapped grids") {
  const double edges[] = {1.0, 2.0};
  const auto grid = RadialGrid::make(3.0, 64, 3, edges);
  std::vector<double> v(grid.nodes.size(), 0.0);
  for (std::size_t i = 0; i < grid.nodes.size(); ++i)
    if (grid.nodes[i] > 1.0 && grid.nodes[i] < 2.0) v[i] = 1.0;
  CHECK(weighted_norm(v, grid, 1.0) == doctest::Approx(7.0 / 3).epsilon(1e-9));

  const auto grid2 = RadialGrid::make(3.0, 64, 2, edges);
  std::vector<double> w(grid2.nodes.size(), 0.0);
  for (std::size_t i = 0; i < grid2.nodes.size(); ++i)
    if (grid2.nodes[i] > 1.0 && grid2.nodes[i] < 2.0) w[i] = 1.0;
  CHECK(weighted_norm(w, grid2, 2.0) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-9));

  std::vector<double> zeros(grid.nodes.size(), 0.0);
  CHECK(weighted_norm(zeros, grid, 2.0) == 0.0);
  CHECK_THROWS_AS(weighted_norm(zeros, grid, 0.5), std::invalid_argument);
}

TEST_CASE("maximal value on a single dilation") {
  const auto E = generate({FinitePointsSpec{{1.0}}, 20});
  const RadialFunction f = RadialFunction::indicator(0.0, 0.5);
  CHECK(maximal_value(E, f, 3, 2.0, 1e-10) == 0.0);  // |r - t| = 1 > 1/2
  // closed form: 2 * ∫_{0.2}^{0.5} s ds / (4 * 1.2) = 0.04375
  CHECK(maximal_value(E, f, 3, 1.2, 1e-10) == doctest::Approx(0.04375).epsilon(1e-4));
}

TEST_CASE("maximal value of the constant function is 1") {
  const auto E = generate({FullIntervalSpec{}, 8});
  const RadialFunction one = RadialFunction::indicator(0.0, 12.0);
  CHECK(maximal_value(E, one, 3, 1.7, 1e-8) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("decomposition pieces vanish off-support") {
  const auto E = generate({CantorSpec{3, {0, 2}}, 6});
  const RadialFunction f = RadialFunction::indicator(0.0, 0.5);
  const auto pieces = decomposition_pieces(E, f, 3, 2.0, 5.0, 1e-9);
  CHECK(pieces.mp == 0.0);
  CHECK(pieces.r1 == 0.0);
  CHECK(pieces.r2 == 0.0);
}

TEST_CASE("d=2 tail piece matches the closed form") {
  const auto E = generate({FullIntervalSpec{}, 6});
  const RadialFunction one = RadialFunction::indicator(0.0, 10.0);
  const auto pieces = decomposition_pieces(E, one, 2, 2.0, 1.0, 1e-10);
  // r2_minus = r^{-1/2} ∫_{t-r}^t (s-t+r)^{-1/2} ds = r^{-1/2} * 2 sqrt(r) = 2
  CHECK(pieces.r2_minus == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(pieces.r2_plus == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(pieces.mp_minus > 0.0);
  CHECK(pieces.r1_minus == 0.0);  // needs t <= r/2 = 1/2 < 1
}

TEST_CASE("pieces are nonnegative and scale linearly") {
  const auto E = generate({CantorSpec{3, {0, 2}}, 6});
  const RadialFunction f = RadialFunction::smooth_bump(1.5, 0.3);
  for (int d : {2, 3}) {
    for (double r : {0.8, 1.5, 2.4}) {
      const auto a = decomposition_pieces(E, f, d, 2.0, r, 1e-9);
      const auto b = decomposition_pieces(E, f.scaled(3.7), d, 2.0, r, 1e-9);
      const double av = a.sum(), bv = b.sum();
      CHECK(av >= 0.0);
      if (av > 1e-14) CHECK(bv / av == doctest::Approx(3.7).epsilon(1e-9));
      const double ma = maximal_value(E, f, d, r, 1e-9);
      const double mb = maximal_value(E, f.scaled(3.7), d, r, 1e-9);
      if (ma > 1e-14) CHECK(mb / ma == doctest::Approx(3.7).epsilon(1e-9));
    }
  }
}

TEST_CASE("maximal value grows with the dilation set") {
  const auto big = generate({FullIntervalSpec{}, 6});
  std::vector<std::uint64_t> half(big.cells().begin(), big.cells().begin() + 32);
  const DilationSet small(6, half);
  const RadialFunction f = RadialFunction::smooth_bump(2.0, 0.5);
  for (double r : {0.7, 1.3, 2.9}) {
    CHECK(maximal_value(small, f, 3, r, 1e-9) <=
          maximal_value(big, f, 3, r, 1e-9) + 1e-12);
  }
}

TEST_CASE("maximal value is monotone under depth refinement") {
  const RadialFunction f = RadialFunction::smooth_bump(1.8, 0.4);
  for (int depth : {5, 6, 7}) {
    const auto coarse = generate({CantorSpec{3, {0, 2}}, depth});
    const auto fine = generate({CantorSpec{3, {0, 2}}, depth + 1});
    const auto cfull = generate({FullIntervalSpec{}, depth});
    const auto ffull = generate({FullIntervalSpec{}, depth + 1});
    for (double r : {0.9, 1.6}) {
      CHECK(maximal_value(fine, f, 3, r, 1e-9) >=
            maximal_value(coarse, f, 3, r, 1e-9) - 1e-7);
      CHECK(maximal_value(ffull, f, 3, r, 1e-9) >=
            maximal_value(cfull, f, 3, r, 1e-9) - 1e-12);
    }
  }
}

TEST_CASE("domination: maximal value controlled by the pieces") {
  const auto E = generate({CantorSpec{3, {0, 2}}, 6});
  const RadialFunction one = RadialFunction::indicator(0.0, 10.0);
  const auto grid = RadialGrid::make(4.0, 8, 3);
  const auto report = domination_check(E, one, 3, 2.0, grid, 1e-8);
  REQUIRE(!report.rows.empty());
  CHECK(report.max_ratio > 0.0);
  CHECK(report.max_ratio <= 10.0);

  // zero input: every node skipped
  const RadialFunction zero = RadialFunction::indicator(0.5, 1.0, 0.0);
  const auto empty = domination_check(E, zero, 3, 2.0, grid, 1e-8);
  CHECK(empty.rows.empty());
  CHECK(empty.skipped == static_cast<long>(grid.nodes.size()));
}
