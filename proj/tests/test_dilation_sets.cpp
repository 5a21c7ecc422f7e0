#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "radmax/dilation_set.hpp"
#include "radmax/io_util.hpp"

using namespace radmax;

namespace {

// Independent oracle for the cantor generator: base-b interval arithmetic on
// exact integers, descending the digit tree to one level past the dyadic
// resolution and collecting every dyadic cell whose closed interval meets a
// surviving base-b interval.
std::set<std::uint64_t> cantor_cells_oracle(int base, const std::vector<int>& digits,
                                            int depth) {
  std::set<std::uint64_t> out;
  struct Node {
    unsigned long long a;
    __int128 scale;
  };
  std::vector<Node> stack{{0, 1}};
  const __int128 two_n = __int128{1} << depth;
  while (!stack.empty()) {
    Node node = stack.back();
    stack.pop_back();
    if (node.scale >= two_n) {
      // closed intersection of [a, a+1]/scale with the dyadic cells
      const __int128 lo = static_cast<__int128>(node.a) * two_n;
      const __int128 hi = (static_cast<__int128>(node.a) + 1) * two_n;
      __int128 j_min = (lo + node.scale - 1) / node.scale - 1;
      if (j_min < 0) j_min = 0;
      __int128 j_max = hi / node.scale;
      if (j_max > two_n - 1) j_max = two_n - 1;
      for (__int128 j = j_min; j <= j_max; ++j)
        out.insert(static_cast<std::uint64_t>(j));
      continue;
    }
    for (int d : digits)
      stack.push_back({node.a * base + static_cast<unsigned>(d), node.scale * base});
  }
  return out;
}

}  // namespace

TEST_CASE("full interval generator") {
  const auto E = generate({FullIntervalSpec{}, 3});
  REQUIRE(E.cells().size() == 8);
  for (std::uint64_t j = 0; j < 8; ++j) CHECK(E.cells()[j] == j);
  REQUIRE(E.profile().has_value());
  CHECK(E.profile()->beta == 1.0);
  CHECK(E.profile()->gamma == 1.0);
  CHECK(E.profile()->sup_delta_beta_N_finite);
  CHECK_FALSE(E.profile()->sup_delta_log_N_finite);
}

TEST_CASE("finite points generator") {
  const auto E = generate({FinitePointsSpec{{1.0}}, 4});
  REQUIRE(E.cells().size() == 1);
  CHECK(E.cells()[0] == 0);
  CHECK(E.profile()->beta == 0.0);
  CHECK(E.profile()->gamma == 0.0);

  // at most |S| cells, right endpoint clamps into the last cell
  const auto F = generate({FinitePointsSpec{{1.0, 1.5, 2.0}}, 5});
  CHECK(F.cells().size() <= 3);
  CHECK(F.cells().back() == 31);
}

TEST_CASE("cantor generator matches the interval oracle") {
  const int depth = 12;
  const auto E = generate({CantorSpec{3, {0, 2}}, depth});
  const auto oracle = cantor_cells_oracle(3, {0, 2}, depth);
  REQUIRE(E.cells().size() == oracle.size());
  for (std::uint64_t c : E.cells()) CHECK(oracle.count(c) == 1);
  const double beta = std::log(2.0) / std::log(3.0);
  CHECK(E.profile()->beta == doctest::Approx(beta));
  CHECK(E.profile()->gamma == doctest::Approx(beta));

  // exact ternary covering count: 2^m disjoint base-3 intervals at level m
  // (digits 0 and 2 never touch), so N(E, 3^-m) = 2^m exactly.
  for (int m = 1; m <= 6; ++m) {
    long count = 0;
    std::vector<std::pair<unsigned long long, long long>> nodes{{0, 1}};
    for (int l = 0; l < m; ++l) {
      std::vector<std::pair<unsigned long long, long long>> next;
      for (auto [a, s] : nodes)
        for (int d : {0, 2}) next.push_back({a * 3 + d, s * 3});
      nodes = std::move(next);
    }
    count = static_cast<long>(nodes.size());
    CHECK(count == (1L << m));
  }
}

TEST_CASE("restrict to dyadic windows") {
  const auto full3 = generate({FullIntervalSpec{}, 3});
  const auto R = restrict_to(full3, WindowSpec{1, 0});
  REQUIRE(R.cells().size() == 4);
  for (std::uint64_t j = 0; j < 4; ++j) CHECK(R.cells()[j] == j);

  const auto single = generate({FinitePointsSpec{{1.0}}, 4});
  CHECK_THROWS_AS(restrict_to(single, WindowSpec{2, 3}), EmptyWindowError);

  const auto cant = generate({CantorSpec{3, {0, 2}}, 8});
  const auto upper = restrict_to(cant, WindowSpec{1, 1});
  std::vector<std::uint64_t> expected;
  for (std::uint64_t c : cant.cells())
    if (c >= 128) expected.push_back(c);
  CHECK(upper.cells() == expected);
}

TEST_CASE("ancestors and covering counts") {
  const auto full5 = generate({FullIntervalSpec{}, 5});
  CHECK(ancestors(full5, 2) == std::vector<std::uint64_t>{0, 1, 2, 3});

  const DilationSet pair(5, {0, 31});
  CHECK(ancestors(pair, 0) == std::vector<std::uint64_t>{0});

  const auto cant = generate({CantorSpec{3, {0, 2}}, 12});
  const auto anc6 = ancestors(cant, 6);
  // brute-force scan of all 64 level-6 windows
  long nonempty = 0;
  for (std::uint64_t w = 0; w < 64; ++w) {
    bool hit = false;
    for (std::uint64_t c : cant.cells())
      if ((c >> 6) == w) { hit = true; break; }
    if (hit) ++nonempty;
  }
  CHECK(static_cast<long>(anc6.size()) == nonempty);

  CHECK_THROWS_AS(ancestors(cant, 13), std::out_of_range);
  CHECK_THROWS_AS(ancestors(cant, -1), std::out_of_range);
}

TEST_CASE("dyadic subadditivity of covering counts") {
  for (const auto& E : {generate({CantorSpec{3, {0, 2}}, 12}),
                        generate({ConvexSequenceSpec{0.5}, 12}),
                        generate({AssouadRegularSpec{0.5, 1.0, 2}, 12})}) {
    for (int m = 0; m + 2 <= E.depth(); m += 2) {
      const int m2 = m + 2;
      const auto a = ancestors(E, m).size();
      const auto b = ancestors(E, m2).size();
      CHECK(a <= b);
      CHECK(b <= (std::size_t{1} << (m2 - m)) * a);
    }
  }
}

TEST_CASE("restrict counts match ancestor filtering") {
  const auto E = generate({CantorSpec{3, {0, 2}}, 10});
  for (int level : {1, 2, 3}) {
    for (std::uint64_t pos = 0; pos < (std::uint64_t{1} << level); ++pos) {
      long direct = 0;
      for (std::uint64_t c : E.cells())
        if ((c >> (E.depth() - level)) == pos) ++direct;
      if (direct == 0) {
        CHECK_THROWS_AS(restrict_to(E, WindowSpec{level, pos}), EmptyWindowError);
      } else {
        CHECK(static_cast<long>(restrict_to(E, WindowSpec{level, pos}).cells().size()) ==
              direct);
      }
    }
  }
}

TEST_CASE("convex sequence discretization") {
  const auto E = generate({ConvexSequenceSpec{0.5}, 10});
  // beta = 1/2: the set is {1 + 1/n}; every marked cell must contain a term
  // or lie inside the accumulation run, and the first cell is always marked.
  CHECK(E.cells().front() == 0);
  // term 2.0 lands in the final cell
  CHECK(E.cells().back() == (1u << 10) - 1);
  // cell of 1 + 1/2 = 1.5
  const std::uint64_t half_cell = 512;
  CHECK(std::binary_search(E.cells().begin(), E.cells().end(), half_cell));
  CHECK(E.profile()->gamma == 1.0);
}

namespace {

// Independent level-by-level simulation of the staggered-burst recipe using a
// set of (origin, cell) pairs; origins evolve separately and the final union
// is compared against the generator cell-for-cell.
std::set<std::uint64_t> assouad_regular_oracle(double beta, double gamma, int stride,
                                               int depth) {
  auto increments = [](double dim, int i) {
    return std::floor(dim * i) > std::floor(dim * (i - 1));
  };
  std::set<std::uint64_t> cells;
  // backbone
  std::set<std::uint64_t> level{0};
  for (int i = 1; i <= depth; ++i) {
    std::set<std::uint64_t> next;
    for (auto c : level) {
      next.insert(2 * c);
      if (increments(beta, i)) next.insert(2 * c + 1);
    }
    level = std::move(next);
  }
  cells.insert(level.begin(), level.end());
  if (gamma > beta + 1e-12) {
    for (int j = 2; j + 1 <= depth; j += stride) {
      const int span = static_cast<int>(std::ceil(beta * j / (gamma - beta)));
      std::set<std::uint64_t> burst{1};
      for (int i = j + 2; i <= depth; ++i) {
        std::set<std::uint64_t> next;
        for (auto c : burst) {
          next.insert(2 * c);
          if (i <= j + span && increments(gamma, i)) next.insert(2 * c + 1);
        }
        burst = std::move(next);
      }
      cells.insert(burst.begin(), burst.end());
    }
  }
  return cells;
}

}  // namespace

TEST_CASE("assouad-regular cell budget") {
  for (auto [beta, gamma, depth] :
       {std::tuple{0.5, 1.0, 22}, std::tuple{0.4, 0.8, 22}, std::tuple{0.5, 0.5, 16}}) {
    const auto E = generate({AssouadRegularSpec{beta, gamma, 2}, depth});
    const double target = std::ceil(beta * depth);
    const double count = static_cast<double>(E.cells().size());
    CHECK(count >= std::pow(2.0, target - 1));
    CHECK(count <= std::pow(2.0, target + 1));
    // exact agreement with an independent simulation of the recipe
    const auto oracle = assouad_regular_oracle(beta, gamma, 2, depth);
    REQUIRE(E.cells().size() == oracle.size());
    CHECK(std::equal(E.cells().begin(), E.cells().end(), oracle.begin()));
  }
  // beta == gamma: exactly the backbone, 2^{floor(beta*m)} cells at each level
  const auto B = generate({AssouadRegularSpec{0.5, 0.5, 2}, 16});
  for (int m = 0; m <= 16; ++m)
    CHECK(ancestors(B, m).size() == (std::size_t{1} << (m / 2)));
}

TEST_CASE("generator validation") {
  CHECK_THROWS_AS(generate({FullIntervalSpec{}, 0}), std::out_of_range);
  CHECK_THROWS_AS(generate({FullIntervalSpec{}, 31}), std::out_of_range);
  CHECK_THROWS_AS(generate({CantorSpec{3, {0, 3}}, 5}), std::invalid_argument);
  CHECK_THROWS_AS(generate({CantorSpec{3, {}}, 5}), std::invalid_argument);
  CHECK_THROWS_AS(generate({ConvexSequenceSpec{1.0}, 5}), std::invalid_argument);
  CHECK_THROWS_AS(generate({AssouadRegularSpec{0.8, 0.5, 2}, 5}), std::invalid_argument);
  CHECK_THROWS_AS(generate({FinitePointsSpec{{0.5}}, 5}), std::invalid_argument);
  CHECK_THROWS_AS(DilationSet(5, {}), std::invalid_argument);
  CHECK_THROWS_AS(DilationSet(5, {3, 3}), std::invalid_argument);
  CHECK_THROWS_AS(DilationSet(5, {32}), std::invalid_argument);
}

TEST_CASE("set spec and dump round-trip through JSON") {
  const SetSpec spec{CantorSpec{3, {0, 2}}, 9};
  const auto j = io::set_spec_to_json(spec);
  const auto back = io::set_spec_from_json(j);
  const auto E1 = generate(spec);
  const auto E2 = generate(back);
  CHECK(E1.cells() == E2.cells());

  const auto dump = io::dilation_set_to_json(E1);
  const auto E3 = io::dilation_set_from_json(dump);
  CHECK(E3.cells() == E1.cells());
  CHECK(E3.depth() == E1.depth());
  CHECK(E3.profile()->beta == E1.profile()->beta);
}
