#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "radmax/experiments.hpp"
#include "radmax/io_util.hpp"
#include "radmax/rng.hpp"

using namespace radmax;

TEST_CASE("exponent fits") {
  {
    std::vector<std::pair<double, double>> pts{{1, 2}, {2, 4}, {3, 6}};
    const auto fit = fit_exponent(pts);
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.r_squared == doctest::Approx(1.0));
  }
  {
    std::vector<std::pair<double, double>> pts{{0, 0}, {1, 1}, {2, 2}};
    CHECK(fit_exponent(pts).slope == doctest::Approx(1.0));
  }
  {
    SplitMix64 rng(5);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 40; ++i)
      pts.emplace_back(i, 0.5 * i + 0.02 * (rng.uniform() - 0.5));
    CHECK(std::fabs(fit_exponent(pts).slope - 0.5) < 0.02);
  }
  {
    std::vector<std::pair<double, double>> degenerate{{1, 2}, {1, 3}, {1, 4}};
    CHECK_THROWS_AS(fit_exponent(degenerate), FitError);
  }
}

TEST_CASE("step-train scaling experiment") {
  const auto E = generate({CantorSpec{3, {0, 2}}, 8});
  {
    const auto rec = experiment_pq(E, 3, 2.0, 3.0, 6, 12);
    CHECK(std::fabs(rec.fit.slope - (-0.5)) < 0.1);
    CHECK(rec.pass);
  }
  {
    const auto rec = experiment_pq(E, 2, 2.0, 2.0, 6, 12);
    CHECK(std::fabs(rec.fit.slope) < 0.05);
    CHECK(rec.predicted == 0.0);
  }
  {
    const auto rec = experiment_pq(E, 2, 2.0, 4.0, 6, 12);
    CHECK(std::fabs(rec.fit.slope - (-0.5)) < 0.1);
  }
  CHECK_THROWS_AS(experiment_pq(E, 3, 2.0, 3.0, 2, 12), std::invalid_argument);
  CHECK_THROWS_AS(experiment_pq(E, 3, 3.0, 2.0, 6, 12), std::invalid_argument);
}

TEST_CASE("step-train slopes track the prediction across exponent pairs") {
  const auto E = generate({CantorSpec{3, {0, 2}}, 8});
  double prev_predicted = 1e300;
  for (double q : {2.0, 3.0, 4.0, 6.0}) {
    const auto rec = experiment_pq(E, 3, 2.0, q, 6, 13);
    // prediction -d(1/p - 1/q) moves monotonically as q grows at fixed p
    CHECK(rec.predicted <= prev_predicted + 1e-12);
    prev_predicted = rec.predicted;
    CHECK(std::fabs(rec.fit.slope - rec.predicted) <= 0.15);
  }
}

TEST_CASE("thin annulus experiment on the full interval") {
  const auto E = generate({FullIntervalSpec{}, 10});
  const auto rec = experiment_knapp(E, 2, 4.0, 4.0, WindowSpec{0, 0}, 4, 9, 1e-8);
  // covering slope 1 gives predicted slope 1/2 + 1/4 - 1/4 - 1/4 = 1/4
  CHECK(std::fabs(rec.predicted - 0.25) < 0.02);
  CHECK(rec.fit.slope <= 0.35);
  CHECK(rec.pass);
}

TEST_CASE("thin annulus experiment: single point and cantor") {
  const auto point = generate({FinitePointsSpec{{1.0}}, 10});
  const auto rec = experiment_knapp(point, 3, 2.0, 4.0, WindowSpec{0, 0}, 4, 8, 1e-8);
  // N = 1 throughout: the covering term vanishes
  CHECK(rec.predicted == doctest::Approx(1.0 + 0.25 - 0.5));

  const auto cantor = generate({CantorSpec{3, {0, 2}}, 10});
  const auto rc = experiment_knapp(cantor, 2, 2.0, 4.0, WindowSpec{0, 0}, 4, 9, 1e-8);
  const double cantor_dim = std::log(2.0) / std::log(3.0);
  CHECK(std::fabs(rc.predicted - (0.5 + 0.25 - 0.5 - cantor_dim / 4)) < 0.05);
  CHECK(rc.fit.slope <= 0.2);

  CHECK_THROWS_AS(experiment_knapp(point, 3, 2.0, 1.5, WindowSpec{0, 0}, 4, 8),
                  std::invalid_argument);  // q < 2
  CHECK_THROWS_AS(experiment_knapp(point, 3, 2.0, 4.0, WindowSpec{6, 0}, 4, 8),
                  std::invalid_argument);  // window shorter than delta
}

TEST_CASE("annulus claim ratios are stable") {
  for (int d : {2, 3}) {
    const auto rep = claim_annulus(d, {4, 5, 6, 7, 8, 9, 10}, 1.0,
                                   {0.25, 0.5, 0.75, 1.0}, 0.0, 1e-9);
    CHECK(rep.min_ratio > 0.0);
    CHECK(rep.max_ratio / rep.min_ratio <= 4.0);
    CHECK(rep.pass);
  }
  CHECK_THROWS_AS(claim_annulus(2, {4}, 1.0, {0.5}, 0.2), std::invalid_argument);
}

TEST_CASE("log-weighted endpoint experiment") {
  const auto cantor = generate({CantorSpec{3, {0, 2}}, 16});
  const auto rec = experiment_stein_log(cantor, 3, 1.5, 6, 14);
  CHECK(rec.pass);
  // the profile norm stays within a factor 2 across the range
  double norm_min = 0, norm_max = 0;
  for (const auto& [k, v] : rec.extra) {
    if (k == "norm_min") norm_min = v;
    if (k == "norm_max") norm_max = v;
  }
  CHECK(norm_min > 0);
  CHECK(norm_max / norm_min <= 2.0);

  // single point in d=2: pure log scaling; triple-log regression close to 1/2
  const auto point = generate({FinitePointsSpec{{1.0}}, 16});
  const auto rp = experiment_stein_log(point, 2, 2.0, 6, 14);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < rp.scale_log2.size(); ++i) {
    const double m = -rp.scale_log2[i];
    const double delta = std::pow(2.0, -m);
    // reconstruct log2 ||M g||-lower / delta^{1/q}: measured_log2 stores
    // log2(measured/predicted) with predicted = delta^{1/q} log(1/delta)^{1/d}
    const double log2_total =
        rp.measured_log2[i] + std::log2(std::pow(std::log(1.0 / delta), 0.5));
    pts.emplace_back(std::log2(m * std::log(2.0)), log2_total);
  }
  const auto fit = fit_exponent(pts);
  CHECK(std::fabs(fit.slope - 0.5) < 0.15);

  const auto full = generate({FullIntervalSpec{}, 12});
  CHECK_THROWS_AS(experiment_stein_log(full, 2, 2.0, 6, 12), std::invalid_argument);
  CHECK_NOTHROW(experiment_stein_log(full, 2, 2.0, 6, 12, true));
}

TEST_CASE("region scan basics") {
  const auto E = generate({CantorSpec{3, {0, 2}}, 14});
  const auto scan = region_scan(E, 3, 8, {4, 12});
  REQUIRE(scan.rows.size() == 81);
  for (const auto& row : scan.rows) {
    if (row.inv_p == 0.0 && row.inv_q == 0.0) {
      CHECK_FALSE(row.excluded);  // the origin is never excluded
      CHECK(row.predicted_member);
    }
    if (row.inv_q > row.inv_p + 0.05 + 1e-12) CHECK(row.excluded);
  }

  // determinism
  const auto scan2 = region_scan(E, 3, 8, {4, 12});
  REQUIRE(scan2.rows.size() == scan.rows.size());
  for (std::size_t i = 0; i < scan.rows.size(); ++i) {
    CHECK(scan.rows[i].exponent_easy == scan2.rows[i].exponent_easy);
    CHECK(scan.rows[i].excluded == scan2.rows[i].excluded);
  }

  // exclusion is monotone in scale refinement
  const auto narrow = region_scan(E, 3, 8, {4, 10});
  for (std::size_t i = 0; i < scan.rows.size(); ++i)
    if (narrow.rows[i].excluded) CHECK(scan.rows[i].excluded);
}

TEST_CASE("experiment records round-trip through JSON") {
  const auto E = generate({CantorSpec{3, {0, 2}}, 8});
  const auto rec = experiment_pq(E, 3, 2.0, 3.0, 6, 10);
  const auto j = io::record_to_json(rec);
  const auto back = io::record_from_json(j);
  CHECK(back.id == rec.id);
  CHECK(back.scale_log2 == rec.scale_log2);
  CHECK(back.measured_log2 == rec.measured_log2);
  CHECK(back.fit.slope == rec.fit.slope);
  CHECK(back.pass == rec.pass);
}
