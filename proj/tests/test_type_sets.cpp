#include <doctest.h>

#include <cmath>

#include "radmax/regions.hpp"

using namespace radmax;

namespace {
Rational R(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

bool pair_eq(const ExponentPair& v, Rational px, Rational qx) {
  return v.inv_p == px && v.inv_q == qx;
}
}  // namespace

TEST_CASE("triangle vertices") {
  const auto v31 = triangle_vertices(3, R(1));
  CHECK(pair_eq(v31[0], R(0), R(0)));
  CHECK(pair_eq(v31[1], R(2, 3), R(2, 3)));
  CHECK(pair_eq(v31[2], R(2, 3), R(2, 9)));

  const auto v2h = triangle_vertices(2, R(1, 2));
  CHECK(pair_eq(v2h[1], R(2, 3), R(2, 3)));
  CHECK(pair_eq(v2h[2], R(4, 7), R(2, 7)));

  const auto v30 = triangle_vertices(3, R(0));
  CHECK(pair_eq(v30[1], R(1), R(1)));
  CHECK(pair_eq(v30[2], R(3, 4), R(1, 4)));

  CHECK_THROWS_AS(triangle_vertices(1, R(0)), std::invalid_argument);
  CHECK_THROWS_AS(triangle_vertices(3, R(3, 2)), std::invalid_argument);
}

TEST_CASE("general quadrangle vertices") {
  const auto q = quadrangle_vertices_general(2, R(1), R(1));
  CHECK(pair_eq(q[2], R(1, 2), R(1, 2)));
  CHECK(pair_eq(q[3], R(2, 5), R(1, 5)));

  const auto deg = quadrangle_vertices_general(3, R(0), R(0));
  CHECK(pair_eq(deg[2], R(3, 4), R(1, 4)));
  CHECK(pair_eq(deg[3], R(3, 4), R(1, 4)));  // degenerates onto the triangle

  const auto half = quadrangle_vertices_general(2, R(1, 2), R(1, 2));
  CHECK(pair_eq(half[2], R(3, 5), R(2, 5)));
  CHECK(pair_eq(half[3], R(1, 2), R(1, 4)));
}

TEST_CASE("radial quadrangle vertices") {
  const auto q = quadrangle_vertices_radial(R(1, 2), R(1));
  CHECK(pair_eq(q[2], R(1, 2), R(1, 4)));
  CHECK(pair_eq(q[3], R(7, 12), R(1, 3)));

  const auto q0 = quadrangle_vertices_radial(R(0), R(1));
  CHECK(pair_eq(q0[2], R(1, 2), R(1, 4)));
  CHECK(pair_eq(q0[3], R(2, 3), R(1, 3)));

  const auto q9 = quadrangle_vertices_radial(R(9, 10), R(1));
  CHECK(pair_eq(q9[2], R(1, 2), R(1, 4)));

  CHECK_THROWS_AS(quadrangle_vertices_radial(R(1, 2), R(7, 10)), CaseError);
}

TEST_CASE("vertices sit on their defining lines") {
  for (int d : {2, 3, 4}) {
    for (auto beta : {R(0), R(1, 3), R(1, 2), R(1)}) {
      const auto v = triangle_vertices(d, beta);
      // P2 on 1/p = 1/q
      CHECK(v[1].inv_p == v[1].inv_q);
      // P3rad on the scaling line 1/q = 1/(pd) and on the covering line
      CHECK(v[2].inv_p == R(d) * v[2].inv_q);
      const Rational lhs = (R(1) - beta) * v[2].inv_q + R(d - 1);
      CHECK(lhs == R(d) * v[2].inv_p);
    }
  }
}

TEST_CASE("degeneration at 2*gamma - beta = 1") {
  // At gamma = (1+beta)/2 both radial quadrangle vertices collapse onto the
  // triangle vertex; verified symbolically from the closed formulas.
  for (auto beta : {R(1, 5), R(1, 2), R(3, 4)}) {
    const Rational gamma = (R(1) + beta) / R(2);
    const auto tri = triangle_vertices(2, beta);
    // P4rad = (1/(1+gamma), 1/(2(1+gamma)))
    const Rational x4 = R(1) / (R(1) + gamma);
    const Rational y4 = R(1) / (R(2) * (R(1) + gamma));
    CHECK(x4 == tri[2].inv_p);
    CHECK(y4 == tri[2].inv_q);
    // P5rad formula at the degenerate gamma
    const Rational r = beta / gamma;
    const Rational u = R(1) - beta;
    const Rational w = R(2) * (R(1) - r);
    const Rational x5 = (u * (R(2) - r) + w) / (R(2) * (u + w));
    const Rational y5 = (R(1) - r) / (u + w);
    CHECK(x5 == tri[2].inv_p);
    CHECK(y5 == tri[2].inv_q);
  }
}

TEST_CASE("membership in the d=2 closure regions") {
  // full interval: nu#(alpha) = max(1, alpha)
  const auto full = TypeRegion::closure2(R(1), R(1));
  CHECK(region_membership(full, {R(1, 3), R(1, 4)}) == Membership::interior);
  CHECK(region_membership(full, {R(0), R(0)}) == Membership::boundary);
  CHECK(region_membership(full, {R(1, 2), R(1, 4)}) == Membership::boundary);
  CHECK(region_membership(full, {R(3, 5), R(1, 3)}) == Membership::exterior);

  // beta=1/2, gamma=1: the triangle vertex P3rad violates the window constraint
  const auto reg = TypeRegion::closure2(R(1, 2), R(1));
  CHECK(region_membership(reg, {R(4, 7), R(2, 7)}) == Membership::exterior);
  // and both replacement vertices are on the boundary
  CHECK(region_membership(reg, {R(1, 2), R(1, 4)}) == Membership::boundary);
  CHECK(region_membership(reg, {R(7, 12), R(1, 3)}) == Membership::boundary);

  const auto tri = TypeRegion::triangle(3, R(1));
  CHECK(region_membership(tri, {R(0), R(0)}) == Membership::boundary);
  CHECK(region_membership(tri, {R(1, 2), R(1, 3)}) == Membership::interior);
  CHECK(region_membership(tri, {R(9, 10), R(1, 10)}) == Membership::exterior);
}

TEST_CASE("window constraint with minimal nu reduces to q <= 2p") {
  const auto minimal = TypeRegion::closure2(R(0), R(0));  // nu#(alpha) = max(alpha, 0)
  for (int qn = 2; qn <= 8; ++qn) {
    for (int pd = 1; pd <= 8; ++pd) {
      const Rational y(1, qn);          // 1/q with q = qn >= 2
      const Rational x(pd, 8);          // 1/p grid
      if (x > R(1)) continue;
      const Rational alpha = R(qn, 2) - R(1);
      const Rational nu = minimal.nu_sharp_exact(alpha);
      const Rational constraint = y * nu + x - y;
      const bool holds = constraint <= R(1, 2);
      const bool q_le_2p = x <= R(2) * y;  // q <= 2p in (1/p, 1/q) coordinates
      CHECK(holds == q_le_2p);
    }
  }
}

TEST_CASE("sandwich: radial quadrangle inside closure inside triangle") {
  const std::pair<Rational, Rational> params[] = {
      {R(1, 2), R(1)}, {R(1, 4), R(7, 10)}, {R(1, 10), R(3, 5)}, {R(3, 4), R(19, 20)}};
  for (const auto& [beta, gamma] : params) {
    REQUIRE(R(2) * gamma - beta > R(1));
    const auto closure = TypeRegion::closure2(beta, gamma);
    const auto triangle = TypeRegion::triangle(2, beta);
    for (const auto& v : quadrangle_vertices_radial(beta, gamma)) {
      CHECK(region_membership(closure, v) != Membership::exterior);
    }
    const int res = 200;
    for (int i = 0; i <= res; ++i) {
      for (int j = 0; j <= res; ++j) {
        const ExponentPair pt{R(i, res), R(j, res)};
        if (region_membership(closure, pt) != Membership::exterior)
          CHECK(region_membership(triangle, pt) != Membership::exterior);
      }
    }
  }
}

TEST_CASE("boundary polyline: triangle") {
  const auto tri = TypeRegion::triangle(3, R(0));
  const auto pts = closure_boundary(tri, 100);
  REQUIRE(pts.size() > 10);
  auto contains = [&](double x, double y) {
    for (const auto& p : pts)
      if (std::fabs(p.inv_p - x) < 1e-9 && std::fabs(p.inv_q - y) < 1e-9) return true;
    return false;
  };
  CHECK(contains(0, 0));
  CHECK(contains(1, 1));
  CHECK(contains(0.75, 0.25));
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double gap = std::hypot(pts[i + 1].inv_p - pts[i].inv_p,
                                  pts[i + 1].inv_q - pts[i].inv_q);
    CHECK(gap <= 1.0 / 100 + 1e-9);
  }
  for (const auto& p : pts) {
    const ExponentPair pt{Rational::parse(std::to_string(p.inv_p)),
                          Rational::parse(std::to_string(p.inv_q))};
    CHECK(region_membership(tri, pt, 1e-2) == Membership::boundary);
  }
  CHECK_THROWS_AS(closure_boundary(tri, 4), std::invalid_argument);
}

TEST_CASE("boundary polyline: d=2 closures") {
  const auto full = TypeRegion::closure2(R(1), R(1));
  const auto pts = closure_boundary(full, 400);
  auto contains = [&](double x, double y) {
    for (const auto& p : pts)
      if (std::fabs(p.inv_p - x) < 2e-3 && std::fabs(p.inv_q - y) < 2e-3) return true;
    return false;
  };
  CHECK(contains(0.5, 0.5));
  CHECK(contains(0.5, 0.25));

  const auto reg = TypeRegion::closure2(R(1, 2), R(1));
  const auto pts2 = closure_boundary(reg, 400);
  auto contains2 = [&](double x, double y) {
    for (const auto& p : pts2)
      if (std::fabs(p.inv_p - x) < 2e-3 && std::fabs(p.inv_q - y) < 2e-3) return true;
    return false;
  };
  CHECK(contains2(0.5, 0.25));             // P4rad
  CHECK(contains2(7.0 / 12, 1.0 / 3));     // P5rad
  CHECK(contains2(2.0 / 3, 2.0 / 3));      // P2
  // every emitted point classifies as boundary at the resolution tolerance
  for (const auto& p : pts2) {
    const ExponentPair pt{Rational::parse(std::to_string(p.inv_p)),
                          Rational::parse(std::to_string(p.inv_q))};
    CHECK(region_membership(reg, pt, 1.0 / 200) == Membership::boundary);
  }
}

TEST_CASE("endpoint classification follows the case table") {
  const double cantor_dim = std::log(2.0) / std::log(3.0);

  AnalyticProfile cantor;
  cantor.beta = cantor.gamma = cantor_dim;
  cantor.sup_delta_beta_N_finite = true;
  cantor.sup_delta_log_N_finite = true;
  cantor.power_law = true;

  // d=3: the covering supremum is finite, so the whole triangle is included.
  {
    const auto v = triangle_vertices(3, Rational::parse("0.6309297535714574"));
    const auto res = endpoint_classify(cantor, 3, v[2]);
    CHECK(res.verdict == EndpointVerdict::in_T);
    CHECK(res.case_id == "triangle-complete");
  }
  // d=2 with 2*gamma - beta < 1: same conclusion at the triangle vertex.
  {
    const auto v = triangle_vertices(2, Rational::parse("0.6309297535714574"));
    const auto res = endpoint_classify(cantor, 2, v[2]);
    CHECK(res.verdict == EndpointVerdict::in_T);
  }

  AnalyticProfile full;
  full.beta = full.gamma = 1.0;
  full.sup_delta_beta_N_finite = true;
  full.sup_delta_log_N_finite = false;
  full.power_law = true;

  // d=2, full interval: p = 2 is excluded, p > 2 with q in [p, 2p] included.
  CHECK(endpoint_classify(full, 2, {R(1, 2), R(1, 4)}).verdict ==
        EndpointVerdict::not_in_T);
  CHECK(endpoint_classify(full, 2, {R(1, 3), R(1, 4)}).verdict ==
        EndpointVerdict::in_T);
  CHECK(endpoint_classify(full, 2, {R(1, 3), R(1, 8)}).verdict ==
        EndpointVerdict::not_in_T);  // below the scaling line

  // d>=3, beta < 1, divergent covering supremum: the critical edge drops out.
  AnalyticProfile rough;
  rough.beta = 0.5;
  rough.gamma = 0.5;
  rough.sup_delta_beta_N_finite = false;
  rough.sup_delta_log_N_finite = true;
  rough.power_law = false;
  {
    const auto v = triangle_vertices(3, R(1, 2));
    CHECK(endpoint_classify(rough, 3, v[1]).verdict == EndpointVerdict::not_in_T);
    CHECK(endpoint_classify(rough, 3, v[2]).verdict == EndpointVerdict::not_in_T);
    CHECK(endpoint_classify(rough, 3, {R(1, 3), R(1, 4)}).verdict ==
          EndpointVerdict::in_T);
  }

  // d=2, 2*gamma - beta = 1 with finite supremum: the vertex stays open.
  AnalyticProfile critical;
  critical.beta = 0.5;
  critical.gamma = 0.75;
  critical.sup_delta_beta_N_finite = true;
  critical.sup_delta_log_N_finite = true;
  critical.power_law = true;
  {
    const auto v = triangle_vertices(2, R(1, 2));
    const auto res = endpoint_classify(critical, 2, v[2]);
    CHECK(res.verdict == EndpointVerdict::unresolved);
    CHECK(res.case_id == "critical-vertex-open");
    CHECK(endpoint_classify(critical, 2, {R(1, 2), R(3, 8)}).verdict ==
          EndpointVerdict::in_T);
  }

  // d=2, 2*gamma - beta > 1: quadrangle sandwich cases.
  AnalyticProfile areg;
  areg.beta = 0.5;
  areg.gamma = 1.0;
  areg.sup_delta_beta_N_finite = true;
  areg.sup_delta_log_N_finite = true;
  areg.power_law = true;
  {
    // the open scaling edge below P4rad is included
    CHECK(endpoint_classify(areg, 2, {R(1, 4), R(1, 8)}).verdict ==
          EndpointVerdict::in_T);
    // P4rad itself is not settled
    CHECK(endpoint_classify(areg, 2, {R(1, 2), R(1, 4)}).verdict ==
          EndpointVerdict::unresolved);
    // the upper segment from P2 is an open question
    const auto res = endpoint_classify(areg, 2, {R(2, 3), R(2, 3)});
    CHECK(res.verdict == EndpointVerdict::unresolved);
    CHECK(res.case_id == "upper-segment-open");
    // quadrangle interior
    CHECK(endpoint_classify(areg, 2, {R(2, 5), R(3, 10)}).verdict ==
          EndpointVerdict::in_T);
    // outside the triangle
    CHECK(endpoint_classify(areg, 2, {R(9, 10), R(1, 10)}).verdict ==
          EndpointVerdict::not_in_T);
    // between the quadrangle and the triangle: depends on the window exponent
    CHECK(endpoint_classify(areg, 2, {R(14, 25), R(29, 100)}).verdict ==
          EndpointVerdict::unresolved);
  }

  // missing metadata
  AnalyticProfile empty;
  empty.beta = 0.5;
  empty.gamma = 0.2;  // inconsistent
  CHECK(endpoint_classify(empty, 2, {R(0), R(0)}).verdict ==
        EndpointVerdict::unresolved);
}
