#include "radmax/regions.hpp"

#include <algorithm>
#include <cmath>

namespace radmax {

namespace {

const Rational kHalf{1, 2};

void validate_d(int d) {
  if (d < 2) throw std::invalid_argument("dimension d must be >= 2");
}

void validate_beta(const Rational& beta) {
  if (beta < Rational(0) || beta > Rational(1))
    throw std::invalid_argument("beta must lie in [0,1]");
}

void validate_beta_gamma(const Rational& beta, const Rational& gamma) {
  validate_beta(beta);
  if (gamma < beta || gamma > Rational(1))
    throw std::invalid_argument("need beta <= gamma <= 1");
}

}  // namespace

TypeRegion TypeRegion::triangle(int d, Rational beta) {
  validate_d(d);
  validate_beta(beta);
  TypeRegion r;
  r.d_ = d;
  r.mode_ = RegionMode::triangle;
  r.exact_ = true;
  r.beta_q_ = beta;
  r.beta_d_ = beta.to_double();
  return r;
}

TypeRegion TypeRegion::closure2(Rational beta, Rational gamma) {
  validate_beta_gamma(beta, gamma);
  TypeRegion r;
  r.d_ = 2;
  r.mode_ = RegionMode::closure_d2;
  r.exact_ = true;
  r.beta_q_ = beta;
  r.gamma_q_ = gamma;
  r.beta_d_ = beta.to_double();
  r.gamma_d_ = gamma.to_double();
  r.nu_slope_ = 1.0;
  return r;
}

TypeRegion TypeRegion::closure2_estimated(double beta, std::function<double(double)> nu,
                                          double asymptotic_slope) {
  if (beta < 0 || beta > 1) throw std::invalid_argument("beta must lie in [0,1]");
  TypeRegion r;
  r.d_ = 2;
  r.mode_ = RegionMode::closure_d2;
  r.exact_ = false;
  r.beta_d_ = beta;
  r.nu_fn_ = std::move(nu);
  r.nu_slope_ = asymptotic_slope;
  return r;
}

Rational TypeRegion::nu_sharp_exact(const Rational& alpha) const {
  if (!exact_) throw std::logic_error("nu_sharp_exact needs a closed-form region");
  if (alpha <= Rational(0)) return beta_q_;
  // ratio beta/gamma degenerates to 1 when gamma == 0 (then beta == 0 too).
  const Rational ratio =
      gamma_q_ == Rational(0) ? Rational(1) : beta_q_ / gamma_q_;
  const Rational second = (Rational(1) - ratio) * alpha + beta_q_;
  return std::max(alpha, second);
}

double TypeRegion::nu_sharp(double alpha) const {
  if (!exact_) {
    if (!nu_fn_) throw std::logic_error("estimator-backed region without a nu handle");
    return nu_fn_(alpha);
  }
  if (alpha <= 0) return beta_d_;
  const double ratio = gamma_d_ == 0 ? 1.0 : beta_d_ / gamma_d_;
  return std::max(alpha, (1.0 - ratio) * alpha + beta_d_);
}

std::array<ExponentPair, 3> triangle_vertices(int d, const Rational& beta) {
  validate_d(d);
  validate_beta(beta);
  const Rational dm1(d - 1);
  const Rational p2 = dm1 / (dm1 + beta);
  const Rational den3 = Rational(d * d - 1) + beta;
  return {ExponentPair{Rational(0), Rational(0)}, ExponentPair{p2, p2},
          ExponentPair{Rational(static_cast<std::int64_t>(d) * (d - 1)) / den3,
                       dm1 / den3}};
}

std::array<ExponentPair, 4> quadrangle_vertices_general(int d, const Rational& beta,
                                                        const Rational& gamma) {
  validate_d(d);
  validate_beta_gamma(beta, gamma);
  const Rational dm1(d - 1);
  const Rational p2 = dm1 / (dm1 + beta);
  const Rational den3 = Rational(d) - beta + Rational(1);
  const Rational den4 = Rational(d * d - 1) + Rational(2) * gamma;
  return {ExponentPair{Rational(0), Rational(0)}, ExponentPair{p2, p2},
          ExponentPair{(Rational(d) - beta) / den3, Rational(1) / den3},
          ExponentPair{Rational(static_cast<std::int64_t>(d) * (d - 1)) / den4,
                       dm1 / den4}};
}

std::array<ExponentPair, 4> quadrangle_vertices_radial(const Rational& beta,
                                                       const Rational& gamma) {
  validate_beta_gamma(beta, gamma);
  if (!(Rational(2) * gamma - beta > Rational(1)))
    throw CaseError("2*gamma - beta <= 1: the region is the full triangle");
  const Rational one(1);
  const Rational p2 = one / (one + beta);
  const Rational den4 = Rational(2) * (one + gamma);
  // gamma > 1/2 here, so gamma > 0 and the ratio is well-defined.
  const Rational r = beta / gamma;
  const Rational u = one - beta;            // 1 - beta
  const Rational v = Rational(2) * (one - r);  // 2(1 - beta/gamma)
  const Rational den5 = u + v;
  const Rational x5 = (u * (Rational(2) - r) + v) / (Rational(2) * den5);
  const Rational y5 = (one - r) / den5;
  return {ExponentPair{Rational(0), Rational(0)}, ExponentPair{p2, p2},
          ExponentPair{one / (one + gamma), one / den4}, ExponentPair{x5, y5}};
}

// Membership ------------------------------------------------------------------

namespace {

struct Margins {
  std::vector<std::pair<std::string, double>> values;  // >= 0 inside
};

Margins region_margins(const TypeRegion& R, double x, double y) {
  Margins m;
  const int d = R.d();
  m.values.emplace_back("p_leq_q", x - y);
  m.values.emplace_back("scaling", d * y - x);
  m.values.emplace_back("minkowski", (1.0 - R.beta()) * y + (d - 1) - d * x);
  if (R.mode() == RegionMode::closure_d2) {
    double value;
    if (y <= 0) {
      value = 0.5 * R.nu_asymptotic_slope() + x;
    } else {
      value = y * R.nu_sharp(0.5 / y - 1.0) + x - y;
    }
    m.values.emplace_back("window_exponent", 0.5 - value);
  }
  return m;
}

Membership classify_margins(const Margins& m, double tol) {
  bool boundary = false;
  for (const auto& [name, g] : m.values) {
    if (g < -tol) return Membership::exterior;
    if (g <= tol) boundary = true;
  }
  return boundary ? Membership::boundary : Membership::interior;
}

Membership membership_exact(const TypeRegion& R, const ExponentPair& pt) {
  const Rational x = pt.inv_p, y = pt.inv_q;
  const int d = R.d();
  std::vector<Rational> gs;
  gs.push_back(x - y);
  gs.push_back(Rational(d) * y - x);
  gs.push_back((Rational(1) - R.beta_rational()) * y + Rational(d - 1) -
               Rational(d) * x);
  if (R.mode() == RegionMode::closure_d2) {
    if (y == Rational(0)) {
      gs.push_back(-x);  // limit value s/2 + x with slope s = 1
    } else {
      const Rational alpha = kHalf / y - Rational(1);
      gs.push_back(kHalf - (y * R.nu_sharp_exact(alpha) + x - y));
    }
  }
  bool boundary = false;
  for (const auto& g : gs) {
    if (g < Rational(0)) return Membership::exterior;
    if (g == Rational(0)) boundary = true;
  }
  return boundary ? Membership::boundary : Membership::interior;
}

}  // namespace

Membership region_membership(const TypeRegion& region, const ExponentPair& pt,
                             double tol) {
  if (region.mode() == RegionMode::closure_d2 && region.d() != 2)
    throw std::invalid_argument("closure mode requires d = 2");
  if (region.exact() && tol <= 1e-12) return membership_exact(region, pt);
  return classify_margins(
      region_margins(region, pt.inv_p.to_double(), pt.inv_q.to_double()), tol);
}

// Boundary tracing ------------------------------------------------------------

namespace {

struct RightEdge {
  double x;
  std::string active;
};

// Right boundary x(y) of the region at height y = 1/q.
RightEdge right_edge(const TypeRegion& R, double y) {
  const int d = R.d();
  RightEdge e{d * y, "scaling"};
  const double mink = ((d - 1) + (1.0 - R.beta()) * y) / d;
  if (mink < e.x) e = {mink, "minkowski"};
  if (R.mode() == RegionMode::closure_d2 && y > 0) {
    const double phi = 0.5 + y - y * R.nu_sharp(0.5 / y - 1.0);
    if (phi < e.x) e = {phi, "window_exponent"};
  }
  return e;
}

void emit_segment(std::vector<BoundaryPoint>& out, double x0, double y0, double x1,
                  double y1, const std::string& active, int resolution) {
  const double len = std::hypot(x1 - x0, y1 - y0);
  const int steps = std::max(1, static_cast<int>(std::ceil(len * resolution)));
  for (int i = 1; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    out.push_back({x0 + t * (x1 - x0), y0 + t * (y1 - y0), active});
  }
}

}  // namespace

std::vector<BoundaryPoint> closure_boundary(const TypeRegion& region, int resolution) {
  if (resolution < 8) throw std::invalid_argument("resolution must be >= 8");
  std::vector<BoundaryPoint> out;

  if (region.mode() == RegionMode::triangle) {
    const auto v = triangle_vertices(region.d(), region.beta_rational());
    const double x1 = v[1].inv_p.to_double(), y1 = v[1].inv_q.to_double();
    const double x2 = v[2].inv_p.to_double(), y2 = v[2].inv_q.to_double();
    out.push_back({0.0, 0.0, "p_leq_q"});
    emit_segment(out, 0, 0, x1, y1, "p_leq_q", resolution);
    emit_segment(out, x1, y1, x2, y2, "minkowski", resolution);
    emit_segment(out, x2, y2, 0, 0, "scaling", resolution);
    out.pop_back();  // do not repeat the origin
    return out;
  }

  // Convex closure region: diagonal up to the apex, then the right boundary
  // x = min(scaling, minkowski, window curve) back down to the origin.
  const double y_apex = [&] {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (right_edge(region, mid).x >= mid ? lo : hi) = mid;
    }
    return lo;
  }();

  out.push_back({0.0, 0.0, "p_leq_q"});
  emit_segment(out, 0, 0, y_apex, y_apex, "p_leq_q", resolution);

  const int steps = std::max(resolution * 4, 64);
  double y_prev = y_apex;
  RightEdge e_prev = right_edge(region, y_prev);
  for (int i = 1; i <= steps; ++i) {
    const double y = y_apex * (1.0 - static_cast<double>(i) / steps);
    RightEdge e = right_edge(region, y);
    if (e.active != e_prev.active) {
      // Locate the corner where the active constraint changes.
      double lo = y, hi = y_prev;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (right_edge(region, mid).active == e_prev.active) hi = mid; else lo = mid;
      }
      const double yc = 0.5 * (lo + hi);
      out.push_back({right_edge(region, yc).x, yc, e_prev.active + "|" + e.active});
    }
    out.push_back({e.x, y, e.active});
    y_prev = y;
    e_prev = e;
  }
  if (!out.empty() && std::hypot(out.back().inv_p, out.back().inv_q) < 1e-15)
    out.pop_back();
  return out;
}

// Endpoint case table ---------------------------------------------------------

namespace {

constexpr double kTol = 1e-12;

struct Pt {
  double x, y;
};

bool close(const Pt& a, const Pt& b) {
  return std::fabs(a.x - b.x) <= 1e-9 && std::fabs(a.y - b.y) <= 1e-9;
}

bool on_segment(const Pt& p, const Pt& a, const Pt& b, bool include_a, bool include_b) {
  const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
  if (std::fabs(cross) > 1e-9) return false;
  const double dot = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y);
  const double len2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
  if (dot < -1e-9 || dot > len2 + 1e-9) return false;
  if (!include_a && close(p, a)) return false;
  if (!include_b && close(p, b)) return false;
  return true;
}

ClassifyResult verdict(EndpointVerdict v, std::string id, std::string detail) {
  return {v, std::move(id), std::move(detail)};
}

}  // namespace

ClassifyResult endpoint_classify(const AnalyticProfile& profile, int d,
                                 const ExponentPair& pt) {
  validate_d(d);
  const double beta = profile.beta;
  const double gamma = profile.gamma;
  if (beta < 0 || beta > 1 || gamma < beta || gamma > 1)
    return verdict(EndpointVerdict::unresolved, "missing-metadata",
                   "profile lacks consistent beta/gamma");

  const Pt p{pt.inv_p.to_double(), pt.inv_q.to_double()};

  // Triangle membership first: outside it, the covering and scaling lower
  // bounds rule the operator out.
  const double g1 = p.x - p.y;
  const double g2 = d * p.y - p.x;
  const double g3 = (1.0 - beta) * p.y + (d - 1) - d * p.x;
  if (g1 < -kTol || g2 < -kTol || g3 < -kTol)
    return verdict(EndpointVerdict::not_in_T, "outside-dimension-triangle",
                   "fails a scaling or covering necessary condition");

  const Pt P1{0, 0};
  const Pt P2{(d - 1.0) / (d - 1.0 + beta), (d - 1.0) / (d - 1.0 + beta)};
  const Pt P3rad{d * (d - 1.0) / (d * d - 1.0 + beta), (d - 1.0) / (d * d - 1.0 + beta)};

  if (d >= 3) {
    if (beta < 1.0 - kTol) {
      if (profile.sup_delta_beta_N_finite)
        return verdict(EndpointVerdict::in_T, "triangle-complete",
                       "bounded delta^beta covering supremum fills the triangle");
      if (on_segment(p, P2, P3rad, true, true))
        return verdict(EndpointVerdict::not_in_T, "critical-segment-excluded",
                       "divergent delta^beta covering supremum excludes this edge");
      return verdict(EndpointVerdict::in_T, "triangle-minus-segment",
                     "inside the triangle away from the critical edge");
    }
    // beta == 1: everything hinges on 1/p against (d-1)/d.
    if (p.x < (d - 1.0) / d - kTol)
      return verdict(EndpointVerdict::in_T, "subcritical-p",
                     "1/p below the critical value (d-1)/d");
    if (profile.power_law)
      return verdict(EndpointVerdict::not_in_T, "log-endpoint-divergent",
                     "power-law covering makes the log-weighted supremum diverge");
    if (!profile.sup_delta_beta_N_finite)
      return verdict(EndpointVerdict::not_in_T, "log-endpoint-divergent",
                     "unbounded delta*N already diverges, so the log-weighted "
                     "supremum does too");
    return verdict(EndpointVerdict::unresolved, "log-endpoint-unknown",
                   "metadata does not determine the q-dependent log condition");
  }

  // d == 2. gamma is read as the Assouad dimension here.
  const double two_gb = 2.0 * gamma - beta;

  if (beta >= 1.0 - kTol) {
    if (!profile.sup_delta_log_N_finite) {
      if (p.x < 0.5 - kTol)
        return verdict(EndpointVerdict::in_T, "log-critical-interior",
                       "p > 2 with q between p and 2p");
      return verdict(EndpointVerdict::not_in_T, "log-critical-line",
                     "p = 2 is excluded when the log-weighted supremum diverges");
    }
    if (p.x < 0.5 - kTol)
      return verdict(EndpointVerdict::in_T, "subcritical-p",
                     "p > 2 bounds hold for every dilation set");
    return verdict(EndpointVerdict::unresolved, "log-endpoint-unknown",
                   "p = 2 membership needs the log-weighted supremum");
  }

  if (two_gb < 1.0 - kTol) {
    if (profile.sup_delta_beta_N_finite)
      return verdict(EndpointVerdict::in_T, "triangle-complete",
                     "small Assouad dimension and bounded covering supremum");
    if (on_segment(p, P2, P3rad, true, true))
      return verdict(EndpointVerdict::not_in_T, "critical-segment-excluded",
                     "divergent delta^beta covering supremum excludes this edge");
    if (on_segment(p, P1, P2, true, false))
      return verdict(EndpointVerdict::in_T, "diagonal-segment",
                     "the diagonal below the critical vertex is always included");
    if (g1 > kTol && g2 > kTol && g3 > kTol)
      return verdict(EndpointVerdict::in_T, "closure-interior",
                     "interior of the closure is included by convexity");
    return verdict(EndpointVerdict::unresolved, "lower-edge-unknown",
                   "the open lower edge is not settled when the covering "
                   "supremum diverges");
  }

  if (std::fabs(two_gb - 1.0) <= kTol) {
    if (profile.sup_delta_beta_N_finite) {
      if (close(p, P3rad))
        return verdict(EndpointVerdict::unresolved, "critical-vertex-open",
                       "membership at the critical vertex is an open question "
                       "when 2*gamma - beta = 1");
      return verdict(EndpointVerdict::in_T, "triangle-minus-vertex",
                     "everything but the critical vertex is included");
    }
    if (on_segment(p, P2, P3rad, true, true))
      return verdict(EndpointVerdict::not_in_T, "critical-segment-excluded",
                     "divergent delta^beta covering supremum excludes this edge");
    return verdict(EndpointVerdict::in_T, "triangle-minus-segment",
                   "included away from the excluded critical edge");
  }

  // two_gb > 1: the radial quadrangle sandwich applies.
  const double r = beta / gamma;
  const Pt P4rad{1.0 / (1.0 + gamma), 0.5 / (1.0 + gamma)};
  const double den5 = (1.0 - beta) + 2.0 * (1.0 - r);
  const Pt P5rad{((1.0 - beta) * (2.0 - r) + 2.0 * (1.0 - r)) / (2.0 * den5),
                 (1.0 - r) / den5};

  if (on_segment(p, P1, P2, true, false))
    return verdict(EndpointVerdict::in_T, "diagonal-segment",
                   "the diagonal below the critical vertex is always included");
  if (!profile.sup_delta_beta_N_finite && on_segment(p, P2, P3rad, true, true))
    return verdict(EndpointVerdict::not_in_T, "critical-segment-excluded",
                   "divergent delta^beta covering supremum excludes this edge");
  if (profile.sup_delta_beta_N_finite && on_segment(p, P2, P5rad, true, false))
    return verdict(EndpointVerdict::unresolved, "upper-segment-open",
                   "full membership of this segment is an open question");
  if (on_segment(p, P1, P4rad, true, false))
    return verdict(EndpointVerdict::in_T, "lower-edge-segment",
                   "the scaling edge below the quadrangle vertex is included");
  if (close(p, P4rad))
    return verdict(EndpointVerdict::unresolved, "lower-edge-endpoint-open",
                   "the quadrangle vertex itself is not settled");

  // Strict interior of the radial quadrangle P1 -> P2 -> P5rad -> P4rad:
  // included by convexity of the type set.
  auto side = [&](const Pt& a, const Pt& b) {
    return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
  };
  const double s1 = side(P1, P2), s2 = side(P2, P5rad), s3 = side(P5rad, P4rad),
               s4 = side(P4rad, P1);
  const bool inside_ccw = s1 > 1e-9 && s2 > 1e-9 && s3 > 1e-9 && s4 > 1e-9;
  const bool inside_cw = s1 < -1e-9 && s2 < -1e-9 && s3 < -1e-9 && s4 < -1e-9;
  if (inside_ccw || inside_cw)
    return verdict(EndpointVerdict::in_T, "quadrangle-interior",
                   "interior of the guaranteed quadrangle");

  return verdict(EndpointVerdict::unresolved, "needs-window-exponent",
                 "membership here depends on the window covering exponent, "
                 "which the metadata does not pin down");
}

}  // namespace radmax
