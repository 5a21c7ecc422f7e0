#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "radmax/dilation_set.hpp"
#include "radmax/rational.hpp"

namespace radmax {

/// A point (1/p, 1/q) in the unit square, exact.
struct ExponentPair {
  Rational inv_p;
  Rational inv_q;
  ExponentPair(Rational p, Rational q) : inv_p(p), inv_q(q) {
    if (inv_p < Rational(0) || inv_p > Rational(1) || inv_q < Rational(0) ||
        inv_q > Rational(1))
      throw std::invalid_argument("exponent pair must lie in [0,1]^2");
  }
};

enum class RegionMode { triangle, closure_d2 };
enum class Membership { interior, boundary, exterior };

struct CaseError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Predicted type region: the dimension triangle, optionally intersected (d=2)
/// with the window-exponent constraint (1/q)·nu#(q/2−1) + 1/p − 1/q <= 1/2.
class TypeRegion {
 public:
  static TypeRegion triangle(int d, Rational beta);
  /// d=2 closure with the closed-form nu#(a) = max(a, (1−beta/gamma)a + beta)
  /// (= beta for a <= 0); exact arithmetic on rational points.
  static TypeRegion closure2(Rational beta, Rational gamma);
  /// d=2 closure with an estimator-backed nu#; finite q only, with the given
  /// asymptotic slope taking over at 1/q = 0.
  static TypeRegion closure2_estimated(double beta, std::function<double(double)> nu,
                                       double asymptotic_slope = 1.0);

  int d() const { return d_; }
  RegionMode mode() const { return mode_; }
  bool exact() const { return exact_; }
  double beta() const { return beta_d_; }
  const Rational& beta_rational() const { return beta_q_; }
  const Rational& gamma_rational() const { return gamma_q_; }

  double nu_sharp(double alpha) const;
  Rational nu_sharp_exact(const Rational& alpha) const;
  double nu_asymptotic_slope() const { return nu_slope_; }

 private:
  int d_ = 2;
  RegionMode mode_ = RegionMode::triangle;
  bool exact_ = true;
  Rational beta_q_{0};
  Rational gamma_q_{1};
  double beta_d_ = 0;
  double gamma_d_ = 1;
  std::function<double(double)> nu_fn_;
  double nu_slope_ = 1.0;
};

// Vertex formulas -------------------------------------------------------------

/// P1, P2 = ((d−1)/(d−1+β), ·), P3rad = (d(d−1)/(d²−1+β), (d−1)/(d²−1+β)).
std::array<ExponentPair, 3> triangle_vertices(int d, const Rational& beta);

/// P1, P2, P3 = ((d−β)/(d−β+1), 1/(d−β+1)), P4 = (d(d−1)/(d²+2γ−1), (d−1)/(d²+2γ−1)).
std::array<ExponentPair, 4> quadrangle_vertices_general(int d, const Rational& beta,
                                                        const Rational& gamma);

/// d=2 radial quadrangle P1, P2, P4rad, P5rad; requires 2γ−β > 1 (throws
/// CaseError otherwise, the triangle case applies).
std::array<ExponentPair, 4> quadrangle_vertices_radial(const Rational& beta,
                                                       const Rational& gamma);

// Membership and boundary -----------------------------------------------------

Membership region_membership(const TypeRegion& region, const ExponentPair& pt,
                             double tol = 1e-12);

struct BoundaryPoint {
  double inv_p = 0;
  double inv_q = 0;
  std::string active;  // constraint tight at this point
};

/// Ordered polyline tracing the region boundary; consecutive points within
/// 1/resolution, corners located to 1e-12. resolution >= 8.
std::vector<BoundaryPoint> closure_boundary(const TypeRegion& region, int resolution);

// Endpoint case table ---------------------------------------------------------

enum class EndpointVerdict { in_T, not_in_T, unresolved };

struct ClassifyResult {
  EndpointVerdict verdict = EndpointVerdict::unresolved;
  std::string case_id;
  std::string detail;
};

/// Applies the known endpoint case analysis for the radial type set from the
/// set's analytic metadata. Points the theory leaves open come back
/// `unresolved` with the reason named.
ClassifyResult endpoint_classify(const AnalyticProfile& profile, int d,
                                 const ExponentPair& pt);

}  // namespace radmax
