#include "radmax/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "radmax/rng.hpp"

namespace radmax {

namespace {

void validate_dt(int d, double t) {
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  if (!(t > 0)) throw std::invalid_argument("dilation t must be positive");
}

// Integrates c * K_t(r, .) * f over [|r-t|, r+t] clipped to f's support.
// Both halves use a square-root substitution anchored at the endpoint, which
// removes the d = 2 singularities exactly and smooths the square-root kinks
// in higher dimensions.
QuadratureResult kernel_integral(const RadialFunction& f, int d, double r, double t,
                                 double coeff, double tol, long max_evals) {
  const double a = std::fabs(r - t);
  const double b = r + t;
  const auto [supp_lo, supp_hi] = f.support();
  const double lo = std::max(a, supp_lo);
  const double hi = std::min(b, supp_hi);
  QuadratureResult out;
  if (!(hi > lo)) return out;

  const double inv4rt = 1.0 / (4.0 * r * t);
  const double mid = 0.5 * (a + b);

  // Left half: s = a + u^2. sqrt(s^2 - a^2) = u * sqrt(s + a), so the
  // integrand carries an explicit u^{d-2} factor and is smooth in u.
  auto left = [&](double u) {
    const double s = a + u * u;
    const double base = std::sqrt((b - s) * (b + s)) * std::sqrt(s + a) * inv4rt;
    return 2.0 * coeff * std::pow(base, d - 3) * std::pow(u, d - 2) * s * inv4rt *
           f(s);
  };
  // Right half: s = b - u^2, sqrt(b^2 - s^2) = u * sqrt(b + s).
  auto right = [&](double u) {
    const double s = b - u * u;
    const double base = std::sqrt((s - a) * (s + a)) * std::sqrt(b + s) * inv4rt;
    return 2.0 * coeff * std::pow(base, d - 3) * std::pow(u, d - 2) * s * inv4rt *
           f(s);
  };

  long budget = max_evals / 2;
  const double split = std::clamp(mid, lo, hi);

  if (split > lo) {
    const double u_lo = std::sqrt(lo - a);
    const double u_hi = std::sqrt(split - a);
    std::vector<double> cuts;
    for (double s : f.breakpoints())
      if (s > lo && s < split) cuts.push_back(std::sqrt(s - a));
    const auto q = integrate(left, u_lo, u_hi, cuts, tol / 2, budget);
    out.value += q.value;
    out.abs_error_estimate += q.abs_error_estimate;
    out.evaluations += q.evaluations;
  }
  if (hi > split) {
    const double u_lo = std::sqrt(b - hi);
    const double u_hi = std::sqrt(b - split);
    std::vector<double> cuts;
    for (double s : f.breakpoints())
      if (s > split && s < hi) cuts.push_back(std::sqrt(b - s));
    const auto q = integrate(right, u_lo, u_hi, cuts, tol / 2, budget);
    out.value += q.value;
    out.abs_error_estimate += q.abs_error_estimate;
    out.evaluations += q.evaluations;
  }
  return out;
}

std::map<int, double>& calibration_cache() {
  static std::map<int, double> cache;
  return cache;
}
std::mutex calibration_mutex;

}  // namespace

double kernel(int d, double t, double r, double s) {
  validate_dt(d, t);
  if (!(r >= 0)) throw std::invalid_argument("radius r must be nonnegative");
  const double a = std::fabs(r - t);
  const double b = r + t;
  if (!(s > a && s < b))
    throw std::domain_error("kernel argument s must lie in (|r-t|, r+t)");
  const double inv4rt = 1.0 / (4.0 * r * t);
  const double base =
      std::sqrt((b - s) * (b + s)) * std::sqrt((s - a) * (s + a)) * inv4rt;
  return std::pow(base, d - 3) * s * inv4rt;
}

double calibration_constant(int d) {
  if (d < 2 || d > 64) throw std::invalid_argument("dimension out of range");
  std::lock_guard<std::mutex> lock(calibration_mutex);
  auto& cache = calibration_cache();
  if (auto it = cache.find(d); it != cache.end()) return it->second;
  const RadialFunction one = RadialFunction::indicator(0.0, 8.0);
  const auto q = kernel_integral(one, d, 1.0, 1.0, 1.0, 1e-13, 2000000);
  const double c = 1.0 / q.value;
  cache.emplace(d, c);
  return c;
}

QuadratureResult sphere_average(const RadialFunction& f, int d, double r, double t,
                                double tol, long max_evals) {
  validate_dt(d, t);
  if (!(r >= 0)) throw std::invalid_argument("radius r must be nonnegative");
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  if (r == 0.0) return {f(t), 0.0, 0};  // the average over the radius-t sphere
  return kernel_integral(f, d, r, t, calibration_constant(d), tol, max_evals);
}

std::pair<double, double> sphere_average_mc(const RadialFunction& f, int d, double r,
                                            double t, long samples,
                                            std::uint64_t seed) {
  validate_dt(d, t);
  if (samples < 1000) throw std::invalid_argument("need at least 1000 samples");
  SplitMix64 rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  std::vector<double> g(d);
  for (long i = 0; i < samples; ++i) {
    double norm_sq = 0.0;
    do {
      norm_sq = 0.0;
      for (int j = 0; j < d; ++j) {
        g[j] = rng.normal();
        norm_sq += g[j] * g[j];
      }
    } while (norm_sq == 0.0);
    const double y1 = g[0] / std::sqrt(norm_sq);
    const double dist = std::sqrt(std::max(r * r - 2.0 * r * t * y1 + t * t, 0.0));
    const double v = f(dist);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / samples;
  const double var = std::max(sum_sq / samples - mean * mean, 0.0);
  return {mean, std::sqrt(var / samples)};
}

}  // namespace radmax
