#include "radmax/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "radmax/quadrature.hpp"
#include "radmax/spherical.hpp"

namespace radmax {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// |integral of w(s) f(s) ds| over [lo, hi] with an inverse-square-root factor
// anchored at one endpoint (d = 2 pieces), or plain weight (d >= 3 pieces).
// singular_at_lo selects the substitution side.
double sqrt_singular_integral(const RadialFunction& f, double lo, double hi,
                              bool singular_at_lo, double tol) {
  if (!(hi > lo)) return 0.0;
  auto g = singular_at_lo
               ? std::function<double(double)>([&, lo](double u) {
                   const double s = lo + u * u;
                   return 2.0 * f(s);  // (s-lo)^{-1/2} * ds = 2 du
                 })
               : std::function<double(double)>([&, hi](double u) {
                   const double s = hi - u * u;
                   return 2.0 * f(s);
                 });
  std::vector<double> cuts;
  for (double s : f.breakpoints())
    if (s > lo && s < hi)
      cuts.push_back(std::sqrt(singular_at_lo ? s - lo : hi - s));
  const double u_hi = std::sqrt(hi - lo);
  const auto q = integrate(g, 0.0, u_hi, cuts, tol, 200000);
  return std::fabs(q.value);
}

double plain_integral(const RadialFunction& f, double lo, double hi, double weight_pow,
                      double tol) {
  if (!(hi > lo)) return 0.0;
  auto g = [&](double s) {
    return weight_pow == 0.0 ? f(s) : std::pow(s, weight_pow) * f(s);
  };
  const auto q = integrate(g, lo, hi, f.breakpoints(), tol, 200000);
  return std::fabs(q.value);
}

std::vector<double> uniform_candidates(double lo, double hi, int n) {
  std::vector<double> out;
  out.reserve(n + 1);
  for (int i = 0; i <= n; ++i)
    out.push_back(lo + (hi - lo) * static_cast<double>(i) / n);
  return out;
}

}  // namespace

RadialGrid RadialGrid::make(double r_max, int cells_per_unit, int d,
                            std::span<const double> snap) {
  if (!(r_max > 0) || cells_per_unit < 1 || d < 2)
    throw std::invalid_argument("bad radial grid parameters");
  std::vector<double> edges;
  const long n = std::lround(std::ceil(r_max * cells_per_unit));
  for (long i = 0; i <= n; ++i)
    edges.push_back(static_cast<double>(i) / cells_per_unit);
  for (double s : snap)
    if (s > 0 && s < edges.back()) edges.push_back(s);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) { return std::fabs(a - b) < 1e-13; }),
              edges.end());
  RadialGrid grid;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    grid.nodes.push_back(0.5 * (edges[i] + edges[i + 1]));
    grid.weights.push_back((ipow(edges[i + 1], d) - ipow(edges[i], d)) / d);
  }
  return grid;
}

double weighted_norm(std::span<const double> values, const RadialGrid& grid, double q) {
  if (q < 1) throw std::invalid_argument("norm exponent must satisfy q >= 1");
  if (values.size() != grid.nodes.size())
    throw std::invalid_argument("values/grid size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    sum += grid.weights[i] * std::pow(std::fabs(values[i]), q);
  return std::pow(sum, 1.0 / q);
}

std::vector<double> dilation_candidates(const DilationSet& set) {
  std::vector<double> t;
  t.reserve(set.cells().size() * 2 + 1);
  for (std::uint64_t c : set.cells()) {
    t.push_back(set.cell_left(c));
    t.push_back(set.cell_center(c));
    t.push_back(set.cell_right(c));
  }
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

double maximal_value(const DilationSet& set, const RadialFunction& f, int d, double r,
                     double tol) {
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  double best = 0.0;
  for (double t : dilation_candidates(set)) {
    // Skip dilations whose chord misses the support entirely.
    const auto [lo, hi] = f.support();
    if (r + t < lo || std::fabs(r - t) > hi) continue;
    const auto q = sphere_average(f, d, r, t, tol);
    best = std::max(best, std::fabs(q.value));
  }
  return best;
}

PieceValues decomposition_pieces(const DilationSet& set, const RadialFunction& f, int d,
                                 double p, double r, double tol) {
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("decomposition needs p in (1, inf)");
  if (!(r > 0)) throw std::invalid_argument("radius must be positive");
  PieceValues out;
  out.d = d;

  const auto candidates_E = dilation_candidates(set);
  const auto candidates_full = uniform_candidates(1.0, 2.0, 256);

  if (d >= 3) {
    // mp: sup over t in E with r/2 < t < 3r/2 of r^{1-d} |∫ s^{d-2} f(s) ds|.
    for (double t : candidates_E) {
      if (!(t > r / 2 && t < 3 * r / 2)) continue;
      const double v = plain_integral(f, std::fabs(r - t), r + t, d - 2.0, tol);
      out.mp = std::max(out.mp, std::pow(r, 1.0 - d) * v);
    }
    // r1: sup over t in [1,2], t <= r/2 of (1/t) |∫_{r-t}^{r+t} f|.
    // r2: sup over t in [1,2], t >= 3r/2 of (1/r) |∫_{t-r}^{t+r} f|.
    for (double t : candidates_full) {
      if (t <= r / 2) {
        const double v = plain_integral(f, r - t, r + t, 0.0, tol);
        out.r1 = std::max(out.r1, v / t);
      }
      if (t >= 3 * r / 2) {
        const double v = plain_integral(f, t - r, t + r, 0.0, tol);
        out.r2 = std::max(out.r2, v / r);
      }
    }
    return out;
  }

  // d == 2: all suprema over t in E, kernels carry one-sided sqrt singularities.
  for (double t : candidates_E) {
    const double a = std::fabs(r - t);
    const double b = r + t;
    if (t > r / 2 && t < 3 * r / 2) {
      // mp_minus: r^{-1} ∫ s^{1/2} (s-a)^{-1/2} f ds;  mp_plus: (b-s)^{-1/2}.
      auto weighted = [&](double s) { return std::sqrt(s) * f(s); };
      auto wf_minus = [&](double u) {
        const double s = a + u * u;
        return 2.0 * weighted(s);
      };
      auto wf_plus = [&](double u) {
        const double s = b - u * u;
        return 2.0 * weighted(s);
      };
      std::vector<double> cuts_m, cuts_p;
      for (double s : f.breakpoints()) {
        if (s > a && s < b) {
          cuts_m.push_back(std::sqrt(s - a));
          cuts_p.push_back(std::sqrt(b - s));
        }
      }
      const double u_hi = std::sqrt(b - a);
      const double vm = std::fabs(integrate(wf_minus, 0.0, u_hi, cuts_m, tol, 200000).value);
      const double vp = std::fabs(integrate(wf_plus, 0.0, u_hi, cuts_p, tol, 200000).value);
      out.mp_minus = std::max(out.mp_minus, vm / r);
      out.mp_plus = std::max(out.mp_plus, vp / r);
    }
    if (t <= r / 2) {
      const double inv = 1.0 / std::sqrt(t);
      out.r1_minus = std::max(
          out.r1_minus, inv * sqrt_singular_integral(f, r - t, r, true, tol));
      out.r1_plus = std::max(
          out.r1_plus, inv * sqrt_singular_integral(f, r, r + t, false, tol));
    }
    if (t >= 3 * r / 2) {
      const double inv = 1.0 / std::sqrt(r);
      out.r2_minus = std::max(
          out.r2_minus, inv * sqrt_singular_integral(f, t - r, t, true, tol));
      out.r2_plus = std::max(
          out.r2_plus, inv * sqrt_singular_integral(f, t, t + r, false, tol));
    }
  }
  return out;
}

DominationReport domination_check(const DilationSet& set, const RadialFunction& f,
                                  int d, double p, const RadialGrid& grid, double tol) {
  DominationReport report;
  for (double r : grid.nodes) {
    if (!(r > 0)) continue;
    DominationRow row;
    row.r = r;
    row.maximal = maximal_value(set, f, d, r, tol);
    row.pieces = decomposition_pieces(set, f, d, p, r, tol);
    const double den = row.pieces.sum();
    if (den <= 1e-12) {
      ++report.skipped;
      continue;
    }
    row.ratio = row.maximal / den;
    if (row.ratio > report.max_ratio) {
      report.max_ratio = row.ratio;
      report.argmax_r = r;
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace radmax
