#pragma once

#include <span>
#include <stdexcept>
#include <utility>

namespace radmax {

/// Least-squares line through (x, y) points; the finite-scale stand-in for
/// every limsup exponent in this project.
struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  int m_min = 0;
  int m_max = 0;
};

struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dyadic scale window [m_min, m_max] used by an estimator.
struct ScaleWindow {
  int m_min = 0;
  int m_max = 0;
};

/// Default window: drop the coarsest quarter and the finest eighth of scales.
inline ScaleWindow default_scale_window(int depth) {
  ScaleWindow w;
  w.m_min = (depth + 3) / 4;
  w.m_max = depth - (depth + 7) / 8;
  if (w.m_max - w.m_min < 2) { w.m_min = 0; w.m_max = depth; }
  return w;
}

/// Ordinary least squares. Throws FitError on fewer than 2 points or
/// degenerate abscissae; r_squared needs >= 3 points to be meaningful.
ExponentFit fit_exponent(std::span<const std::pair<double, double>> points);

}  // namespace radmax
