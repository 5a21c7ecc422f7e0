#include "radmax/fit.hpp"

#include <cmath>

namespace radmax {

ExponentFit fit_exponent(std::span<const std::pair<double, double>> points) {
  const std::size_t n = points.size();
  if (n < 2) throw FitError("need at least 2 points to fit a slope");
  double sx = 0, sy = 0;
  for (const auto& [x, y] : points) { sx += x; sy += y; }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx <= 0) throw FitError("degenerate abscissae in exponent fit");
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy <= 0) {
    fit.r_squared = 1.0;  // constant data fitted exactly
  } else {
    const double ss_res = syy - sxy * sxy / sxx;
    fit.r_squared = 1.0 - ss_res / syy;
    if (fit.r_squared < 0) fit.r_squared = 0;
    if (fit.r_squared > 1) fit.r_squared = 1;
  }
  return fit;
}

}  // namespace radmax
