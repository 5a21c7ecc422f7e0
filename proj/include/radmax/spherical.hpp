#pragma once

#include <cstdint>
#include <utility>

#include "radmax/quadrature.hpp"
#include "radmax/radial_function.hpp"

namespace radmax {

/// 1-D kernel of the spherical average acting on radial profiles:
/// K_t(r,s) = (sqrt((r+t)^2-s^2) * sqrt(s^2-(r-t)^2) / (4rt))^(d-3) * s/(4rt),
/// defined for |r-t| < s < r+t.
double kernel(int d, double t, double r, double s);

/// Normalization constant c_d fixed by A_t 1 = 1 at the reference (r,t)=(1,1);
/// cached per dimension.
double calibration_constant(int d);

/// A_t f(x) for radial f and |x| = r, via the kernel representation with
/// endpoint singularities removed by the substitution s = a + u^2 (left) and
/// s = b - u^2 (right). r = 0 returns f0(t) exactly.
QuadratureResult sphere_average(const RadialFunction& f, int d, double r, double t,
                                double tol, long max_evals = 400000);

/// Monte Carlo oracle: mean of f(x - t*y) over uniform y on S^{d-1} with
/// x = (r, 0, ..., 0); returns (mean, standard error). Deterministic per seed.
std::pair<double, double> sphere_average_mc(const RadialFunction& f, int d, double r,
                                            double t, long samples,
                                            std::uint64_t seed);

}  // namespace radmax
