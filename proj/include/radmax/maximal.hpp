#pragma once

#include <span>
#include <vector>

#include "radmax/dilation_set.hpp"
#include "radmax/radial_function.hpp"

namespace radmax {

/// Midpoint cells for the weighted measure r^{d-1} dr: nodes are cell centers
/// and each weight is the exact integral of r^{d-1} over its cell, so norms of
/// piecewise-constant profiles with edges on cell boundaries are exact.
struct RadialGrid {
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Uniform cells of width 1/cells_per_unit on [0, r_max], with the snap
  /// points inserted as extra cell boundaries.
  static RadialGrid make(double r_max, int cells_per_unit, int d,
                         std::span<const double> snap = {});
};

/// (sum_i w_i |v_i|^q)^{1/q}, the grid quadrature of ||.||_{L^q(r^{d-1}dr)}.
double weighted_norm(std::span<const double> values, const RadialGrid& grid, double q);

/// Lower bound for sup_{t in E} |A_t f|(r): the maximum over cell centers and
/// cell endpoints of E at its native depth.
double maximal_value(const DilationSet& set, const RadialFunction& f, int d, double r,
                     double tol);

/// Values of the pointwise decomposition pieces at radius r.
/// d >= 3: mp, r1, r2 (r1/r2 range over all of [1,2]); d = 2: the +- variants
/// with suprema over the set itself.
struct PieceValues {
  int d = 3;
  double mp = 0, r1 = 0, r2 = 0;
  double mp_minus = 0, mp_plus = 0;
  double r1_minus = 0, r1_plus = 0;
  double r2_minus = 0, r2_plus = 0;
  double sum() const {
    return d >= 3 ? mp + r1 + r2
                  : mp_minus + mp_plus + r1_minus + r1_plus + r2_minus + r2_plus;
  }
};

PieceValues decomposition_pieces(const DilationSet& set, const RadialFunction& f, int d,
                                 double p, double r, double tol);

struct DominationRow {
  double r = 0;
  double maximal = 0;
  PieceValues pieces;
  double ratio = 0;  // maximal / sum of pieces
};

struct DominationReport {
  double max_ratio = 0;
  double argmax_r = 0;
  long skipped = 0;  // nodes where the denominator vanished
  std::vector<DominationRow> rows;
};

/// Ratio of the maximal value to the summed decomposition pieces on every grid
/// node with a nonvanishing denominator.
DominationReport domination_check(const DilationSet& set, const RadialFunction& f,
                                  int d, double p, const RadialGrid& grid, double tol);

/// Dilation candidates used for discretized suprema over t in E.
std::vector<double> dilation_candidates(const DilationSet& set);

}  // namespace radmax
