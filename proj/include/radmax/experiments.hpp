#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radmax/covering.hpp"
#include "radmax/dilation_set.hpp"
#include "radmax/fit.hpp"

namespace radmax {

/// One scaling experiment: per-scale measured values, the fitted exponent, the
/// predicted exponent, and a pass/fail verdict at the repo-wide tolerances.
struct ExperimentRecord {
  std::string id;
  std::vector<double> scale_log2;     // abscissae of the fit (k, or log2 delta)
  std::vector<double> measured_log2;  // log2 of the measured ratio
  ExponentFit fit;
  double predicted = 0.0;
  bool pass = false;
  std::vector<std::pair<std::string, double>> extra;  // named side values
};

/// Repo-wide verdict tolerances: slopes within 0.1, constants within factor 4.
constexpr double kSlopeTolerance = 0.1;
constexpr double kConstantFactor = 4.0;

/// Step-train scaling test of the p <= q necessary condition: the ratio
/// ||M_E f_k||_q / ||f_k||_p against the predicted 2^{-k d (1/p - 1/q)}.
/// Both norms are closed-form; the maximal side restricts to the inner annuli
/// where the averages evaluate to the step height exactly.
ExperimentRecord experiment_pq(const DilationSet& set, int d, double p, double q,
                               int k_min, int k_max);

/// Thin-annulus (radial Knapp) experiment on a window J: measures
/// ||M_E g_delta||_q / ||g_delta||_p over dyadic delta and compares the fitted
/// slope against the covering-functional prediction.
ExperimentRecord experiment_knapp(const DilationSet& set, int d, double p, double q,
                                  const WindowSpec& window, int m_min, int m_max,
                                  double tol = 1e-9);

/// Pointwise check that a sphere through the annulus picks up (delta/|x|)^{(d-1)/2}.
struct AnnulusRow {
  int m = 0;  // delta = 2^-m
  double x = 0;
  double ratio = 0;  // |A_t g_delta(x)| / (delta/x)^{(d-1)/2}
};
struct AnnulusReport {
  std::vector<AnnulusRow> rows;
  double min_ratio = 0;
  double max_ratio = 0;
  bool pass = false;  // min > 0 and max/min <= 4
};
AnnulusReport claim_annulus(int d, const std::vector<int>& delta_exponents,
                            double annulus_radius, const std::vector<double>& x_grid,
                            double c1 = 0.0, double tol = 1e-9);

/// Log-weighted endpoint experiment at p_d = d/(d-1): compares the measured
/// lower bound of ||M_E g||_q against N(E,delta)^{1/q} delta^{1/q} log(1/delta)^{1/d}.
ExperimentRecord experiment_stein_log(const DilationSet& set, int d, double q,
                                      int m_min, int m_max,
                                      bool allow_positive_measure = false);

/// Necessary-condition scan over the (1/p, 1/q) grid.
struct RegionScanRow {
  double inv_p = 0;
  double inv_q = 0;
  double exponent_easy = 0;   // covering/scaling functional growth exponent
  double exponent_knapp = 0;  // window-functional growth exponent
  bool excluded = false;
  bool predicted_member = false;
};
struct RegionScanResult {
  std::vector<RegionScanRow> rows;
  int resolution = 0;
};
/// Exclusion is sticky across scale prefixes (functionals are suprema over
/// scales), and additionally applies the exact p <= q scaling exponent.
RegionScanResult region_scan(const DilationSet& set, int d, int resolution,
                             ScaleWindow scales);

}  // namespace radmax
