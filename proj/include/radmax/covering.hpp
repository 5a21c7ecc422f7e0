#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "radmax/dilation_set.hpp"
#include "radmax/fit.hpp"

namespace radmax {

/// Window covering counts of a DilationSet over all dyadic (k, m) pairs:
/// counts(k, m) = sup over level-k dyadic windows J of N(E ∩ J, 2^-m),
/// computed exactly from the cell list. counts(0, m) is the global N(E, 2^-m).
class CoveringProfile {
 public:
  explicit CoveringProfile(const DilationSet& set, int threads = 0);

  /// Synthetic profile from explicit rows (rows[m][k], 0 <= k <= m); used to
  /// drive the estimators against closed-form window exponents.
  CoveringProfile(int depth, std::vector<std::vector<std::uint64_t>> rows);

  int depth() const { return depth_; }
  std::uint64_t count(int k, int m) const;
  std::uint64_t global_count(int m) const { return count(0, m); }

 private:
  int depth_;
  std::vector<std::vector<std::uint64_t>> rows_;  // rows_[m][k], 0 <= k <= m
};

inline CoveringProfile covering_profile(const DilationSet& set, int threads = 0) {
  return CoveringProfile(set, threads);
}

/// Upper-Minkowski-dimension estimate: slope of log2 N(E, 2^-m) against m.
ExponentFit minkowski_estimate(const CoveringProfile& p, ScaleWindow window);

/// Per-theta finite-scale Assouad-spectrum estimates: for each scale m the
/// window level is k_m = floor(theta*m) and the regression runs
/// log2 counts(k_m, m) against m - k_m. The value at the largest grid theta
/// estimates the quasi-Assouad dimension.
std::vector<std::pair<double, ExponentFit>> assouad_spectrum_estimate(
    const CoveringProfile& p, const std::vector<double>& thetas, ScaleWindow window);

/// log2 S(m) with S(m) = max_k 2^{k*alpha} * counts(k, m); ties take the
/// smallest k. This is the dyadic-window version of
/// sup_{delta <= |J| <= 1} |J|^-alpha N(E ∩ J, delta).
std::vector<double> nu_sharp_scores(const CoveringProfile& p, double alpha);

/// Slope of log2 S(m) against m; estimates the window growth exponent
/// nu#(alpha).
ExponentFit nu_sharp_estimate(const CoveringProfile& p, double alpha, ScaleWindow window);

/// Legendre transform of a window covering exponent profile:
/// max over the grid of (alpha*theta - nu(theta)); requires nu <= 0.
double legendre_nu_sharp(const std::vector<std::pair<double, double>>& nu_profile,
                         double alpha);

/// Sandwich check alpha <= nu#(alpha) <= max(alpha, (1-beta/gamma)*alpha + beta)
/// for each alpha, within +-slack.
struct FracpropRow {
  double alpha = 0;
  double estimate = 0;
  double lower = 0;
  double upper = 0;
  bool pass = false;
};
struct FracpropReport {
  std::vector<FracpropRow> rows;
  bool all_pass = true;
};
FracpropReport fracprop_check(const CoveringProfile& p, double beta, double gamma,
                              const std::vector<double>& alphas, double slack,
                              ScaleWindow window);

/// Endpoint diagnostic sequences over m = 1..depth plus advisory boundedness
/// verdicts. The authoritative classification uses AnalyticProfile flags.
struct EndpointDiagnostics {
  std::vector<double> delta_beta_N;          // 2^{-m beta} N(E, 2^-m)
  std::vector<double> log_weighted;          // 2^{-m} (m ln2)^{q/d} N(E, 2^-m)
  std::vector<double> neighborhood_measure;  // N(E, 2^-m) 2^{-m}
  bool delta_beta_appears_bounded = false;
  bool log_weighted_appears_bounded = false;
};
EndpointDiagnostics endpoint_diagnostics(const CoveringProfile& p, double beta,
                                         double q, int d);

/// Covering functional 2^{-k(2/q - 1/p)} * counts(k, k+m)^{1/q} from the
/// two-dimensional sufficiency analysis.
double omega_mpq(const CoveringProfile& p, double pp, double q, int m, int k);

}  // namespace radmax
