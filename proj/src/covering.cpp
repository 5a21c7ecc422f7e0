#include "radmax/covering.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace radmax {

namespace {

// Largest run of ancestors sharing a level-k prefix, over the sorted depth-m
// ancestor list.
std::uint64_t max_prefix_run(const std::vector<std::uint64_t>& anc, int m, int k) {
  const int shift = m - k;
  std::uint64_t best = 0, run = 0;
  std::uint64_t prev = ~std::uint64_t{0};
  for (std::uint64_t a : anc) {
    const std::uint64_t p = a >> shift;
    run = (p == prev) ? run + 1 : 1;
    prev = p;
    if (run > best) best = run;
  }
  return best;
}

void check_window(ScaleWindow w, int depth, int min_points = 3) {
  if (w.m_min < 0 || w.m_max > depth || w.m_max - w.m_min + 1 < min_points)
    throw FitError("scale window needs at least " + std::to_string(min_points) +
                   " scales inside [0, depth]");
}

bool appears_bounded(const std::vector<double>& seq) {
  // Compares the sequence maximum against the median of its coarsest quarter;
  // monotone growth trips this while bounded oscillation does not.
  if (seq.empty()) return true;
  std::vector<double> head(seq.begin(),
                           seq.begin() + std::max<std::size_t>(2, seq.size() / 4));
  std::sort(head.begin(), head.end());
  const double med = head[head.size() / 2];
  const double mx = *std::max_element(seq.begin(), seq.end());
  return med > 0 && mx / med <= 4.0;
}

}  // namespace

CoveringProfile::CoveringProfile(const DilationSet& set, int threads)
    : depth_(set.depth()), rows_(static_cast<std::size_t>(set.depth()) + 1) {
  const int n = depth_;
  auto fill_row = [&](int m) {
    const auto anc = ancestors(set, m);
    auto& row = rows_[m];
    row.resize(m + 1);
    row[m] = 1;
    for (int k = 0; k < m; ++k) row[k] = max_prefix_run(anc, m, k);
    if (m == 0) row[0] = 1;
  };
  int workers = threads > 0 ? threads
                            : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, 8);
  if (workers == 1 || n < 8) {
    for (int m = 0; m <= n; ++m) fill_row(m);
  } else {
    // Rows are independent slots, so the result is schedule-independent.
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int m = next.fetch_add(1); m <= n; m = next.fetch_add(1)) fill_row(m);
      });
    for (auto& t : pool) t.join();
  }
}

CoveringProfile::CoveringProfile(int depth, std::vector<std::vector<std::uint64_t>> rows)
    : depth_(depth), rows_(std::move(rows)) {
  if (depth < 0 || rows_.size() != static_cast<std::size_t>(depth) + 1)
    throw std::invalid_argument("synthetic profile needs depth+1 rows");
  for (int m = 0; m <= depth; ++m) {
    if (rows_[m].size() != static_cast<std::size_t>(m) + 1)
      throw std::invalid_argument("row m must have m+1 window counts");
    for (auto c : rows_[m])
      if (c == 0) throw std::invalid_argument("window counts must be >= 1");
  }
}

std::uint64_t CoveringProfile::count(int k, int m) const {
  if (m < 0 || m > depth_ || k < 0 || k > m)
    throw std::out_of_range("covering profile indices need 0 <= k <= m <= depth");
  return rows_[m][k];
}

ExponentFit minkowski_estimate(const CoveringProfile& p, ScaleWindow w) {
  check_window(w, p.depth());
  std::vector<std::pair<double, double>> pts;
  for (int m = w.m_min; m <= w.m_max; ++m)
    pts.emplace_back(m, std::log2(static_cast<double>(p.global_count(m))));
  ExponentFit fit = fit_exponent(pts);
  fit.m_min = w.m_min;
  fit.m_max = w.m_max;
  return fit;
}

std::vector<std::pair<double, ExponentFit>> assouad_spectrum_estimate(
    const CoveringProfile& p, const std::vector<double>& thetas, ScaleWindow w) {
  check_window(w, p.depth());
  std::vector<std::pair<double, ExponentFit>> out;
  for (double theta : thetas) {
    if (theta < 0.0 || theta >= 1.0)
      throw std::invalid_argument("theta grid values must lie in [0,1)");
    std::vector<std::pair<double, double>> pts;
    for (int m = w.m_min; m <= w.m_max; ++m) {
      const int k = static_cast<int>(std::floor(theta * m));
      pts.emplace_back(m - k, std::log2(static_cast<double>(p.count(k, m))));
    }
    ExponentFit fit = fit_exponent(pts);
    fit.m_min = w.m_min;
    fit.m_max = w.m_max;
    out.emplace_back(theta, fit);
  }
  return out;
}

std::vector<double> nu_sharp_scores(const CoveringProfile& p, double alpha) {
  std::vector<double> scores(p.depth() + 1);
  for (int m = 0; m <= p.depth(); ++m) {
    double best = -1e300;
    for (int k = 0; k <= m; ++k) {
      const double v = alpha * k + std::log2(static_cast<double>(p.count(k, m)));
      if (v > best) best = v;  // ties keep the smallest k
    }
    scores[m] = best;
  }
  return scores;
}

ExponentFit nu_sharp_estimate(const CoveringProfile& p, double alpha, ScaleWindow w) {
  check_window(w, p.depth());
  const auto scores = nu_sharp_scores(p, alpha);
  std::vector<std::pair<double, double>> pts;
  for (int m = w.m_min; m <= w.m_max; ++m) pts.emplace_back(m, scores[m]);
  ExponentFit fit = fit_exponent(pts);
  fit.m_min = w.m_min;
  fit.m_max = w.m_max;
  return fit;
}

double legendre_nu_sharp(const std::vector<std::pair<double, double>>& nu_profile,
                         double alpha) {
  if (nu_profile.empty()) throw std::invalid_argument("empty nu profile");
  double best = -1e300;
  for (const auto& [theta, nu] : nu_profile) {
    if (nu > 1e-12) throw std::invalid_argument("nu(theta) must be <= 0");
    best = std::max(best, alpha * theta - nu);
  }
  return best;
}

FracpropReport fracprop_check(const CoveringProfile& p, double beta, double gamma,
                              const std::vector<double>& alphas, double slack,
                              ScaleWindow window) {
  if (!(beta >= 0 && beta <= gamma && gamma <= 1))
    throw std::invalid_argument("fracprop needs 0 <= beta <= gamma <= 1");
  // gamma == 0 forces beta == 0; the upper bound degenerates to alpha.
  const double ratio = gamma > 0 ? beta / gamma : 1.0;
  FracpropReport report;
  for (double alpha : alphas) {
    if (alpha < 0) throw std::invalid_argument("fracprop alphas must be >= 0");
    FracpropRow row;
    row.alpha = alpha;
    row.estimate = nu_sharp_estimate(p, alpha, window).slope;
    row.lower = alpha;
    row.upper = std::max(alpha, (1.0 - ratio) * alpha + beta);
    row.pass = row.estimate >= row.lower - slack && row.estimate <= row.upper + slack;
    report.all_pass = report.all_pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

EndpointDiagnostics endpoint_diagnostics(const CoveringProfile& p, double beta,
                                         double q, int d) {
  if (beta < 0 || beta > 1) throw std::invalid_argument("beta must be in [0,1]");
  if (q < 1 || d < 2) throw std::invalid_argument("need q >= 1 and d >= 2");
  EndpointDiagnostics out;
  for (int m = 1; m <= p.depth(); ++m) {
    const double N = static_cast<double>(p.global_count(m));
    const double delta = std::ldexp(1.0, -m);
    out.delta_beta_N.push_back(std::pow(delta, beta) * N);
    out.log_weighted.push_back(delta * std::pow(m * std::log(2.0), q / d) * N);
    out.neighborhood_measure.push_back(N * delta);
  }
  out.delta_beta_appears_bounded = appears_bounded(out.delta_beta_N);
  out.log_weighted_appears_bounded = appears_bounded(out.log_weighted);
  return out;
}

double omega_mpq(const CoveringProfile& p, double pp, double q, int m, int k) {
  if (!(pp > 1 && pp <= q)) throw std::invalid_argument("need 1 < p <= q");
  if (m < 0 || k < 0 || k + m > p.depth())
    throw std::out_of_range("omega needs k + m <= depth");
  const double count = static_cast<double>(p.count(k, k + m));
  return std::pow(2.0, -k * (2.0 / q - 1.0 / pp)) * std::pow(count, 1.0 / q);
}

}  // namespace radmax
