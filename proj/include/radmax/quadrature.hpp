#pragma once

#include <functional>
#include <span>
#include <stdexcept>

namespace radmax {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
};

/// Raised when the evaluation budget runs out before the tolerance is met;
/// carries the best estimate so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, QuadratureResult best)
      : std::runtime_error(what), best_(best) {}
  const QuadratureResult& best() const { return best_; }

 private:
  QuadratureResult best_;
};

/// Adaptive Gauss-Kronrod 7-15 on [a, b]. Interior breakpoints become initial
/// segment boundaries so integrand jumps never sit inside a panel.
/// Deterministic: the worst segment (ties by left endpoint) is split first.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints, double tol,
                           long max_evals = 400000);

inline QuadratureResult integrate(const std::function<double(double)>& f, double a,
                                  double b, double tol, long max_evals = 400000) {
  return integrate(f, a, b, {}, tol, max_evals);
}

}  // namespace radmax
