#include "radmax/radial_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "radmax/quadrature.hpp"

namespace radmax {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// Exact integral of s^{d-1} over [a, b].
double weight_integral(double a, double b, int d) {
  return (ipow(b, d) - ipow(a, d)) / d;
}

}  // namespace

RadialFunction::RadialFunction(Kind kind) : kind_(std::move(kind)) {
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Indicator>) {
          breakpoints_ = {k.a, k.b};
        } else if constexpr (std::is_same_v<T, StepTrain>) {
          for (const auto& s : k.steps) {
            breakpoints_.push_back(s.a);
            breakpoints_.push_back(s.b);
          }
        } else if constexpr (std::is_same_v<T, PowerLog>) {
          breakpoints_ = {k.a, k.b};
        } else {
          breakpoints_ = {k.center - k.width, k.center + k.width};
        }
      },
      kind_);
}

RadialFunction RadialFunction::indicator(double a, double b, double height) {
  if (!(a >= 0 && b > a)) throw std::invalid_argument("indicator needs 0 <= a < b");
  return RadialFunction(Indicator{a, b, height});
}

RadialFunction RadialFunction::step_train(std::vector<Step> steps) {
  if (steps.empty()) throw std::invalid_argument("step train needs at least one step");
  double prev = 0.0;
  for (const auto& s : steps) {
    if (!(s.a >= prev && s.b > s.a))
      throw std::invalid_argument("step train intervals must be disjoint and increasing");
    prev = s.b;
  }
  return RadialFunction(StepTrain{std::move(steps)});
}

RadialFunction RadialFunction::power_log(double exponent, double log_exponent, double a,
                                         double b, double amplitude) {
  if (!(a > 0 && b > a)) throw std::invalid_argument("power_log needs 0 < a < b");
  if (log_exponent != 0.0 && b > 1.0)
    throw std::invalid_argument("power_log with a log factor needs support inside (0,1]");
  return RadialFunction(PowerLog{exponent, log_exponent, a, b, amplitude});
}

RadialFunction RadialFunction::smooth_bump(double center, double width,
                                           double amplitude) {
  if (!(width > 0 && center - width > 0))
    throw std::invalid_argument("smooth bump must have compact support in (0, inf)");
  return RadialFunction(SmoothBump{center, width, amplitude});
}

double RadialFunction::operator()(double s) const {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Indicator>) {
          return (s >= k.a && s <= k.b) ? k.height : 0.0;
        } else if constexpr (std::is_same_v<T, StepTrain>) {
          auto it = std::upper_bound(
              k.steps.begin(), k.steps.end(), s,
              [](double v, const Step& st) { return v < st.a; });
          if (it == k.steps.begin()) return 0.0;
          --it;
          return (s >= it->a && s <= it->b) ? it->height : 0.0;
        } else if constexpr (std::is_same_v<T, PowerLog>) {
          if (s < k.a || s > k.b) return 0.0;
          double v = k.amplitude * std::pow(s, k.exponent);
          if (k.log_exponent != 0.0) v *= std::pow(std::log(1.0 / s), k.log_exponent);
          return v;
        } else {
          const double u = (s - k.center) / k.width;
          if (std::fabs(u) >= 1.0) return 0.0;
          return k.amplitude * std::exp(1.0 - 1.0 / (1.0 - u * u));
        }
      },
      kind_);
}

std::pair<double, double> RadialFunction::support() const {
  return {breakpoints_.front(), breakpoints_.back()};
}

bool RadialFunction::piecewise_constant() const {
  return std::holds_alternative<Indicator>(kind_) ||
         std::holds_alternative<StepTrain>(kind_);
}

double RadialFunction::norm_weighted(double p, int d) const {
  if (!(p >= 1)) throw std::invalid_argument("norm exponent must satisfy p >= 1");
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (const auto* ind = std::get_if<Indicator>(&kind_)) {
    return std::pow(std::pow(std::fabs(ind->height), p) * weight_integral(ind->a, ind->b, d),
                    1.0 / p);
  }
  if (const auto* train = std::get_if<StepTrain>(&kind_)) {
    double sum = 0.0;
    for (const auto& s : train->steps)
      sum += std::pow(std::fabs(s.height), p) * weight_integral(s.a, s.b, d);
    return std::pow(sum, 1.0 / p);
  }
  const auto [lo, hi] = support();
  auto integrand = [&](double s) {
    return std::pow(std::fabs((*this)(s)), p) * std::pow(s, d - 1);
  };
  const auto q = integrate(integrand, lo, hi, breakpoints(), 1e-11, 400000);
  return std::pow(q.value, 1.0 / p);
}

RadialFunction RadialFunction::scaled(double lambda) const {
  Kind k = kind_;
  std::visit(
      [&](auto& kk) {
        using T = std::decay_t<decltype(kk)>;
        if constexpr (std::is_same_v<T, Indicator>) {
          kk.height *= lambda;
        } else if constexpr (std::is_same_v<T, StepTrain>) {
          for (auto& s : kk.steps) s.height *= lambda;
        } else if constexpr (std::is_same_v<T, PowerLog>) {
          kk.amplitude *= lambda;
        } else {
          kk.amplitude *= lambda;
        }
      },
      k);
  return RadialFunction(std::move(k));
}

}  // namespace radmax
