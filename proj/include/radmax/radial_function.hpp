#pragma once

#include <utility>
#include <variant>
#include <vector>

namespace radmax {

/// Radial profiles f(x) = f0(|x|) used throughout the experiments.
/// All kinds carry an amplitude so scaling tests stay closed under the type.
class RadialFunction {
 public:
  struct Indicator {
    double a, b;
    double height = 1.0;
  };
  struct Step {
    double a, b, height;
  };
  struct StepTrain {
    std::vector<Step> steps;  // disjoint, increasing
  };
  struct PowerLog {
    double exponent;      // s^exponent
    double log_exponent;  // (log 1/s)^log_exponent
    double a, b;          // support, inside (0, 1] when log_exponent != 0
    double amplitude = 1.0;
  };
  struct SmoothBump {
    double center, width;
    double amplitude = 1.0;
  };

  static RadialFunction indicator(double a, double b, double height = 1.0);
  static RadialFunction step_train(std::vector<Step> steps);
  static RadialFunction power_log(double exponent, double log_exponent, double a,
                                  double b, double amplitude = 1.0);
  static RadialFunction smooth_bump(double center, double width,
                                    double amplitude = 1.0);

  double operator()(double s) const;
  std::pair<double, double> support() const;
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  bool piecewise_constant() const;

  /// || f ||_{L^p(s^{d-1} ds)}; closed form for piecewise-constant kinds,
  /// quadrature otherwise.
  double norm_weighted(double p, int d) const;

  /// Same shape with every value multiplied by lambda.
  RadialFunction scaled(double lambda) const;

  using Kind = std::variant<Indicator, StepTrain, PowerLog, SmoothBump>;
  const Kind& kind() const { return kind_; }

 private:
  explicit RadialFunction(Kind kind);
  Kind kind_;
  std::vector<double> breakpoints_;
};

}  // namespace radmax
