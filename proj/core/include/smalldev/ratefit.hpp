#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smalldev/curves.hpp"

namespace smalldev::ratefit {

struct RatePoint {
  double r = 0.0;
  double phi = 0.0;
};

struct RateFitResult {
  double A = 0.0;
  double gamma = 0.0;
  double beta = 0.0;
  double rss = 0.0;
  std::size_t n_points = 0;
  double r_min = 0.0;
  double r_max = 0.0;
  std::string mode;        ///< "free" or "fixed"
  bool refused = false;
  std::string reason;
};

/// Least squares for log phi = log A + gamma log|log r| + beta log log|log r|.
/// With fixed_beta the last regressor is held at that value. Refuses (no fit) when a
/// point has r >= e^{-e} or phi <= 0, when the radii span less than two decades, when
/// there are too few points for the free parameters, or when the design is collinear.
RateFitResult fit(std::span<const RatePoint> points, std::optional<double> fixed_beta = std::nullopt);

/// Evaluates A |log r|^gamma (log|log r|)^beta.
double evaluate(const RateFitResult& f, double r);

struct OpenProblemPoint {
  double r = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// |log r|^{(a-1)/a} exp((2|log r|)^{1/a}) and |log r| exp((2|log r|)^{1/a} + (5/a)|log r|^{2/a-1}).
OpenProblemPoint open_problem_point(double alpha, double r);
BoundCurve open_problem_curves(double alpha, std::span<const double> radii);

/// JSON object {A, gamma, beta, rss, n_points, r_min, r_max, mode}.
std::string to_json(const RateFitResult& f);

}  // namespace smalldev::ratefit
