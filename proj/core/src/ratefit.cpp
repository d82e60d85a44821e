#include "smalldev/ratefit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "smalldev/errors.hpp"

namespace smalldev::ratefit {

RateFitResult fit(std::span<const RatePoint> points, std::optional<double> fixed_beta) {
  RateFitResult res;
  res.mode = fixed_beta ? "fixed" : "free";
  res.beta = fixed_beta.value_or(0.0);
  res.n_points = points.size();
  const std::size_t n_params = fixed_beta ? 2 : 3;
  auto refuse = [&](std::string why) {
    res.refused = true;
    res.reason = std::move(why);
    return res;
  };
  if (points.empty()) return refuse("no points");
  res.r_min = points.front().r;
  res.r_max = points.front().r;
  const double r_cap = std::exp(-std::exp(1.0));
  for (const auto& p : points) {
    if (!(p.r > 0.0 && p.r < r_cap)) return refuse("radius outside (0, e^{-e})");
    if (!(p.phi > 0.0) || !std::isfinite(p.phi)) return refuse("phi must be positive and finite");
    res.r_min = std::min(res.r_min, p.r);
    res.r_max = std::max(res.r_max, p.r);
  }
  if (points.size() <= n_params) return refuse("too few points for the free parameters");
  if (std::log10(res.r_max / res.r_min) < 2.0) return refuse("radii span less than two decades");

  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd X(n, static_cast<Eigen::Index>(n_params));
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double L = std::abs(std::log(points[static_cast<std::size_t>(i)].r));
    const double ll = std::log(std::log(L));
    X(i, 0) = 1.0;
    X(i, 1) = std::log(L);
    y(i) = std::log(points[static_cast<std::size_t>(i)].phi);
    if (fixed_beta) y(i) -= *fixed_beta * ll;
    else X(i, 2) = ll;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < static_cast<Eigen::Index>(n_params)) return refuse("collinear design");
  const Eigen::VectorXd coef = qr.solve(y);
  res.A = std::exp(coef(0));
  res.gamma = coef(1);
  if (!fixed_beta) res.beta = coef(2);
  res.rss = (X * coef - y).squaredNorm();
  return res;
}

double evaluate(const RateFitResult& f, double r) {
  const double L = std::abs(std::log(r));
  return f.A * std::pow(L, f.gamma) * std::pow(std::log(L), f.beta);
}

OpenProblemPoint open_problem_point(double alpha, double r) {
  if (!(alpha > 1.0)) throw PreconditionError("alpha must exceed 1");
  if (!(r > 0.0 && r < 1.0)) throw PreconditionError("radius must lie in (0, 1)");
  const double L = -std::log(r);
  const double core = std::pow(2.0 * L, 1.0 / alpha);
  OpenProblemPoint p;
  p.r = r;
  p.lower = std::pow(L, (alpha - 1.0) / alpha) * std::exp(core);
  p.upper = L * std::exp(core + 5.0 / alpha * std::pow(L, 2.0 / alpha - 1.0));
  return p;
}

BoundCurve open_problem_curves(double alpha, std::span<const double> radii) {
  BoundCurve c;
  c.abscissa = "r";
  c.quantity = "phi";
  c.params = "alpha=" + format_double(alpha);
  for (double r : radii) {
    const auto p = open_problem_point(alpha, r);
    c.add(r, p.lower, p.upper, "open-problem-reference");
  }
  return c;
}

std::string to_json(const RateFitResult& f) {
  std::ostringstream os;
  os << "{\"A\":" << format_double(f.A) << ",\"gamma\":" << format_double(f.gamma)
     << ",\"beta\":" << format_double(f.beta) << ",\"rss\":" << format_double(f.rss)
     << ",\"n_points\":" << f.n_points << ",\"r_min\":" << format_double(f.r_min)
     << ",\"r_max\":" << format_double(f.r_max) << ",\"mode\":\"" << f.mode << "\"";
  if (f.refused) os << ",\"refused\":true,\"reason\":\"" << f.reason << "\"";
  os << "}";
  return os.str();
}

}  // namespace smalldev::ratefit
