#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace smalldev {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// One abscissa of a bound curve; a missing side is NaN.
struct CurvePoint {
  double x = 0.0;
  double lower = kNaN;
  double upper = kNaN;
  std::string method;
};

/// Points (r, phi bounds) or (epsilon, H bounds), each tagged with the inequality
/// that produced it.
struct BoundCurve {
  std::string abscissa = "r";   // "r" or "epsilon"
  std::string quantity = "phi"; // "phi" or "H"
  std::string params;
  std::vector<CurvePoint> points;

  void add(double x, double lower, double upper, std::string method) {
    points.push_back({x, lower, upper, std::move(method)});
  }
};

/// CSV with columns <abscissa>,lower,upper,method,params.
void write_csv(std::ostream& os, const BoundCurve& curve);

/// Shortest round-trip decimal representation ("nan", "inf", "-inf" for non-finite values).
std::string format_double(double v);

}  // namespace smalldev
