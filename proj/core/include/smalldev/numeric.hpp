#pragma once

#include <cstddef>
#include <functional>

namespace smalldev::numeric {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod integration of f over [a, b].
///
/// The interval is split into `pieces` equal parts (useful for oscillatory
/// integrands) and each part is integrated adaptively. Throws NumericFailure
/// when the summed error estimate exceeds abs_tol.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-10, std::size_t pieces = 1);

/// Standard normal distribution function.
double normal_cdf(double x);

/// log Phi(x), accurate far into the lower tail.
double normal_log_cdf(double x);

/// Phi^{-1}(p) for p in (0, 1).
double normal_quantile(double p);

/// Phi^{-1}(exp(log_p)) for log_p < 0; works when exp(log_p) underflows.
double normal_quantile_from_log(double log_p);

/// Riemann zeta for s > 1 by Euler-Maclaurin summation (remainder below 1e-13).
double zeta(double s);

/// sum_{k > n} k^{-s} for s > 1 (Hurwitz tail), Euler-Maclaurin.
double zeta_tail(double s, std::size_t n);

/// Two-sided 95% standard normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for a binomial proportion.
WilsonInterval wilson_interval(std::size_t hits, std::size_t n, double z = kZ95);

}  // namespace smalldev::numeric
