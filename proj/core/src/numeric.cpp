#include "smalldev/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "smalldev/errors.hpp"

namespace smalldev::numeric {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, std::size_t pieces) {
  using boost::math::quadrature::gauss_kronrod;
  QuadratureResult total;
  if (a == b) return total;
  pieces = std::max<std::size_t>(pieces, 1);
  const double width = (b - a) / static_cast<double>(pieces);
  for (std::size_t i = 0; i < pieces; ++i) {
    const double lo = a + width * static_cast<double>(i);
    const double hi = (i + 1 == pieces) ? b : lo + width;
    double err = 0.0;
    double v = gauss_kronrod<double, 31>::integrate(f, lo, hi, 0, 1e-14, &err);
    // Refine only pieces whose single-pass error is not already negligible.
    if (err > abs_tol / (4.0 * static_cast<double>(pieces))) {
      v = gauss_kronrod<double, 31>::integrate(f, lo, hi, 15, 1e-14, &err);
    }
    total.value += v;
    total.error += err;
  }
  if (!(total.error <= abs_tol) || !std::isfinite(total.value)) {
    throw NumericFailure("adaptive quadrature did not converge", total.error);
  }
  return total;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_log_cdf(double x) {
  if (x > -30.0) {
    if (x > 5.0) return std::log1p(-0.5 * std::erfc(x / std::sqrt(2.0)));
    return std::log(normal_cdf(x));
  }
  // Asymptotic (Mills ratio) series; truncation error below 1e-14 for x <= -30.
  const double inv2 = 1.0 / (x * x);
  const double series =
      1.0 - inv2 * (1.0 - 3.0 * inv2 * (1.0 - 5.0 * inv2 * (1.0 - 7.0 * inv2 * (1.0 - 9.0 * inv2))));
  return -0.5 * x * x - std::log(-x) - 0.5 * std::log(kTwoPi) + std::log(series);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double normal_quantile_from_log(double log_p) {
  if (!(log_p < 0.0)) throw DomainError("normal_quantile_from_log: log_p must be negative");
  if (log_p > -std::log(2.0)) {
    // p > 1/2: use the complement, which keeps full precision.
    const double q = -std::expm1(log_p);
    return -normal_quantile(q);
  }
  double x = 0.0;
  if (log_p > -700.0) {
    x = normal_quantile(std::exp(log_p));
  } else {
    x = -std::sqrt(-2.0 * log_p);
  }
  // Newton on log Phi(x) = log_p.
  for (int it = 0; it < 50; ++it) {
    const double lc = normal_log_cdf(x);
    const double log_pdf = -0.5 * x * x - 0.5 * std::log(kTwoPi);
    const double slope = std::exp(log_pdf - lc);
    const double step = (lc - log_p) / slope;
    x -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

namespace {

// B_{2j} / (2j)!
constexpr std::array<double, 7> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
};

// sum_{k >= N} k^{-s} by Euler-Maclaurin, N moderately large.
double em_tail_from(double s, double N) {
  double sum = std::pow(N, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(N, -s);
  double rising = s;                 // s (s+1) ... (s+2j-2)
  double power = std::pow(N, -s - 1.0);  // N^{-s-2j+1}
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    sum += kBernoulliOverFactorial[j] * rising * power;
    rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
    power /= N * N;
  }
  return sum;
}

}  // namespace

double zeta_tail(double s, std::size_t n) {
  if (!(s > 1.0)) throw DomainError("zeta: s must exceed 1");
  constexpr std::size_t kDirect = 16;
  double sum = 0.0;
  std::size_t k = n + 1;
  for (; k < kDirect; ++k) sum += std::pow(static_cast<double>(k), -s);
  return sum + em_tail_from(s, static_cast<double>(k));
}

double zeta(double s) { return zeta_tail(s, 0); }

WilsonInterval wilson_interval(std::size_t hits, std::size_t n, double z) {
  if (n == 0) return {};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  WilsonInterval w;
  w.low = hits == 0 ? 0.0 : std::clamp(center - half, 0.0, p);
  w.high = hits == n ? 1.0 : std::clamp(center + half, p, 1.0);
  return w;
}

}  // namespace smalldev::numeric
