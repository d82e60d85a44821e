#include "smalldev/gfunction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smalldev/curves.hpp"
#include "smalldev/errors.hpp"
#include "smalldev/numeric.hpp"

namespace smalldev::entropy {

using numeric::kPi;

namespace {

constexpr double kTailArgument = 0.1;
constexpr std::size_t kMaxDepth = 50'000'000;

// log|sin x / x| and its sign.
double log_abs_sinc(double x, int& sign) {
  if (x == 0.0) {
    sign = 1;
    return 0.0;
  }
  const double s = std::sin(x) / x;
  sign = s < 0.0 ? -1 : 1;
  return std::log(std::abs(s));
}

}  // namespace

GFunctionSpec GFunctionSpec::make(double gamma, std::size_t depth) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw PreconditionError("gamma must lie in (0, 1)");
  GFunctionSpec s;
  s.gamma = gamma;
  s.c = 1.0 / numeric::zeta(1.0 + gamma);
  s.depth = depth;
  return s;
}

double GFunctionSpec::a(std::size_t k) const { return c * std::pow(static_cast<double>(k), -1.0 - gamma); }

std::size_t GFunctionSpec::required_depth(double t) const {
  t = std::abs(t);
  if (c * t <= kTailArgument) return 0;
  // a_{D+1} t <= 0.1  <=>  D + 1 >= (10 c t)^{1/(1+gamma)}
  const double k = std::ceil(std::pow(c * t / kTailArgument, 1.0 / (1.0 + gamma)));
  if (k > static_cast<double>(kMaxDepth)) {
    throw CapacityError("G-function depth exceeds capacity at t=" + format_double(t), static_cast<double>(kMaxDepth));
  }
  auto D = static_cast<std::size_t>(k) - 1;
  while (a(D + 1) * t > kTailArgument) ++D;
  return D;
}

double GFunctionSpec::lipschitz_01() const { return c * c * numeric::zeta(2.0 + 2.0 * gamma) / 3.0; }

GValue g_eval(const GFunctionSpec& spec, double t) {
  t = std::abs(t);
  GValue g;
  if (t == 0.0) return g;
  std::size_t D = spec.required_depth(t);
  if (spec.depth != 0) {
    if (spec.depth < D) {
      throw CapacityError("G-function depth " + std::to_string(spec.depth) + " too shallow at t=" +
                              format_double(t) + "; need " + std::to_string(D),
                          static_cast<double>(D));
    }
    D = spec.depth;
  }
  int sign = 1;
  double log_abs = 0.0;
  for (std::size_t k = 1; k <= D; ++k) {
    int s = 1;
    log_abs += log_abs_sinc(spec.a(k) * t, s);
    sign *= s;
    if (std::isinf(log_abs)) break;
  }
  // Tail: sum_{k > D} log sinc(a_k t) = -sum_n zeta(2n) (c t)^{2n} zeta_tail(2n(1+gamma), D) / (n pi^{2n}).
  double tail = 0.0;
  double last = 0.0;
  const double ct_over_pi = spec.c * t / kPi;
  double power = 1.0;
  for (int n = 1; n <= 60; ++n) {
    power *= ct_over_pi * ct_over_pi;
    const double s = 2.0 * n * (1.0 + spec.gamma);
    const double term = -numeric::zeta(2.0 * n) * power * numeric::zeta_tail(s, D) / n;
    tail += term;
    last = std::abs(term);
    if (last <= 1e-18 * std::max(1.0, std::abs(tail))) break;
  }
  g.depth = D;
  g.remainder_bound = 2.0 * last;
  g.log_abs = log_abs + tail;
  g.value = std::isinf(log_abs) ? 0.0 : sign * std::exp(g.log_abs);
  return g;
}

double g_envelope_log(const GFunctionSpec& spec, double t) {
  t = std::abs(t);
  double s = 0.0;
  for (std::size_t k = 1;; ++k) {
    const double x = spec.a(k) * t;
    if (x <= 1.0) break;
    s -= std::log(x);
  }
  return s;
}

namespace {

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (x.size() < 2 || den == 0.0) throw NumericFailure("degenerate decay regression", 0.0);
  Line l;
  l.slope = (n * sxy - sx * sy) / den;
  l.intercept = (sy - l.slope * sx) / n;
  return l;
}

}  // namespace

GCertificate g_certify(const GFunctionSpec& spec, double t_max, std::size_t grid, double t0) {
  if (grid < 2) throw PreconditionError("certification grid needs at least two points");
  if (!(t0 > 0.0 && t_max > t0)) throw PreconditionError("decay range must satisfy 0 < t0 < t_max");
  GCertificate cert;
  const double p = 1.0 / (1.0 + spec.gamma);

  // theta_G on [0, 1].
  const double h = 1.0 / static_cast<double>(grid - 1);
  cert.theta_grid_min = kInf;
  double max_abs = 0.0;
  bool by_exp = true;
  for (std::size_t i = 0; i < grid; ++i) {
    const double t = h * static_cast<double>(i);
    const double v = std::abs(g_eval(spec, t).value);
    cert.theta_grid_min = std::min(cert.theta_grid_min, v);
    max_abs = std::max(max_abs, v);
    by_exp = by_exp && v <= std::exp(t);
  }
  cert.lipschitz = spec.lipschitz_01();
  cert.theta_G = cert.theta_grid_min - cert.lipschitz * h / 2.0;
  cert.theta_positive = cert.theta_G > 0.0;

  // Decay: maxima of |G| over log-spaced bins, sampled finer than the fastest factor.
  constexpr std::size_t kBins = 60;
  const double step = std::min(0.1, 0.05 * kPi / spec.c);
  const double ratio = std::pow(t_max / t0, 1.0 / static_cast<double>(kBins));
  std::vector<double> lx;
  std::vector<double> ly;
  std::vector<double> ex;
  std::vector<double> ey;
  double lo = t0;
  double c_env = kInf;
  double c_sample = kInf;
  for (std::size_t b = 0; b < kBins; ++b) {
    const double hi = b + 1 == kBins ? t_max : lo * ratio;
    double best_log = -kInf;
    double best_t = lo;
    for (double t = lo; t <= hi; t += step) {
      const GValue g = g_eval(spec, t);
      max_abs = std::max(max_abs, std::abs(g.value));
      by_exp = by_exp && std::abs(g.value) <= std::exp(t);
      if (g.log_abs > best_log) {
        best_log = g.log_abs;
        best_t = t;
      }
    }
    if (best_log < 0.0 && std::isfinite(best_log)) {
      cert.maxima_t.push_back(best_t);
      cert.maxima_log_abs.push_back(best_log);
      lx.push_back(std::log(best_t));
      ly.push_back(std::log(-best_log));
      c_sample = std::min(c_sample, -best_log / std::pow(best_t, p));
    }
    // The envelope decreases in t, so its value at lo bounds the whole bin.
    const double env = g_envelope_log(spec, lo);
    if (env < 0.0) {
      ex.push_back(std::log(lo));
      ey.push_back(std::log(-env));
      c_env = std::min(c_env, -env / std::pow(hi, p));
    } else {
      c_env = 0.0;
    }
    lo = hi;
  }
  cert.max_abs_real = max_abs;
  cert.bounded_by_one = max_abs <= 1.0 + 1e-15;
  cert.bounded_by_exp = by_exp;
  if (lx.size() >= 2) {
    cert.decay_exponent = least_squares(lx, ly).slope;
    double s = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) s += ly[i] - p * lx[i];
    cert.C_G_fit = std::exp(s / static_cast<double>(lx.size()));
  }
  if (ex.size() >= 2) cert.decay_exponent_envelope = least_squares(ex, ey).slope;
  cert.C_G = std::isfinite(c_sample) ? c_sample : 0.0;
  cert.C_G_envelope = std::isfinite(c_env) ? c_env : 0.0;
  return cert;
}

}  // namespace smalldev::entropy
