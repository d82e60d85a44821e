#include "smalldev/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "smalldev/errors.hpp"
#include "smalldev/numeric.hpp"
#include "smalldev/pathgen.hpp"
#include "smalldev/rng.hpp"

namespace smalldev::entropy {

using numeric::kPi;
using numeric::kTwoPi;

CoefficientEllipsoid CoefficientEllipsoid::periodic(double nu, std::size_t K) {
  if (!(nu > 0.0)) throw PreconditionError("nu must be positive");
  CoefficientEllipsoid e;
  e.nu = nu;
  e.K = K;
  e.axes.push_back(1.0);
  e.l2_scale.push_back(1.0);
  for (std::size_t k = 1; k <= K; ++k) {
    const double b = std::sqrt(2.0) * std::exp(-0.5 * std::pow(static_cast<double>(k), nu));
    for (int i = 0; i < 2; ++i) {
      e.axes.push_back(b);
      e.l2_scale.push_back(1.0 / std::sqrt(2.0));
    }
  }
  // Squared axes beyond K: 2 * 2 e^{-k^nu} per frequency.
  e.tail_sq = 2.0 * pathgen::PeriodicGenConfig{nu, K, 1.0}.tail_variance();
  return e;
}

CoefficientEllipsoid CoefficientEllipsoid::from_axes(std::vector<double> axes, double tail_sq) {
  for (double a : axes) {
    if (!(a > 0.0)) throw PreconditionError("semi-axes must be positive");
  }
  if (!(tail_sq >= 0.0)) throw PreconditionError("tail must be nonnegative");
  std::sort(axes.begin(), axes.end(), std::greater<>());
  CoefficientEllipsoid e;
  e.K = 0;
  e.l2_scale.assign(axes.size(), 1.0);
  e.axes = std::move(axes);
  e.tail_sq = tail_sq;
  return e;
}

double CoefficientEllipsoid::energy(std::span<const std::complex<double>> c) const {
  if (c.size() != 2 * K + 1) throw PreconditionError("coefficient vector must have length 2K+1");
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double k = std::abs(static_cast<double>(i) - static_cast<double>(K));
    s += std::norm(c[i]) * std::exp(std::pow(k, nu));
  }
  return s;
}

double CoefficientEllipsoid::radius() const {
  double s = tail_sq;
  for (double a : axes) s += a * a;
  return std::sqrt(s);
}

std::vector<double> ellipsoid_member_to_function(const CoefficientEllipsoid& e,
                                                 std::span<const std::complex<double>> c,
                                                 std::span<const double> t) {
  if (e.energy(c) > 1.0 + 1e-12) throw PreconditionError("coefficients lie outside the unit ball");
  std::vector<double> out(t.size(), 0.0);
  const auto K = static_cast<long>(e.K);
  for (std::size_t j = 0; j < t.size(); ++j) {
    std::complex<double> h = 0.0;
    for (long k = -K; k <= K; ++k) {
      h += c[static_cast<std::size_t>(k + K)] * std::polar(1.0, -kTwoPi * static_cast<double>(k) * t[j]);
    }
    out[j] = h.real();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Covering

namespace {

constexpr std::size_t kBudgetLevels = 2048;

// Number of lattice cells meeting the ellipsoid sum x_j^2/b_j^2 <= 1, for cells of
// width 2 h_j anchored at -b_j. Squared-distance costs are rounded down on a grid of
// 1/kBudgetLevels, which can only add cells.
double count_cells(std::span<const double> b, std::span<const double> h) {
  std::vector<double> count(kBudgetLevels + 1, 0.0);
  count[0] = 1.0;
  std::vector<double> next(kBudgetLevels + 1);
  std::vector<double> hist(kBudgetLevels + 1);
  for (std::size_t j = 0; j < b.size(); ++j) {
    const double s = 2.0 * h[j];
    const auto n = static_cast<std::size_t>(std::ceil(2.0 * b[j] / s - 1e-12));
    std::fill(hist.begin(), hist.end(), 0.0);
    for (std::size_t i = 0; i < std::max<std::size_t>(n, 1); ++i) {
      const double lo = -b[j] + s * static_cast<double>(i);
      const double hi = lo + s;
      double d2 = 0.0;
      if (lo > 0.0) d2 = lo * lo;
      else if (hi < 0.0) d2 = hi * hi;
      const double cost = d2 / (b[j] * b[j]);
      if (cost > 1.0) continue;
      hist[static_cast<std::size_t>(std::floor(cost * static_cast<double>(kBudgetLevels)))] += 1.0;
    }
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t q = 0; q <= kBudgetLevels; ++q) {
      if (hist[q] == 0.0) continue;
      for (std::size_t u = 0; u + q <= kBudgetLevels; ++u) next[u + q] += hist[q] * count[u];
    }
    count.swap(next);
  }
  return std::accumulate(count.begin(), count.end(), 0.0);
}

// Half-widths h_j = min(b_j, mu w_j) with sum h_j = budget.
std::vector<double> water_fill(std::span<const double> b, std::span<const double> w, double budget) {
  double lo = 0.0;
  double hi = 1.0;
  auto used = [&](double mu) {
    double s = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) s += std::min(b[j], mu * w[j]);
    return s;
  };
  while (used(hi) < budget) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (used(mid) < budget) lo = mid; else hi = mid;
  }
  std::vector<double> h(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) h[j] = std::min(b[j], lo * w[j]);
  return h;
}

}  // namespace

double entropy_upper(const CoefficientEllipsoid& e, double epsilon, std::size_t* dimension) {
  if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
  if (dimension != nullptr) *dimension = 0;
  if (epsilon >= e.radius()) return 0.0;

  const std::size_t n_axes = e.axes.size();
  // tail2[d] = squared sup-norm bound of everything past the first d coordinates.
  std::vector<double> tail2(n_axes + 1);
  tail2[n_axes] = e.tail_sq;
  for (std::size_t d = n_axes; d-- > 0;) tail2[d] = tail2[d + 1] + e.axes[d] * e.axes[d];

  const std::size_t d_max = std::min(kMaxCoveringDimension, n_axes);
  double best = kInf;
  std::size_t best_d = 0;
  for (std::size_t d = 1; d <= d_max; ++d) {
    const double tau = std::sqrt(tail2[d]);
    if (tau >= epsilon) continue;
    const std::span<const double> b(e.axes.data(), d);
    const double budget = epsilon - tau;
    double axis_sum = 0.0;
    for (double x : b) axis_sum += x;
    if (axis_sum <= budget) {
      best = 0.0;
      best_d = d;
      break;
    }
    for (double theta : {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5}) {
      std::vector<double> w(d);
      for (std::size_t j = 0; j < d; ++j) w[j] = std::pow(b[j], theta);
      const auto h = water_fill(b, w, budget);
      const double count = count_cells(b, h);
      const double H = std::log(std::max(count, 1.0));
      if (H < best) {
        best = H;
        best_d = d;
      }
    }
  }
  if (!std::isfinite(best)) {
    throw CapacityError("covering needs more than " + std::to_string(kMaxCoveringDimension) +
                            " coordinates; smallest supported epsilon is " +
                            format_double(std::sqrt(tail2[d_max])),
                        std::sqrt(tail2[d_max]));
  }
  if (dimension != nullptr) *dimension = best_d;
  return best;
}

double entropy_lower(const CoefficientEllipsoid& e, double epsilon) {
  if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
  double H = 0.0;
  for (std::size_t j = 0; j < e.axes.size(); ++j) {
    const double term = std::log(e.axes[j] * e.l2_scale[j] / epsilon);
    if (term > 0.0) H += term;
  }
  return H;
}

EntropyBracket entropy_bracket(const CoefficientEllipsoid& e, double epsilon) {
  EntropyBracket br;
  br.epsilon = epsilon;
  br.H_upper = entropy_upper(e, epsilon, &br.dimension);
  br.H_lower = entropy_lower(e, epsilon);
  return br;
}

BoundCurve entropy_curve(const CoefficientEllipsoid& e, std::span<const double> epsilons) {
  BoundCurve c;
  c.abscissa = "epsilon";
  c.quantity = "H";
  c.params = "nu=" + format_double(e.nu) + ";K=" + std::to_string(e.K);
  for (double eps : epsilons) {
    const auto br = entropy_bracket(e, eps);
    c.add(eps, br.H_lower, br.H_upper, br.lower_method + "|" + br.upper_method);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Kuelbs-Li

namespace {

double upper_or_lower(const CurvePoint& p) { return std::isnan(p.upper) ? p.lower : p.upper; }

}  // namespace

BoundCurve kl_phi_to_H(const BoundCurve& phi_curve, double lambda) {
  if (!(lambda > 0.0)) throw PreconditionError("lambda must be positive");
  BoundCurve out;
  out.abscissa = "epsilon";
  out.quantity = "H";
  out.params = phi_curve.params + (phi_curve.params.empty() ? "" : ";") + "lambda=" + format_double(lambda);
  for (const auto& p : phi_curve.points) {
    if (!(p.x > 0.0)) throw PreconditionError("phi curve radii must be positive");
    const double phi = upper_or_lower(p);
    if (std::isnan(phi)) continue;
    out.add(2.0 * p.x / lambda, kNaN, phi + 0.5 * lambda * lambda, "kl-phi-to-H");
  }
  return out;
}

double alpha_r(double phi) {
  if (!(phi >= 0.0)) throw PreconditionError("phi must be nonnegative");
  if (std::isinf(phi)) throw DomainError("alpha_r undefined for infinite phi");
  if (phi == 0.0) return kInf;
  return numeric::normal_quantile_from_log(-phi);
}

double kl_H_lower_exact(double phi_2r, double phi_r, double lambda) {
  if (!(lambda > 0.0)) throw PreconditionError("lambda must be positive");
  const double a = alpha_r(phi_r);
  if (std::isinf(a)) return phi_2r;
  return phi_2r + numeric::normal_log_cdf(lambda + a);
}

double kl_H_lower_simplified(double phi_2r, double phi_r, double lambda) {
  const double d = lambda - std::sqrt(2.0 * phi_r);
  return phi_2r - 0.5 * d * d;
}

KLConsistency check_simplified(double phi_r, double phi_2r) {
  KLConsistency k;
  k.phi_r = phi_r;
  k.phi_2r = phi_2r;
  k.lambda = std::sqrt(2.0 * phi_r);
  k.exact = kl_H_lower_exact(phi_2r, phi_r, k.lambda);
  k.simplified = kl_H_lower_simplified(phi_2r, phi_r, k.lambda);
  k.correction = k.exact - k.simplified;
  k.dominated = k.exact >= k.simplified - std::log(2.0) - 1e-9;
  return k;
}

BoundCurve kl_H_to_phi(const std::function<double(double)>& phi, std::span<const double> radii, double lambda) {
  BoundCurve out;
  out.abscissa = "epsilon";
  out.quantity = "H";
  out.params = "lambda=" + format_double(lambda);
  for (double r : radii) {
    const double p1 = phi(r);
    const double p2 = phi(2.0 * r);
    if (!std::isfinite(p1) || !std::isfinite(p2)) continue;
    out.add(r / lambda, kl_H_lower_exact(p2, p1, lambda), kNaN, "kl-H-lower");
  }
  return out;
}

double phi_upper_from_entropy(const std::function<double(double)>& H_upper, double r) {
  if (!(r > 0.0)) throw PreconditionError("radius must be positive");
  const double log2 = std::log(2.0);
  double p = log2;
  for (int it = 0; it < 1000; ++it) {
    const double q = H_upper(r / (2.0 * std::sqrt(2.0 * std::max(p, log2)))) + log2;
    if (std::abs(q - p) <= 1e-12 * std::abs(q)) return q;
    p = q;
  }
  throw NumericFailure("entropy-to-phi iteration did not settle", p);
}

// ---------------------------------------------------------------------------
// Truncation

TruncationBoundResult truncation_entropy_upper(const TruncationBoundInput& in) {
  const double nu = in.model.nu;
  if (in.model.kind != spectra::SpectrumKind::ContinuousNu) {
    throw UnsupportedOperation("truncation bound is defined for the continuous family");
  }
  if (!(in.epsilon > 0.0 && in.epsilon < 1.0)) throw PreconditionError("epsilon must lie in (0, 1)");
  if (!(in.C > 0.0)) throw PreconditionError("constant C must be positive");
  const double theta_max = std::pow(3.0, -1.0 / nu);
  TruncationBoundResult res;
  res.epsilon = in.epsilon;
  res.theta = in.theta.value_or(theta_max);
  if (!(res.theta > 0.0) || res.theta > theta_max * (1.0 + 1e-12)) {
    throw PreconditionError("theta must lie in (0, 3^{-1/nu}]");
  }
  const double L = -std::log(in.epsilon);
  res.v = std::pow(3.0 * L, 1.0 / nu);
  res.delta = res.theta * std::pow(L, 1.0 - 1.0 / nu);
  const double delta = res.delta;
  if (nu >= 1.0) {
    auto f = [&](double u) { return std::exp(delta * u - std::pow(u, nu)); };
    const std::size_t pieces = std::min<std::size_t>(4096, 8 + static_cast<std::size_t>(res.v / 16.0));
    res.I = 2.0 * numeric::integrate(f, 0.0, res.v, 1e-9, pieces).value;
  } else {
    // u = s^{1/nu} removes the cusp of u^nu at the origin.
    const double a = 1.0 / nu;
    auto f = [&](double s) { return a * std::pow(s, a - 1.0) * std::exp(delta * std::pow(s, a) - s); };
    const double s_max = std::pow(res.v, nu);
    const std::size_t pieces = std::min<std::size_t>(4096, 8 + static_cast<std::size_t>(s_max / 4.0));
    res.I = 2.0 * numeric::integrate(f, 0.0, s_max, 1e-9, pieces).value;
  }
  res.I_within_2v = res.I <= 2.0 * res.v;
  const double a = 1.0 / nu;
  res.tail_bound = std::sqrt(2.0 / nu * boost::math::tgamma(a, std::pow(res.v, nu)));
  res.tail_within_eps = res.tail_bound <= in.epsilon;
  const double lg = std::log(in.epsilon / std::sqrt(res.I));
  res.H_upper = in.C * lg * lg / res.delta;
  return res;
}

// ---------------------------------------------------------------------------
// Rescaling

long patch_multiplier(double c) {
  if (!(c > 0.0 && c <= 1.0)) throw PreconditionError("scaling constant must lie in (0, 1]");
  return static_cast<long>(std::ceil(1.0 / c - 1e-12));
}

BoundCurve scaling_patch(const BoundCurve& H_curve, double c) {
  const long n = patch_multiplier(c);
  BoundCurve out;
  out.abscissa = "epsilon";
  out.quantity = "H";
  out.params = H_curve.params + (H_curve.params.empty() ? "" : ";") + "c=" + format_double(c) +
               ";n=" + std::to_string(n);
  for (const auto& p : H_curve.points) {
    const double H = upper_or_lower(p);
    if (std::isnan(H)) continue;
    out.add(2.0 * p.x, kNaN, static_cast<double>(n) * H, "scaling-patch");
  }
  return out;
}

// ---------------------------------------------------------------------------
// RKHS growth

GrowthReport rkhs_growth_check(double nu, std::size_t sample_count, double y_max, std::uint64_t seed,
                               std::size_t n_y) {
  if (!(nu > 1.0)) throw PreconditionError("growth check needs nu > 1");
  if (!(y_max >= 0.0)) throw PreconditionError("imaginary range must be nonnegative");
  if (n_y < 1) throw PreconditionError("need at least one imaginary level");
  const auto model = spectra::SpectralModel::continuous(nu);
  constexpr std::size_t kBins = 64;
  // Bins cover the mass that matters at the largest rate.
  const double U = std::max(spectra::integration_cutoff(model, 1e-16),
                            2.0 * std::pow(2.0 * y_max / nu, 1.0 / (nu - 1.0)) + 8.0);
  const double width = 2.0 * U / static_cast<double>(kBins);

  std::vector<double> w(kBins);
  for (std::size_t j = 0; j < kBins; ++j) {
    const double a = -U + width * static_cast<double>(j);
    w[j] = numeric::integrate([&](double u) { return spectra::density_eval(model, u); }, a, a + width, 1e-12).value;
  }

  std::vector<std::vector<double>> members(sample_count, std::vector<double>(kBins));
  for (std::size_t s = 0; s < sample_count; ++s) {
    NormalStream normal(seed, s);
    double norm2 = 0.0;
    for (std::size_t j = 0; j < kBins; ++j) {
      members[s][j] = normal();
      norm2 += members[s][j] * members[s][j] * w[j];
    }
    const double scale = norm2 > 0.0 ? 1.0 / std::sqrt(norm2) : 0.0;
    for (double& v : members[s]) v *= scale;
  }

  GrowthReport rep;
  rep.members = sample_count + 1;
  for (std::size_t iy = 0; iy < n_y; ++iy) {
    const double y = n_y == 1 ? y_max : y_max * static_cast<double>(iy) / static_cast<double>(n_y - 1);
    std::vector<double> e(kBins);
    for (std::size_t j = 0; j < kBins; ++j) {
      const double a = -U + width * static_cast<double>(j);
      const double scale = std::exp(y * std::max(std::abs(a), std::abs(a + width)));
      e[j] = numeric::integrate(
                 [&](double u) { return std::exp(y * u) * spectra::density_eval(model, u); }, a, a + width,
                 1e-13 * scale)
                 .value;
    }
    double worst = 0.0;
    for (const auto& m : members) {
      double h = 0.0;
      for (std::size_t j = 0; j < kBins; ++j) h += m[j] * e[j];
      worst = std::max(worst, std::abs(h));
    }
    // Direction l proportional to e_j / w_j nearly attains the Cauchy-Schwarz bound.
    double extremal = 0.0;
    for (std::size_t j = 0; j < kBins; ++j) {
      if (w[j] > 0.0) extremal += e[j] * e[j] / w[j];
    }
    worst = std::max(worst, std::sqrt(extremal));
    const double bound = spectra::exp_moment(model, 2.0 * y);
    rep.y.push_back(y);
    rep.bound.push_back(bound);
    rep.max_value.push_back(worst);
    rep.max_ratio = std::max(rep.max_ratio, worst / bound);
    if (worst > bound * (1.0 + 1e-8)) {
      throw PropertyViolation("RKHS member exceeds the moment bound at y=" + format_double(y) + ": " +
                              format_double(worst) + " > " + format_double(bound));
    }
  }
  return rep;
}

}  // namespace smalldev::entropy
