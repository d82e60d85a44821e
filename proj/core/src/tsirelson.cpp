#include "smalldev/tsirelson.hpp"

#include <cmath>
#include <string>

#include "smalldev/errors.hpp"
#include "smalldev/numeric.hpp"

namespace smalldev::tsirelson {

using numeric::kPi;
using numeric::kTwoPi;

std::string_view to_string(Spectrum s) { return s == Spectrum::Discrete ? "discrete" : "continuous"; }

std::string_view to_string(Convention c) { return c == Convention::Paper2Pi ? "paper-2pi" : "period-1"; }

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::PaperExponent: return "paper-exponent";
    case Variant::GaussianFactor: return "gaussian-factor";
    case Variant::RigorousGridCount: return "rigorous-grid-count";
  }
  return "unknown";
}

Spectrum parse_spectrum(std::string_view s) {
  if (s == "discrete") return Spectrum::Discrete;
  if (s == "continuous") return Spectrum::Continuous;
  throw PreconditionError("unknown spectrum '" + std::string(s) + "'");
}

Convention parse_convention(std::string_view s) {
  if (s == "paper-2pi") return Convention::Paper2Pi;
  if (s == "period-1") return Convention::Period1;
  throw PreconditionError("unknown convention '" + std::string(s) + "'");
}

Variant parse_variant(std::string_view s) {
  if (s == "paper-exponent") return Variant::PaperExponent;
  if (s == "gaussian-factor") return Variant::GaussianFactor;
  if (s == "rigorous-grid-count") return Variant::RigorousGridCount;
  throw PreconditionError("unknown variant '" + std::string(s) + "'");
}

void TsirelsonConfig::validate() const {
  if (!(nu > 0.0 && std::isfinite(nu))) throw PreconditionError("nu must be positive");
  if (!(l >= 1.0 && std::isfinite(l))) throw PreconditionError("l must be >= 1");
  if (spectrum == Spectrum::Discrete && l != std::floor(l)) {
    throw PreconditionError("discrete minorant needs an integer l");
  }
}

double TsirelsonConfig::delta() const {
  if (spectrum == Spectrum::Continuous) return kTwoPi / l;
  const double step = 1.0 / (2.0 * l + 1.0);
  return convention == Convention::Paper2Pi ? kTwoPi * step : step;
}

double TsirelsonConfig::log_sigma2() const {
  const double count = spectrum == Spectrum::Discrete ? 2.0 * l + 1.0 : 2.0 * l;
  return std::log(count) - std::pow(l, nu);
}

double TsirelsonConfig::sigma2() const { return std::exp(log_sigma2()); }

long TsirelsonConfig::grid_points() const {
  long n = static_cast<long>(std::floor(1.0 / delta())) + 1;
  // On a period-1 path t = 0 and t = 1 carry the same value.
  if (spectrum == Spectrum::Discrete && convention == Convention::Period1) {
    n = std::min(n, static_cast<long>(2 * l + 1));
  }
  return n;
}

LowerBoundResult bound_at(const TsirelsonConfig& cfg, double r, Variant variant) {
  cfg.validate();
  if (!(r > 0.0)) throw PreconditionError("radius must be positive");
  LowerBoundResult res;
  res.r = r;
  res.l_used = cfg.l;
  res.variant = variant;
  res.config = cfg;
  res.sigma2 = cfg.sigma2();
  const double log_r = std::log(r);
  double exponent = 0.0;
  double neg_log = 0.0;
  if (variant == Variant::PaperExponent) {
    exponent = 1.0 / cfg.delta();
    neg_log = -log_r - std::pow(cfg.l, cfg.nu);
  } else {
    exponent = variant == Variant::GaussianFactor ? 1.0 / cfg.delta() : static_cast<double>(cfg.grid_points());
    neg_log = -(0.5 * std::log(2.0 / kPi) + log_r - 0.5 * cfg.log_sigma2());
  }
  res.valid = neg_log > 1e-12;
  res.phi_lower = res.valid ? exponent * neg_log : 0.0;
  return res;
}

double seed_l(double nu, double r) { return std::pow(std::abs(std::log(r)) / (nu + 1.0), 1.0 / nu); }

LowerBoundResult bound_opt(double nu, Spectrum spectrum, double r, Convention convention, Variant variant) {
  if (!(r > 0.0 && r < 1.0)) throw PreconditionError("bound_opt needs 0 < r < 1");
  if (!(nu > 0.0)) throw PreconditionError("nu must be positive");
  const double l_max = 4.0 * std::ceil(seed_l(nu, r));
  TsirelsonConfig cfg{nu, spectrum, 1.0, convention};
  LowerBoundResult best = bound_at(cfg, r, variant);
  const double step = spectrum == Spectrum::Discrete ? 1.0 : 0.25;
  const auto n_steps = static_cast<long>(std::floor((l_max - 1.0) / step + 1e-9));
  for (long i = 1; i <= n_steps; ++i) {
    cfg.l = 1.0 + step * static_cast<double>(i);
    LowerBoundResult cand = bound_at(cfg, r, variant);
    if (cand.phi_lower > best.phi_lower) best = cand;
  }
  return best;
}

double asymptotic_constant(double nu) {
  if (!(nu > 0.0)) throw PreconditionError("nu must be positive");
  return nu / (kPi * std::pow(nu + 1.0, 1.0 + 1.0 / nu));
}

double minorant_covariance(const TsirelsonConfig& cfg, double t) {
  const double w = std::exp(-std::pow(cfg.l, cfg.nu));
  if (cfg.spectrum == Spectrum::Continuous) {
    if (t == 0.0) return 2.0 * cfg.l * w;
    return 2.0 * w * std::sin(cfg.l * t) / t;
  }
  const double x = cfg.convention == Convention::Paper2Pi ? t : kTwoPi * t;
  const double half = std::sin(0.5 * x);
  if (std::abs(half) < 1e-300) return (2.0 * cfg.l + 1.0) * w;
  return w * std::sin(0.5 * (2.0 * cfg.l + 1.0) * x) / half;
}

CertificateReport uncorrelated_certificate(const TsirelsonConfig& cfg, std::optional<double> delta_override) {
  cfg.validate();
  CertificateReport rep;
  rep.sigma2 = cfg.sigma2();
  rep.delta = delta_override.value_or(cfg.delta());
  long k_max = 0;
  if (cfg.spectrum == Spectrum::Discrete) {
    k_max = static_cast<long>(2 * cfg.l);
  } else {
    k_max = std::max(1L, static_cast<long>(std::floor(1.0 / rep.delta)));
  }
  for (long k = 1; k <= k_max; ++k) {
    const double t = rep.delta * static_cast<double>(k);
    const double c = minorant_covariance(cfg, t);
    rep.lags.push_back(t);
    rep.covariances.push_back(c);
    rep.max_ratio = std::max(rep.max_ratio, std::abs(c) / rep.sigma2);
  }
  rep.passed = rep.max_ratio <= 1e-10;
  if (!rep.passed) {
    throw CertificateFailed("minorant grid values are correlated: max |R(k Delta)|/sigma^2 = " +
                            std::to_string(rep.max_ratio));
  }
  return rep;
}

}  // namespace smalldev::tsirelson
