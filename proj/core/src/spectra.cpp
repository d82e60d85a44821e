#include "smalldev/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "smalldev/errors.hpp"
#include "smalldev/numeric.hpp"

namespace smalldev::spectra {

using numeric::kPi;
using numeric::kTwoPi;

std::string_view to_string(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::ContinuousNu: return "continuous";
    case SpectrumKind::DiscreteNu: return "discrete";
    case SpectrumKind::Bandlimited: return "bandlimited";
    case SpectrumKind::LogPowerAlpha: return "logpower";
    case SpectrumKind::TruncatedContinuousNu: return "truncated";
    case SpectrumKind::DiscreteBand: return "discrete-band";
  }
  return "unknown";
}

SpectrumKind parse_kind(std::string_view name) {
  for (auto k : {SpectrumKind::ContinuousNu, SpectrumKind::DiscreteNu, SpectrumKind::Bandlimited,
                 SpectrumKind::LogPowerAlpha, SpectrumKind::TruncatedContinuousNu,
                 SpectrumKind::DiscreteBand}) {
    if (to_string(k) == name) return k;
  }
  throw PreconditionError("unknown spectrum kind: " + std::string(name));
}

SpectralModel SpectralModel::continuous(double nu) {
  SpectralModel m{SpectrumKind::ContinuousNu, nu};
  m.validate();
  return m;
}

SpectralModel SpectralModel::discrete(double nu) {
  SpectralModel m{SpectrumKind::DiscreteNu, nu};
  m.validate();
  return m;
}

SpectralModel SpectralModel::bandlimited(double cutoff, double weight) {
  SpectralModel m{SpectrumKind::Bandlimited};
  m.cutoff = cutoff;
  m.weight = weight;
  m.validate();
  return m;
}

SpectralModel SpectralModel::log_power(double alpha) {
  SpectralModel m{SpectrumKind::LogPowerAlpha};
  m.alpha = alpha;
  m.validate();
  return m;
}

SpectralModel SpectralModel::truncated(double nu, double cutoff) {
  SpectralModel m{SpectrumKind::TruncatedContinuousNu, nu};
  m.cutoff = cutoff;
  m.validate();
  return m;
}

SpectralModel SpectralModel::discrete_band(long l, double weight) {
  SpectralModel m{SpectrumKind::DiscreteBand};
  m.cutoff = static_cast<double>(l);
  m.weight = weight;
  m.validate();
  return m;
}

void SpectralModel::validate() const {
  switch (kind) {
    case SpectrumKind::ContinuousNu:
    case SpectrumKind::DiscreteNu:
      if (!(nu > 0.0 && std::isfinite(nu))) throw PreconditionError("nu must be positive");
      break;
    case SpectrumKind::TruncatedContinuousNu:
      if (!(nu > 0.0 && std::isfinite(nu))) throw PreconditionError("nu must be positive");
      if (!(cutoff > 0.0 && std::isfinite(cutoff))) throw PreconditionError("cutoff must be positive");
      break;
    case SpectrumKind::LogPowerAlpha:
      if (!(alpha > 1.0 && std::isfinite(alpha))) throw PreconditionError("alpha must exceed 1");
      break;
    case SpectrumKind::Bandlimited:
      if (!(cutoff > 0.0 && std::isfinite(cutoff))) throw PreconditionError("cutoff must be positive");
      if (!(weight > 0.0 && std::isfinite(weight))) throw PreconditionError("weight must be positive");
      break;
    case SpectrumKind::DiscreteBand:
      if (!(cutoff >= 0.0 && std::floor(cutoff) == cutoff))
        throw PreconditionError("band cutoff must be a nonnegative integer");
      if (!(weight > 0.0 && std::isfinite(weight))) throw PreconditionError("weight must be positive");
      break;
  }
}

std::string SpectralModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(kind);
  switch (kind) {
    case SpectrumKind::ContinuousNu:
    case SpectrumKind::DiscreteNu: os << "(nu=" << nu << ")"; break;
    case SpectrumKind::TruncatedContinuousNu: os << "(nu=" << nu << ",cutoff=" << cutoff << ")"; break;
    case SpectrumKind::LogPowerAlpha: os << "(alpha=" << alpha << ")"; break;
    case SpectrumKind::Bandlimited:
    case SpectrumKind::DiscreteBand: os << "(cutoff=" << cutoff << ",weight=" << weight << ")"; break;
  }
  return os.str();
}

double atom_frequency(long k) { return kTwoPi * static_cast<double>(k); }

namespace {

double log_plus(double u) { return std::max(std::log(std::abs(u)), 0.0); }

void require_continuous(const SpectralModel& m, const char* op) {
  if (m.is_discrete())
    throw UnsupportedOperation(std::string(op) + " is not defined for atomic spectral measures");
}

void require_discrete(const SpectralModel& m, const char* op) {
  if (!m.is_discrete())
    throw UnsupportedOperation(std::string(op) + " is only defined for atomic spectral measures");
}

// sum_{k > K} exp(-k^nu) <= Gamma(1/nu) / nu * Q(1/nu, K^nu).
double discrete_tail_bound(double nu, long K) {
  const double a = 1.0 / nu;
  return std::tgamma(a) / nu * boost::math::gamma_q(a, std::pow(static_cast<double>(K), nu));
}

constexpr long kMaxAtoms = 20'000'000;

}  // namespace

double density_eval(const SpectralModel& model, double u) {
  require_continuous(model, "density_eval");
  const double au = std::abs(u);
  switch (model.kind) {
    case SpectrumKind::ContinuousNu: return std::exp(-std::pow(au, model.nu));
    case SpectrumKind::TruncatedContinuousNu:
      return au <= model.cutoff ? std::exp(-std::pow(au, model.nu)) : 0.0;
    case SpectrumKind::Bandlimited: return au <= model.cutoff ? model.weight : 0.0;
    case SpectrumKind::LogPowerAlpha: return std::exp(-std::pow(log_plus(au), model.alpha));
    default: break;
  }
  return 0.0;
}

double atom_mass(const SpectralModel& model, long k) {
  require_discrete(model, "atom_mass");
  const double ak = std::abs(static_cast<double>(k));
  if (model.kind == SpectrumKind::DiscreteNu) return std::exp(-std::pow(ak, model.nu));
  return ak <= model.cutoff ? model.weight : 0.0;
}

long atom_support(const SpectralModel& model, double tol) {
  require_discrete(model, "atom_support");
  if (model.kind == SpectrumKind::DiscreteBand) return static_cast<long>(model.cutoff);
  // Bisection for the smallest K with 2 * tail(K) <= tol (total mass is >= 1).
  long lo = 0;
  long hi = 1;
  while (2.0 * discrete_tail_bound(model.nu, hi) > tol) {
    if (hi > kMaxAtoms) {
      throw CapacityError("discrete spectrum needs more than 2e7 atoms at this nu", model.nu);
    }
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (2.0 * discrete_tail_bound(model.nu, mid) > tol) lo = mid; else hi = mid;
  }
  return hi;
}

double integration_cutoff(const SpectralModel& model, double tol) {
  require_continuous(model, "integration_cutoff");
  switch (model.kind) {
    case SpectrumKind::ContinuousNu: {
      const double a = 1.0 / model.nu;
      return std::pow(boost::math::gamma_q_inv(a, tol), a);
    }
    case SpectrumKind::TruncatedContinuousNu:
    case SpectrumKind::Bandlimited: return model.cutoff;
    case SpectrumKind::LogPowerAlpha: {
      // Tail beyond e^S is int_S^inf exp(s - s^alpha) ds <= exp(S - S^alpha) / (alpha S^{alpha-1} - 1).
      const double mass = total_mass(model);
      const double alpha = model.alpha;
      auto tail = [alpha](double S) {
        const double slope = alpha * std::pow(S, alpha - 1.0) - 1.0;
        if (slope <= 0.0) return std::numeric_limits<double>::infinity();
        return std::exp(S - std::pow(S, alpha)) / slope;
      };
      double S = 1.0;
      while (tail(S) > tol * mass) S *= 1.25;
      if (S > 700.0) throw CapacityError("log-power density tail too heavy for double range", alpha);
      return std::exp(S);
    }
    default: break;
  }
  return 0.0;
}

double total_mass(const SpectralModel& model) {
  switch (model.kind) {
    case SpectrumKind::ContinuousNu: return 2.0 * std::tgamma(1.0 + 1.0 / model.nu);
    case SpectrumKind::TruncatedContinuousNu: {
      const double a = 1.0 / model.nu;
      return 2.0 / model.nu * boost::math::tgamma_lower(a, std::pow(model.cutoff, model.nu));
    }
    case SpectrumKind::Bandlimited: return 2.0 * model.cutoff * model.weight;
    case SpectrumKind::LogPowerAlpha: {
      // [0,1] contributes 1; above 1 substitute u = e^s.
      const double alpha = model.alpha;
      double S = 2.0;
      while (S - std::pow(S, alpha) > -45.0) S *= 1.25;
      const auto q = numeric::integrate([alpha](double s) { return std::exp(s - std::pow(s, alpha)); },
                                        0.0, S, 1e-12, 8);
      return 2.0 * (1.0 + q.value);
    }
    case SpectrumKind::DiscreteNu: {
      const long K = atom_support(model);
      double sum = 0.0;
      for (long k = K; k >= 1; --k) sum += std::exp(-std::pow(static_cast<double>(k), model.nu));
      return 1.0 + 2.0 * sum;
    }
    case SpectrumKind::DiscreteBand: return model.weight * (2.0 * model.cutoff + 1.0);
  }
  return 0.0;
}

CovarianceValue covariance(const SpectralModel& model, double t) {
  CovarianceValue out{t, 0.0};
  if (model.is_discrete()) {
    const long K = atom_support(model);
    double sum = 0.0;
    for (long k = K; k >= 1; --k) {
      sum += atom_mass(model, k) * std::cos(kTwoPi * static_cast<double>(k) * t);
    }
    out.value = atom_mass(model, 0) + 2.0 * sum;
    return out;
  }
  const double at = std::abs(t);
  double U = integration_cutoff(model);
  if (at > 0.0 && model.kind != SpectrumKind::Bandlimited &&
      model.kind != SpectrumKind::TruncatedContinuousNu) {
    // For a decreasing density, |int_A^inf cos(ut) f(u) du| <= 2 f(A) / |t|.
    double A = 1.0;
    while (2.0 * density_eval(model, A) / at > 1e-13 && A < U) A *= 1.25;
    U = std::min(U, A);
  }
  const double periods = U * at / kTwoPi;
  const auto pieces = static_cast<std::size_t>(std::ceil(periods / 4.0)) + 1;
  if (pieces > 200000) {
    throw NumericFailure("covariance: integrand too oscillatory for quadrature", periods);
  }
  auto f = [&model, t](double u) { return std::cos(u * t) * density_eval(model, u); };
  if (model.kind == SpectrumKind::LogPowerAlpha && U > 1.0) {
    // The density has a kink at |u| = 1.
    out.value = 2.0 * (numeric::integrate(f, 0.0, 1.0, 5e-11).value +
                       numeric::integrate(f, 1.0, U, 5e-11, pieces).value);
  } else {
    out.value = 2.0 * numeric::integrate(f, 0.0, U, 5e-11, pieces).value;
  }
  return out;
}

double covariance_closed_form(const SpectralModel& model, double t) {
  switch (model.kind) {
    case SpectrumKind::ContinuousNu:
      if (model.nu == 1.0) return 2.0 / (1.0 + t * t);
      if (model.nu == 2.0) return std::sqrt(kPi) * std::exp(-t * t / 4.0);
      break;
    case SpectrumKind::Bandlimited:
      if (t == 0.0) return 2.0 * model.weight * model.cutoff;
      return 2.0 * model.weight * std::sin(model.cutoff * t) / t;
    case SpectrumKind::DiscreteBand: {
      const double n = 2.0 * model.cutoff + 1.0;
      const double s = std::sin(kPi * t);
      if (std::abs(s) < 1e-300) return model.weight * n;
      return model.weight * std::sin(n * kPi * t) / s;
    }
    default: break;
  }
  throw UnsupportedOperation("no closed-form covariance for " + model.describe());
}

double log_moment_asym(double nu, double rate) {
  if (!(nu > 1.0)) throw DomainError("log_moment_asym requires nu > 1");
  const double p = nu / (nu - 1.0);
  return (nu - 1.0) * std::pow(rate, p) / (2.0 * std::pow(nu, p));
}

namespace {

// log of sum_k w_k exp(g_k) over atoms, with w_k = 1 for k = 0 and 2 otherwise.
double log_atomic_moment(const SpectralModel& model, double rate) {
  auto g = [&](long k) {
    return rate * atom_frequency(k) + std::log(atom_mass(model, k));
  };
  long kmax;
  if (model.kind == SpectrumKind::DiscreteBand) {
    kmax = static_cast<long>(model.cutoff);
  } else {
    // Terms decrease once k^{nu-1} > 2 pi rate / nu; go 45 nats past the peak.
    long k = 1;
    double peak = g(0);
    for (;; ++k) {
      const double gk = g(k);
      peak = std::max(peak, gk);
      const bool past_peak = gk < g(k - 1);
      if (past_peak && gk < peak - 45.0) break;
      if (k > kMaxAtoms) throw CapacityError("atomic moment sum did not settle", rate);
    }
    kmax = k;
  }
  double peak = g(0);
  for (long k = 1; k <= kmax; ++k) peak = std::max(peak, g(k));
  double sum = std::exp(g(0) - peak);
  for (long k = kmax; k >= 1; --k) sum += 2.0 * std::exp(g(k) - peak);
  return peak + std::log(sum);
}

// log int_{-U}^{U} exp(rate |u|) f(u) du for a continuous model.
double log_density_moment(const SpectralModel& model, double rate, double U) {
  auto g = [&](double u) {
    const double d = density_eval(model, u);
    return d > 0.0 ? rate * u + std::log(d) : -std::numeric_limits<double>::infinity();
  };
  // Locate the peak of g on [0, U] (g is unimodal or monotone for these families).
  double peak_u = 0.0;
  double peak = g(0.0);
  if (model.kind == SpectrumKind::ContinuousNu || model.kind == SpectrumKind::TruncatedContinuousNu) {
    if (model.nu > 1.0 && rate > 0.0) {
      peak_u = std::min(std::pow(rate / model.nu, 1.0 / (model.nu - 1.0)), U);
    } else if (g(U) > peak) {
      peak_u = U;
    }
    peak = g(peak_u);
  } else if (model.kind == SpectrumKind::Bandlimited && rate > 0.0) {
    peak_u = U;
    peak = rate * U + std::log(model.weight);
  }
  if (std::isinf(U)) {
    U = std::max(2.0 * peak_u, 1.0);
    while (g(U) - peak > -50.0) U *= 1.5;
  }
  auto f = [&](double u) { return std::exp(g(u) - peak); };
  double total = 0.0;
  const std::size_t pieces = 4;
  if (peak_u > 0.0 && peak_u < U) {
    total = numeric::integrate(f, 0.0, peak_u, 1e-11, pieces).value +
            numeric::integrate(f, peak_u, U, 1e-11, pieces).value;
  } else {
    total = numeric::integrate(f, 0.0, U, 1e-11, pieces).value;
  }
  return peak + std::log(2.0 * total);
}

}  // namespace

double log_exp_moment(const SpectralModel& model, double rate) {
  if (!(rate >= 0.0)) throw DomainError("moment rate must be nonnegative");
  if (rate == 0.0) return 0.5 * std::log(total_mass(model));
  switch (model.kind) {
    case SpectrumKind::ContinuousNu:
      if (model.nu < 1.0 || (model.nu == 1.0 && rate >= 1.0))
        throw DomainError("exponential moment diverges for this nu and rate");
      if (model.nu == 1.0) return 0.5 * std::log(2.0 / (1.0 - rate));
      return 0.5 * log_density_moment(model, rate, std::numeric_limits<double>::infinity());
    case SpectrumKind::TruncatedContinuousNu:
      return 0.5 * log_density_moment(model, rate, model.cutoff);
    case SpectrumKind::Bandlimited:
      return 0.5 * (std::log(2.0 * model.weight) + std::log(std::expm1(rate * model.cutoff)) -
                    std::log(rate));
    case SpectrumKind::LogPowerAlpha:
      throw DomainError("exponential moment of the log-power density diverges for rate > 0");
    case SpectrumKind::DiscreteNu:
      if (model.nu < 1.0 || (model.nu == 1.0 && kTwoPi * rate >= 1.0))
        throw DomainError("exponential moment diverges for this nu and rate");
      return 0.5 * log_atomic_moment(model, rate);
    case SpectrumKind::DiscreteBand: return 0.5 * log_atomic_moment(model, rate);
  }
  return 0.0;
}

double exp_moment(const SpectralModel& model, double rate) {
  return std::exp(log_exp_moment(model, rate));
}

double half_mass_below(const SpectralModel& model, double x) {
  require_continuous(model, "half_mass_below");
  if (x <= 0.0) return 0.0;
  switch (model.kind) {
    case SpectrumKind::ContinuousNu:
      return boost::math::tgamma_lower(1.0 / model.nu, std::pow(x, model.nu)) / model.nu;
    case SpectrumKind::TruncatedContinuousNu:
      return boost::math::tgamma_lower(1.0 / model.nu, std::pow(std::min(x, model.cutoff), model.nu)) /
             model.nu;
    case SpectrumKind::Bandlimited: return model.weight * std::min(x, model.cutoff);
    case SpectrumKind::LogPowerAlpha: {
      if (x <= 1.0) return x;
      const double alpha = model.alpha;
      return 1.0 + numeric::integrate([alpha](double s) { return std::exp(s - std::pow(s, alpha)); },
                                      0.0, std::log(x), 1e-12, 4)
                       .value;
    }
    default: break;
  }
  return 0.0;
}

double half_quantile(const SpectralModel& model, double q) {
  require_continuous(model, "half_quantile");
  if (!(q >= 0.0 && q < 1.0)) throw DomainError("half_quantile: q must lie in [0, 1)");
  switch (model.kind) {
    case SpectrumKind::ContinuousNu:
      return std::pow(boost::math::gamma_p_inv(1.0 / model.nu, q), 1.0 / model.nu);
    case SpectrumKind::TruncatedContinuousNu: {
      const double a = 1.0 / model.nu;
      const double top = boost::math::gamma_p(a, std::pow(model.cutoff, model.nu));
      return std::pow(boost::math::gamma_p_inv(a, q * top), 1.0 / model.nu);
    }
    case SpectrumKind::Bandlimited: return q * model.cutoff;
    case SpectrumKind::LogPowerAlpha: {
      const double target = q * 0.5 * total_mass(model);
      if (target <= 1.0) return target;
      double lo = 1.0;
      double hi = 2.0;
      while (half_mass_below(model, hi) < target) hi *= 2.0;
      for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (half_mass_below(model, mid) < target) lo = mid; else hi = mid;
      }
      return 0.5 * (lo + hi);
    }
    default: break;
  }
  return 0.0;
}

}  // namespace smalldev::spectra
