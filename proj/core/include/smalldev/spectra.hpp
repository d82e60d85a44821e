#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace smalldev::spectra {

/// Families of symmetric spectral measures.
///
/// Atomic families place their atoms at frequencies 2*pi*k, so the
/// associated processes have period 1 in t.
enum class SpectrumKind {
  ContinuousNu,           ///< exp(-|u|^nu) du
  DiscreteNu,             ///< sum_k exp(-|k|^nu) delta_{2 pi k}
  Bandlimited,            ///< weight * 1{|u| <= cutoff} du
  LogPowerAlpha,          ///< exp(-(log_+ |u|)^alpha) du
  TruncatedContinuousNu,  ///< exp(-|u|^nu) 1{|u| <= cutoff} du
  DiscreteBand,           ///< weight * sum_{|k| <= cutoff} delta_{2 pi k}
};

std::string_view to_string(SpectrumKind kind);
SpectrumKind parse_kind(std::string_view name);

struct SpectralModel {
  SpectrumKind kind = SpectrumKind::ContinuousNu;
  double nu = 1.0;
  double alpha = 2.0;
  double cutoff = 1.0;
  double weight = 1.0;

  static SpectralModel continuous(double nu);
  static SpectralModel discrete(double nu);
  static SpectralModel bandlimited(double cutoff = 1.0, double weight = 1.0);
  static SpectralModel log_power(double alpha);
  static SpectralModel truncated(double nu, double cutoff);
  static SpectralModel discrete_band(long l, double weight);

  bool is_discrete() const noexcept {
    return kind == SpectrumKind::DiscreteNu || kind == SpectrumKind::DiscreteBand;
  }

  /// Throws PreconditionError if the parameters violate the family's constraints.
  void validate() const;

  std::string describe() const;
};

struct CovarianceValue {
  double lag = 0.0;
  double value = 0.0;
};

/// Frequency of the k-th atom.
double atom_frequency(long k);

double density_eval(const SpectralModel& model, double u);
double atom_mass(const SpectralModel& model, long k);

/// Largest |k| whose atom is kept when summing; the neglected mass is below tol.
long atom_support(const SpectralModel& model, double tol = 1e-17);

double total_mass(const SpectralModel& model);

/// R(t) = int cos(u t) F(du), by adaptive quadrature for densities and by
/// direct summation for atoms.
CovarianceValue covariance(const SpectralModel& model, double t);

/// Closed forms for nu = 1, nu = 2, band-limited and atomic bands.
/// Throws UnsupportedOperation for other models.
double covariance_closed_form(const SpectralModel& model, double t);

/// M(rate) = (int exp(rate |u|) F(du))^{1/2}.
double exp_moment(const SpectralModel& model, double rate);

/// log M(rate), evaluated without overflow for large rates.
double log_exp_moment(const SpectralModel& model, double rate);

/// Leading asymptotic of log M_nu(rate) for the continuous family, nu > 1:
/// (nu - 1) rate^{nu/(nu-1)} / (2 nu^{nu/(nu-1)}).
double log_moment_asym(double nu, double rate);

/// Smallest U such that the density mass beyond |u| > U is below tol * total mass.
double integration_cutoff(const SpectralModel& model, double tol = 1e-14);

/// F([0, x]) for continuous models (half-line cumulative mass).
double half_mass_below(const SpectralModel& model, double x);

/// Inverse of half_mass_below: smallest x with F([0, x]) >= q * F([0, inf)).
double half_quantile(const SpectralModel& model, double q);

}  // namespace smalldev::spectra
