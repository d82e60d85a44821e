#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace smalldev::tsirelson {

enum class Spectrum { Discrete, Continuous };

/// Paper2Pi: atoms at integers, period 2*pi, grid step 2*pi/(2l+1).
/// Period1: atoms at 2*pi*k, period 1, grid step 1/(2l+1).
enum class Convention { Paper2Pi, Period1 };

/// PaperExponent: (1/Delta) (|log r| - l^nu), the closing form of the grid argument.
/// GaussianFactor: -(1/Delta) log(sqrt(2/pi) r / sigma).
/// RigorousGridCount: -N log(sqrt(2/pi) r / sigma) with N grid points in [0, 1].
enum class Variant { PaperExponent, GaussianFactor, RigorousGridCount };

std::string_view to_string(Spectrum s);
std::string_view to_string(Convention c);
std::string_view to_string(Variant v);
Spectrum parse_spectrum(std::string_view s);
Convention parse_convention(std::string_view s);
Variant parse_variant(std::string_view s);

struct TsirelsonConfig {
  double nu = 1.0;
  Spectrum spectrum = Spectrum::Discrete;
  double l = 1.0;  ///< integer for the discrete spectrum
  Convention convention = Convention::Paper2Pi;

  void validate() const;
  double delta() const;
  double log_sigma2() const;
  double sigma2() const;
  /// Mutually independent grid values Y(k Delta) inside [0, 1].
  long grid_points() const;
};

struct LowerBoundResult {
  double r = 0.0;
  double l_used = 0.0;
  double sigma2 = 0.0;
  double phi_lower = 0.0;
  bool valid = false;
  Variant variant = Variant::PaperExponent;
  TsirelsonConfig config;
};

LowerBoundResult bound_at(const TsirelsonConfig& cfg, double r, Variant variant = Variant::PaperExponent);

/// Best bound over l in [1, 4 ceil((|log r|/(nu+1))^{1/nu})]; integer l for the
/// discrete spectrum, step 0.25 for the continuous one.
LowerBoundResult bound_opt(double nu, Spectrum spectrum, double r,
                           Convention convention = Convention::Paper2Pi,
                           Variant variant = Variant::PaperExponent);

/// nu / (pi (nu+1)^{1+1/nu}).
double asymptotic_constant(double nu);

/// Seed of the l search: (|log r|/(nu+1))^{1/nu}.
double seed_l(double nu, double r);

struct CertificateReport {
  double sigma2 = 0.0;
  double delta = 0.0;
  std::vector<double> lags;
  std::vector<double> covariances;
  double max_ratio = 0.0;  ///< max |R(k Delta)| / sigma^2
  bool passed = false;
};

/// Minorant covariance R(t), closed form.
double minorant_covariance(const TsirelsonConfig& cfg, double t);

/// Checks |R(k Delta)| <= 1e-10 sigma^2 at k = 1..2l (discrete) or 1..max(1, floor(1/Delta))
/// (continuous). Throws CertificateFailed otherwise. delta_override replaces the grid step.
CertificateReport uncorrelated_certificate(const TsirelsonConfig& cfg,
                                           std::optional<double> delta_override = std::nullopt);

}  // namespace smalldev::tsirelson
