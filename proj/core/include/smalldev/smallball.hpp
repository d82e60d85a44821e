#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smalldev/curves.hpp"
#include "smalldev/pathgen.hpp"
#include "smalldev/spectra.hpp"

namespace smalldev::smallball {

enum class Norm { Sup, L2 };

std::string_view to_string(Norm n);
Norm parse_norm(std::string_view name);

/// Everything needed to rebuild a path generator.
struct GeneratorConfig {
  spectra::SpectralModel model = spectra::SpectralModel::discrete(1.0);
  /// DiscreteNu truncation order; unset picks the smallest K meeting tail_tol (default 1e-12).
  std::optional<std::size_t> K;
  /// With an explicit K the tail is only checked when a tolerance is given.
  std::optional<double> tail_tol;
  pathgen::GridSpec grid;
  std::size_t strata = pathgen::kDefaultStrata;

  std::string describe() const;
};

pathgen::PathGenerator make_generator(const GeneratorConfig& cfg);

struct SmallBallEstimate {
  double r = 0.0;
  Norm norm = Norm::Sup;
  std::size_t n_samples = 0;
  std::size_t hits = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  double phi_hat = kInf;  ///< -log p_hat; +inf when hits = 0
  double phi_lo = 0.0;    ///< -log ci_high
  double phi_hi = kInf;   ///< -log ci_low
  std::uint64_t seed = 0;
  std::size_t grid_points = 0;
  std::string generator;

  /// Binomial standard error sqrt(p(1-p)/n).
  double se() const;
  /// Delta-method standard error of phi_hat; +inf when hits = 0.
  double phi_se() const;
};

/// Builds an estimate from raw counts (Wilson 95% interval).
SmallBallEstimate from_counts(double r, Norm norm, std::size_t hits, std::size_t n);

/// Norms of paths 0..n-1 of the generator, in index order.
std::vector<double> sample_norms(const pathgen::PathGenerator& gen, Norm norm, std::size_t n,
                                 std::uint64_t seed, unsigned threads = 0);

/// Small-ball estimates for every radius from one batch of paths (common random numbers).
std::vector<SmallBallEstimate> estimate(const pathgen::PathGenerator& gen, Norm norm,
                                        std::span<const double> radii, std::size_t n_samples,
                                        std::uint64_t seed, unsigned threads = 0);

std::vector<SmallBallEstimate> estimate(const GeneratorConfig& cfg, Norm norm,
                                        std::span<const double> radii, std::size_t n_samples,
                                        std::uint64_t seed, unsigned threads = 0);

struct RefinementLevel {
  std::size_t n_points = 0;
  SmallBallEstimate estimate;
};

/// Doubles the grid (n -> 2n - 1, nested) until phi_hat moves by less than rel_tol
/// or max_levels grids were tried.
std::vector<RefinementLevel> refine_grid(const GeneratorConfig& cfg, Norm norm, double r,
                                         std::size_t n_samples, std::uint64_t seed,
                                         double rel_tol = 0.01, std::size_t max_levels = 5,
                                         unsigned threads = 0);

/// Weights of sum_j lambda_j * chi^2_{m_j}.
struct WeightedChiSquareSpec {
  std::vector<double> weights;
  std::vector<int> dof;

  /// lambda_0 = 1 (one dof), lambda_k = exp(-k^nu) (two dof), k = 1..K.
  static WeightedChiSquareSpec periodic(double nu, std::size_t K);
  void validate() const;
  int total_dof() const;
};

/// P(sum_j lambda_j chi^2_{m_j} <= r^2), absolute error <= 1e-8.
double exact_l2(const WeightedChiSquareSpec& spec, double r);

/// log of exact_l2; stays accurate when the probability underflows.
double log_exact_l2(const WeightedChiSquareSpec& spec, double r);

/// Points (r, phi = -log P) with phi in both lower and upper; method "exact-l2".
/// The ratio phi / |log r|^2 is returned in ratio (same order as radii).
BoundCurve phi_l2_curve(double nu, std::size_t K, std::span<const double> radii,
                        std::vector<double>* ratio = nullptr);

}  // namespace smalldev::smallball
