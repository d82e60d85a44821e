#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smalldev/spectra.hpp"

namespace smalldev::pathgen {

/// Equally spaced time grid.
struct GridSpec {
  double t_min = 0.0;
  double t_max = 1.0;
  std::size_t n_points = 1024;

  static GridSpec unit(std::size_t n_points = 1024) { return {0.0, 1.0, n_points}; }
  /// Horizon [0, 1/c] of the rescaled process X(t / c) viewed on [0, 1].
  static GridSpec rescaled(double c, std::size_t n_points = 1024);

  double spacing() const { return (t_max - t_min) / static_cast<double>(n_points - 1); }
  double at(std::size_t i) const { return t_min + spacing() * static_cast<double>(i); }
  void validate() const;
};

enum class Method {
  FourierSeries,      ///< exact random trigonometric series (atomic spectra)
  CirculantEmbedding, ///< exact in law on the grid
  SpectralQuadrature, ///< equal-mass strata of the spectral measure
};

std::string_view to_string(Method m);

struct PathSample {
  GridSpec grid;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  Method method = Method::FourierSeries;
  std::size_t truncation_K = 0;    ///< atomic spectra
  std::size_t embedding_size = 0;  ///< circulant length or number of strata
};

/// Truncated random Fourier series for the atomic family exp(-|k|^nu).
struct PeriodicGenConfig {
  double nu = 1.0;
  std::size_t K = 0;
  double tail_tol = 1e-12;

  /// Variance dropped by truncation: 2 sum_{k > K} exp(-k^nu) (upper bound).
  double tail_variance() const;
  /// Smallest K whose dropped variance is <= tol.
  static std::size_t minimal_K(double nu, double tol);
  static PeriodicGenConfig with_tolerance(double nu, double tol = 1e-12);
  /// Throws PreconditionError naming the minimal admissible K when the tail is too heavy.
  void validate() const;
};

inline constexpr std::size_t kDefaultStrata = 4096;

/// Reusable, thread-safe generator for one (spectrum, grid) pair.
///
/// Construction does the expensive setup (trig tables, circulant spectrum,
/// strata); generate() then fills one path for a given (seed, index).
class PathGenerator {
 public:
  static PathGenerator periodic(const PeriodicGenConfig& cfg, const GridSpec& grid);
  /// Arbitrary atomic model (DiscreteNu truncated at atom_support, or DiscreteBand).
  static PathGenerator atomic(const spectra::SpectralModel& model, const GridSpec& grid,
                              double tail_tol = 1e-12);
  static PathGenerator continuous(const spectra::SpectralModel& model, const GridSpec& grid,
                                  std::size_t strata = kDefaultStrata);
  /// Forces the equal-mass spectral quadrature path (no embedding attempt).
  static PathGenerator spectral_quadrature(const spectra::SpectralModel& model, const GridSpec& grid,
                                           std::size_t strata = kDefaultStrata);

  void generate(std::uint64_t seed, std::uint64_t index, std::span<double> out) const;
  PathSample sample(std::uint64_t seed, std::uint64_t index = 0) const;

  const GridSpec& grid() const { return grid_; }
  Method method() const { return method_; }
  std::size_t truncation_K() const { return truncation_K_; }
  std::size_t embedding_size() const { return embedding_size_; }
  /// Smallest circulant eigenvalue relative to R(0); 0 unless an embedding was attempted.
  double embedding_min_ratio() const { return embedding_min_ratio_; }
  /// Theoretical pointwise variance of the generated process.
  double variance() const { return variance_; }
  const std::string& description() const { return description_; }

  // Opaque setup state, defined in the implementation file.
  struct Series;     // trig table for atomic spectra
  struct Circulant;  // FFT plan and sqrt eigenvalues
  struct Strata;     // frequencies and amplitudes

 private:
  PathGenerator() = default;

  GridSpec grid_;
  Method method_ = Method::FourierSeries;
  std::size_t truncation_K_ = 0;
  std::size_t embedding_size_ = 0;
  double embedding_min_ratio_ = 0.0;
  double variance_ = 0.0;
  std::string description_;
  std::shared_ptr<const Series> series_;
  std::shared_ptr<const Circulant> circulant_;
  std::shared_ptr<const Strata> strata_;
};

PathSample gen_periodic(const PeriodicGenConfig& cfg, const GridSpec& grid, std::uint64_t seed,
                        std::uint64_t index = 0);
PathSample gen_continuous(const spectra::SpectralModel& model, const GridSpec& grid,
                          std::uint64_t seed, std::uint64_t index = 0);
/// Minorant with spectral measure exp(-l^nu) sum_{|k| <= l} delta_{2 pi k}.
PathSample gen_minorant_discrete(long l, double nu, const GridSpec& grid, std::uint64_t seed,
                                 std::uint64_t index = 0);
/// Minorant with spectral density exp(-l^nu) 1{|u| <= l}.
PathSample gen_minorant_continuous(double l, double nu, const GridSpec& grid, std::uint64_t seed,
                                   std::uint64_t index = 0);

/// Spectral models of the two minorants.
spectra::SpectralModel minorant_discrete_model(long l, double nu);
spectra::SpectralModel minorant_continuous_model(double l, double nu);

double sup_norm(std::span<const double> values);
/// Trapezoid approximation of (int X^2 dt)^{1/2} over the grid interval.
double l2_norm(std::span<const double> values, const GridSpec& grid);

inline double sup_norm(const PathSample& p) { return sup_norm(p.values); }
inline double l2_norm(const PathSample& p) { return l2_norm(p.values, p.grid); }

}  // namespace smalldev::pathgen
