#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smalldev/curves.hpp"
#include "smalldev/spectra.hpp"

namespace smalldev::entropy {

/// Unit ball of the RKHS of the periodic process in real coordinates.
///
/// A member h(t) = c_0 + sum_k (alpha_k cos 2 pi k t + beta_k sin 2 pi k t) lies in the
/// ball iff sum_j x_j^2 / b_j^2 <= 1 with b = (1, sqrt2 e^{-k^nu/2}, sqrt2 e^{-k^nu/2}, ...).
/// In complex form c_{+-k} = (alpha_k -+ i beta_k) / 2 and the constraint reads
/// sum_k |c_k|^2 e^{|k|^nu} <= 1.
struct CoefficientEllipsoid {
  double nu = 1.0;
  std::size_t K = 0;
  std::vector<double> axes;      ///< nonincreasing
  std::vector<double> l2_scale;  ///< L2[0,1] norm of each coordinate's basis function
  double tail_sq = 0.0;          ///< bound on the sum of squared axes beyond `axes`

  static CoefficientEllipsoid periodic(double nu, std::size_t K = 40);
  /// Arbitrary semi-axes; the sup-norm of a member is taken as sum_j |x_j|.
  static CoefficientEllipsoid from_axes(std::vector<double> axes, double tail_sq = 0.0);

  /// sum_k |c_k|^2 e^{|k|^nu}; c indexed k = -K..K.
  double energy(std::span<const std::complex<double>> c) const;
  /// sqrt(sum b_j^2 + tail): every member has sup-norm at most this.
  double radius() const;
};

/// h(t) = sum_k c_k e^{-2 pi i k t} on the grid (real part); c indexed k = -K..K.
/// Throws PreconditionError when the energy exceeds 1 + 1e-12.
std::vector<double> ellipsoid_member_to_function(const CoefficientEllipsoid& e,
                                                 std::span<const std::complex<double>> c,
                                                 std::span<const double> t);

inline constexpr std::size_t kMaxCoveringDimension = 14;

struct EntropyBracket {
  double epsilon = 0.0;
  double H_lower = 0.0;
  double H_upper = 0.0;
  std::string lower_method = "volumetric-l2";
  std::string upper_method = "lattice-cover";
  std::size_t dimension = 0;  ///< coordinates covered explicitly by the upper bound
};

/// log of the number of lattice cells (sup-norm radius epsilon) needed to cover the ball.
/// Throws CapacityError (with the smallest supported epsilon) when more than 14
/// coordinates would be required.
double entropy_upper(const CoefficientEllipsoid& e, double epsilon, std::size_t* dimension = nullptr);

/// Volume ratio of the projected ball to the projected L2 ball of radius epsilon.
double entropy_lower(const CoefficientEllipsoid& e, double epsilon);

EntropyBracket entropy_bracket(const CoefficientEllipsoid& e, double epsilon);

/// H bracket curve over the given epsilons (abscissa "epsilon", quantity "H").
BoundCurve entropy_curve(const CoefficientEllipsoid& e, std::span<const double> epsilons);

// ---------------------------------------------------------------------------
// Kuelbs-Li translators

/// Upper bounds H(2r/lambda) <= phi(r) + lambda^2/2 from the upper (else lower) side of
/// a phi curve.
BoundCurve kl_phi_to_H(const BoundCurve& phi_curve, double lambda = 2.0);

/// alpha_r = Phi^{-1}(exp(-phi)); +inf for phi = 0. Throws DomainError for phi = inf.
double alpha_r(double phi);

/// phi(2r) + log Phi(lambda + alpha_r): lower bound on H(r/lambda).
double kl_H_lower_exact(double phi_2r, double phi_r, double lambda);

/// phi(2r) - (lambda - sqrt(2 phi(r)))^2 / 2.
double kl_H_lower_simplified(double phi_2r, double phi_r, double lambda);

struct KLConsistency {
  double phi_r = 0.0;
  double phi_2r = 0.0;
  double lambda = 0.0;
  double exact = 0.0;
  double simplified = 0.0;
  double correction = 0.0;  ///< exact - simplified = log Phi(lambda + alpha_r)
  bool dominated = false;   ///< exact >= simplified - log 2 - 1e-9
};

/// Compares the two lower bounds at lambda = sqrt(2 phi(r)).
KLConsistency check_simplified(double phi_r, double phi_2r);

/// Lower bounds on H(r/lambda) for each radius from a phi evaluator; radii where phi(r)
/// or phi(2r) is infinite are skipped.
BoundCurve kl_H_to_phi(const std::function<double(double)>& phi, std::span<const double> radii,
                       double lambda);

/// Upper bound on phi(r) from an entropy upper bound: smallest solution of
/// phi = H(r / (2 sqrt(2 phi))) + log 2 by monotone iteration.
double phi_upper_from_entropy(const std::function<double(double)>& H_upper, double r);

// ---------------------------------------------------------------------------
// Truncated-spectrum entropy bound

struct TruncationBoundInput {
  spectra::SpectralModel model = spectra::SpectralModel::continuous(1.0);
  double epsilon = 1e-3;
  std::optional<double> theta;  ///< defaults to 3^{-1/nu}
  double C = 1.0;
};

struct TruncationBoundResult {
  double epsilon = 0.0;
  double v = 0.0;          ///< (3 |log eps|)^{1/nu}
  double theta = 0.0;
  double delta = 0.0;      ///< theta |log eps|^{1 - 1/nu}
  double I = 0.0;          ///< int_{|u| <= v} e^{delta |u| - |u|^nu} du
  bool I_within_2v = false;
  double tail_bound = 0.0; ///< (int_{|u| > v} e^{-|u|^nu} du)^{1/2}
  bool tail_within_eps = false;
  double H_upper = 0.0;    ///< C |log(eps / sqrt I)|^2 / delta
};

TruncationBoundResult truncation_entropy_upper(const TruncationBoundInput& in);

// ---------------------------------------------------------------------------
// Rescaling and RKHS growth

/// n = ceil(1/c) multiplier.
long patch_multiplier(double c);

/// Points (2 eps, n H(eps)) from the upper (else lower) side of an H curve.
BoundCurve scaling_patch(const BoundCurve& H_curve, double c);

struct GrowthReport {
  std::vector<double> y;
  std::vector<double> bound;      ///< M(2|y|)
  std::vector<double> max_value;  ///< max over sampled members of |h(iy)|
  double max_ratio = 0.0;
  std::size_t members = 0;
};

/// Samples unit-norm RKHS members h(z) = int l(u) e^{-izu} F(du) of the continuous
/// family and checks |h(iy)| <= M(2|y|) (1 + 1e-8) on y in [0, y_max].
/// Throws PropertyViolation on failure.
GrowthReport rkhs_growth_check(double nu, std::size_t sample_count, double y_max,
                               std::uint64_t seed, std::size_t n_y = 11);

}  // namespace smalldev::entropy
