#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace smalldev::entropy {

/// G(t) = prod_k sin(a_k t) / (a_k t), a_k = c k^{-1-gamma}, c = 1/zeta(1+gamma).
struct GFunctionSpec {
  double gamma = 0.5;
  double c = 0.0;
  std::size_t depth = 0;  ///< explicit product factors; 0 chooses per evaluation

  static GFunctionSpec make(double gamma, std::size_t depth = 0);
  double a(std::size_t k) const;
  /// Smallest depth D with a_{D+1} |t| <= 0.1.
  std::size_t required_depth(double t) const;
  /// sum_k a_k^2 / 3: Lipschitz constant of G on [0, 1].
  double lipschitz_01() const;
};

struct GValue {
  double value = 1.0;
  double log_abs = 0.0;        ///< log |G(t)|; -inf at a zero
  std::size_t depth = 0;       ///< factors multiplied explicitly
  double remainder_bound = 0.0;///< bound on the error of the analytic tail of log G
};

/// Product over k <= depth plus the tail sum_{k > depth} log sinc(a_k t) expanded through
/// log sinc x = -sum_n zeta(2n) x^{2n} / (n pi^{2n}). Throws CapacityError when a fixed
/// depth is too shallow for t.
GValue g_eval(const GFunctionSpec& spec, double t);

/// prod_k min(1, 1/(a_k t)) >= |G(t)|.
double g_envelope_log(const GFunctionSpec& spec, double t);

struct GCertificate {
  double theta_grid_min = 0.0;  ///< min |G| on the [0, 1] grid
  double lipschitz = 0.0;
  double theta_G = 0.0;         ///< theta_grid_min - lipschitz * h / 2
  bool theta_positive = false;
  double max_abs_real = 0.0;    ///< max |G| on the real test grid
  bool bounded_by_one = false;
  bool bounded_by_exp = false;
  double decay_exponent = 0.0;  ///< regression slope of log(-log|G|) at local maxima
  double C_G_fit = 0.0;         ///< regression scale with the slope fixed at 1/(1+gamma)
  double C_G = 0.0;             ///< largest C with log|G| <= -C t^{1/(1+gamma)} at the sampled maxima
  double C_G_envelope = 0.0;    ///< same constant certified through the product envelope
  double decay_exponent_envelope = 0.0;
  std::vector<double> maxima_t;
  std::vector<double> maxima_log_abs;
};

/// Certifies theta_G on [0, 1] (grid of `grid` points), |G| <= min(1, e^{|t|}) on a test
/// grid, and fits the decay over [t0, t_max] from local maxima of |G|.
GCertificate g_certify(const GFunctionSpec& spec, double t_max = 1e4, std::size_t grid = 2001,
                       double t0 = 10.0);

}  // namespace smalldev::entropy
