#include "smalldev/smallball.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "smalldev/errors.hpp"
#include "smalldev/numeric.hpp"
#include "smalldev/parallel.hpp"

namespace smalldev::smallball {

using pathgen::GridSpec;
using pathgen::PathGenerator;
using spectra::SpectralModel;
using spectra::SpectrumKind;

std::string_view to_string(Norm n) { return n == Norm::Sup ? "sup" : "l2"; }

Norm parse_norm(std::string_view name) {
  if (name == "sup" || name == "inf" || name == "uniform") return Norm::Sup;
  if (name == "l2" || name == "L2") return Norm::L2;
  throw PreconditionError("unknown norm '" + std::string(name) + "' (expected sup or l2)");
}

std::string GeneratorConfig::describe() const {
  std::ostringstream os;
  os << model.describe();
  if (K) os << ";K=" << *K;
  if (tail_tol) os << ";tail_tol=" << format_double(*tail_tol);
  os << ";grid=[" << format_double(grid.t_min) << "," << format_double(grid.t_max) << "]x"
     << grid.n_points;
  if (!model.is_discrete()) os << ";strata=" << strata;
  return os.str();
}

PathGenerator make_generator(const GeneratorConfig& cfg) {
  if (cfg.model.kind == SpectrumKind::DiscreteNu) {
    pathgen::PeriodicGenConfig pc;
    pc.nu = cfg.model.nu;
    if (cfg.K) {
      pc.K = *cfg.K;
      pc.tail_tol = cfg.tail_tol.value_or(kInf);
    } else {
      pc = pathgen::PeriodicGenConfig::with_tolerance(cfg.model.nu, cfg.tail_tol.value_or(1e-12));
    }
    return PathGenerator::periodic(pc, cfg.grid);
  }
  if (cfg.model.is_discrete()) return PathGenerator::atomic(cfg.model, cfg.grid);
  return PathGenerator::continuous(cfg.model, cfg.grid, cfg.strata);
}

// ---------------------------------------------------------------------------
// Monte Carlo

double SmallBallEstimate::se() const {
  if (n_samples == 0) return kInf;
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n_samples));
}

double SmallBallEstimate::phi_se() const {
  if (hits == 0) return kInf;
  return std::sqrt((1.0 - p_hat) / (static_cast<double>(n_samples) * p_hat));
}

SmallBallEstimate from_counts(double r, Norm norm, std::size_t hits, std::size_t n) {
  if (n == 0) throw PreconditionError("no samples");
  if (hits > n) throw PreconditionError("more hits than samples");
  SmallBallEstimate e;
  e.r = r;
  e.norm = norm;
  e.n_samples = n;
  e.hits = hits;
  e.p_hat = static_cast<double>(hits) / static_cast<double>(n);
  const auto ci = numeric::wilson_interval(hits, n);
  e.ci_low = std::min(ci.low, e.p_hat);
  e.ci_high = std::max(ci.high, e.p_hat);
  e.phi_hat = hits == 0 ? kInf : -std::log(e.p_hat);
  e.phi_lo = -std::log(e.ci_high);
  e.phi_hi = e.ci_low > 0.0 ? -std::log(e.ci_low) : kInf;
  return e;
}

std::vector<double> sample_norms(const PathGenerator& gen, Norm norm, std::size_t n,
                                 std::uint64_t seed, unsigned threads) {
  std::vector<double> norms(n);
  const GridSpec& grid = gen.grid();
  parallel_chunks(n, 256, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> path(grid.n_points);
    for (std::size_t i = begin; i < end; ++i) {
      gen.generate(seed, i, path);
      norms[i] = norm == Norm::Sup ? pathgen::sup_norm(path) : pathgen::l2_norm(path, grid);
    }
  });
  return norms;
}

std::vector<SmallBallEstimate> estimate(const PathGenerator& gen, Norm norm,
                                        std::span<const double> radii, std::size_t n_samples,
                                        std::uint64_t seed, unsigned threads) {
  if (n_samples < 100) throw PreconditionError("smallball estimation needs at least 100 samples");
  for (double r : radii) {
    if (!(r > 0.0)) throw PreconditionError("radii must be positive");
  }
  std::vector<double> norms = sample_norms(gen, norm, n_samples, seed, threads);
  std::sort(norms.begin(), norms.end());
  std::vector<SmallBallEstimate> out;
  out.reserve(radii.size());
  for (double r : radii) {
    const auto hits = static_cast<std::size_t>(std::upper_bound(norms.begin(), norms.end(), r) - norms.begin());
    SmallBallEstimate e = from_counts(r, norm, hits, n_samples);
    e.seed = seed;
    e.grid_points = gen.grid().n_points;
    e.generator = gen.description();
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<SmallBallEstimate> estimate(const GeneratorConfig& cfg, Norm norm,
                                        std::span<const double> radii, std::size_t n_samples,
                                        std::uint64_t seed, unsigned threads) {
  return estimate(make_generator(cfg), norm, radii, n_samples, seed, threads);
}

std::vector<RefinementLevel> refine_grid(const GeneratorConfig& cfg, Norm norm, double r,
                                         std::size_t n_samples, std::uint64_t seed, double rel_tol,
                                         std::size_t max_levels, unsigned threads) {
  std::vector<RefinementLevel> levels;
  GeneratorConfig c = cfg;
  const double radius[] = {r};
  for (std::size_t level = 0; level < max_levels; ++level) {
    auto est = estimate(c, norm, radius, n_samples, seed, threads).front();
    levels.push_back({c.grid.n_points, est});
    if (levels.size() >= 2) {
      const double prev = levels[levels.size() - 2].estimate.phi_hat;
      const double cur = est.phi_hat;
      if (std::isfinite(prev) && std::isfinite(cur) &&
          std::abs(cur - prev) <= rel_tol * std::max(std::abs(prev), 1e-300)) {
        break;
      }
    }
    c.grid.n_points = 2 * c.grid.n_points - 1;
  }
  return levels;
}

// ---------------------------------------------------------------------------
// Exact L2 distribution

WeightedChiSquareSpec WeightedChiSquareSpec::periodic(double nu, std::size_t K) {
  if (!(nu > 0.0)) throw PreconditionError("nu must be positive");
  WeightedChiSquareSpec s;
  s.weights.push_back(1.0);
  s.dof.push_back(1);
  for (std::size_t k = 1; k <= K; ++k) {
    s.weights.push_back(std::exp(-std::pow(static_cast<double>(k), nu)));
    s.dof.push_back(2);
  }
  return s;
}

void WeightedChiSquareSpec::validate() const {
  if (weights.empty() || weights.size() != dof.size()) throw PreconditionError("malformed chi-square weights");
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!(weights[j] > 0.0) || !std::isfinite(weights[j])) throw PreconditionError("weights must be positive");
    if (dof[j] < 1) throw PreconditionError("degrees of freedom must be positive");
    if (j > 0 && weights[j] > weights[j - 1]) throw PreconditionError("weights must be sorted descending");
  }
}

int WeightedChiSquareSpec::total_dof() const {
  int d = 0;
  for (int m : dof) d += m;
  return d;
}

namespace {

// g(s) = s x - 1/2 sum m_j log(1 + 2 lambda_j s) - log s on s > 0; the Laplace
// inversion contour passes through its minimum c.
struct SaddleProblem {
  const WeightedChiSquareSpec& spec;
  double x;

  double g(double s) const {
    double v = s * x - std::log(s);
    for (std::size_t j = 0; j < spec.weights.size(); ++j) {
      v -= 0.5 * spec.dof[j] * std::log1p(2.0 * spec.weights[j] * s);
    }
    return v;
  }
  double dg(double s) const {
    double v = x - 1.0 / s;
    for (std::size_t j = 0; j < spec.weights.size(); ++j) {
      v -= spec.dof[j] * spec.weights[j] / (1.0 + 2.0 * spec.weights[j] * s);
    }
    return v;
  }
  double d2g(double s) const {
    double v = 1.0 / (s * s);
    for (std::size_t j = 0; j < spec.weights.size(); ++j) {
      const double q = spec.weights[j] / (1.0 + 2.0 * spec.weights[j] * s);
      v += 2.0 * spec.dof[j] * q * q;
    }
    return v;
  }
  double saddle() const {
    // dg is increasing; the root lies in [1/x, (D/2 + 1)/x].
    double lo = std::log(1.0 / x);
    double hi = std::log((0.5 * spec.total_dof() + 1.0) / x);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (dg(std::exp(mid)) < 0.0) lo = mid; else hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
  }
  // G(c + iy) - g(c).
  std::complex<double> shifted(double c, double y) const {
    std::complex<double> v(0.0, y * x);
    v -= std::log(std::complex<double>(1.0, y / c));
    for (std::size_t j = 0; j < spec.weights.size(); ++j) {
      const double b = 2.0 * spec.weights[j] / (1.0 + 2.0 * spec.weights[j] * c);
      v -= 0.5 * spec.dof[j] * std::log(std::complex<double>(1.0, b * y));
    }
    return v;
  }
  // Upper bound on int_Y^inf |exp(G(c+iy) - g(c))| dy.
  double tail_bound(double c, double Y) const {
    const double log_f = shifted(c, Y).real();
    double p = 0.0;
    double q = 0.0;
    if (Y >= c) {
      p += 1.0;
      q += 0.5;
    }
    for (std::size_t j = 0; j < spec.weights.size(); ++j) {
      const double b = 2.0 * spec.weights[j] / (1.0 + 2.0 * spec.weights[j] * c);
      if (b * Y >= 1.0) {
        p += 0.5 * spec.dof[j];
        q += 0.25 * spec.dof[j];
      }
    }
    if (p <= 1.0) return kInf;
    return std::exp(log_f + q * std::log(2.0)) * Y / (p - 1.0);
  }
};

}  // namespace

double log_exact_l2(const WeightedChiSquareSpec& spec, double r) {
  spec.validate();
  if (!(r > 0.0)) throw PreconditionError("radius must be positive");
  const double x = r * r;
  if (spec.weights.size() == 1 && spec.dof[0] == 1) {
    const double z = r / std::sqrt(spec.weights[0]);
    return std::log(std::erf(z / std::sqrt(2.0)));
  }
  const SaddleProblem prob{spec, x};
  const double c = prob.saddle();
  const double scale = 1.0 / std::sqrt(prob.d2g(c));
  // y = scale * sinh(tau) turns the algebraic tail into an exponential one.
  auto integrand = [&](double tau) {
    const double y = scale * std::sinh(tau);
    return std::exp(prob.shifted(c, y)).real() * scale * std::cosh(tau);
  };
  const double j_gauss = std::sqrt(numeric::kPi / 2.0) * scale;
  double T = 4.0;
  while (prob.tail_bound(c, scale * std::sinh(T)) > 1e-13 * j_gauss) {
    T += 1.0;
    if (T > 200.0) throw NumericFailure("chi-square inversion tail does not decay", T);
  }

  double h = 0.25;
  std::size_t n = static_cast<std::size_t>(std::ceil(T / h));
  h = T / static_cast<double>(n);
  double sum = 0.5 * integrand(0.0);
  for (std::size_t i = 1; i <= n; ++i) sum += integrand(h * static_cast<double>(i));
  double J = h * sum;
  bool converged = false;
  for (int level = 0; level < 22; ++level) {
    double mid = 0.0;
    for (std::size_t i = 0; i < n; ++i) mid += integrand(h * (static_cast<double>(i) + 0.5));
    sum += mid;
    h *= 0.5;
    n *= 2;
    const double J_next = h * sum;
    const double diff = std::abs(J_next - J);
    J = J_next;
    if (level >= 1 && diff <= 1e-9 * std::abs(J)) {
      converged = true;
      break;
    }
  }
  if (!converged || !(J > 0.0)) throw NumericFailure("chi-square inversion did not converge", J);
  const double tail = prob.tail_bound(c, scale * std::sinh(T));
  if (tail > 1e-10 * J) throw NumericFailure("chi-square inversion tail too large", tail / J);
  return std::min(0.0, prob.g(c) + std::log(J / numeric::kPi));
}

double exact_l2(const WeightedChiSquareSpec& spec, double r) { return std::exp(log_exact_l2(spec, r)); }

BoundCurve phi_l2_curve(double nu, std::size_t K, std::span<const double> radii, std::vector<double>* ratio) {
  const auto spec = WeightedChiSquareSpec::periodic(nu, K);
  BoundCurve curve;
  curve.abscissa = "r";
  curve.quantity = "phi";
  curve.params = "nu=" + format_double(nu) + ";K=" + std::to_string(K);
  if (ratio != nullptr) ratio->clear();
  for (double r : radii) {
    const double phi = -log_exact_l2(spec, r);
    curve.add(r, phi, phi, "exact-l2");
    if (ratio != nullptr) {
      const double lr = std::log(r);
      ratio->push_back(phi / (lr * lr));
    }
  }
  return curve;
}

}  // namespace smalldev::smallball
