#include "smalldev/pathgen.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>
#include <fftw3.h>

#include "smalldev/errors.hpp"
#include "smalldev/numeric.hpp"
#include "smalldev/rng.hpp"

namespace smalldev::pathgen {

using numeric::kTwoPi;
using spectra::SpectralModel;
using spectra::SpectrumKind;

GridSpec GridSpec::rescaled(double c, std::size_t n_points) {
  if (!(c > 0.0 && c <= 1.0)) throw PreconditionError("rescaling constant must lie in (0, 1]");
  return {0.0, 1.0 / c, n_points};
}

void GridSpec::validate() const {
  if (n_points < 2) throw PreconditionError("grid needs at least two points");
  if (!(std::isfinite(t_min) && std::isfinite(t_max))) throw PreconditionError("grid bounds must be finite");
  if (t_min < 0.0) throw PreconditionError("grid must start at t >= 0");
  if (!(t_min < t_max)) throw PreconditionError("grid requires t_min < t_max");
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::FourierSeries: return "fourier-series";
    case Method::CirculantEmbedding: return "circulant-embedding";
    case Method::SpectralQuadrature: return "spectral-quadrature";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// PeriodicGenConfig

namespace {

double discrete_tail(double nu, std::size_t K) {
  // Exact partial sum of the leading terms, then int_{k-1}^inf exp(-u^nu) du
  // bounds whatever remains.
  double sum = 0.0;
  std::size_t k = K + 1;
  for (std::size_t i = 0; i < 1'000'000; ++i, ++k) {
    const double term = std::exp(-std::pow(static_cast<double>(k), nu));
    sum += term;
    if (term < 1e-30 * sum) {
      ++k;
      break;
    }
  }
  const double a = 1.0 / nu;
  const double remainder =
      std::tgamma(a) / nu * boost::math::gamma_q(a, std::pow(static_cast<double>(k - 1), nu));
  return 2.0 * (sum + remainder);
}

}  // namespace

double PeriodicGenConfig::tail_variance() const { return discrete_tail(nu, K); }

std::size_t PeriodicGenConfig::minimal_K(double nu, double tol) {
  if (!(nu > 0.0)) throw PreconditionError("nu must be positive");
  if (discrete_tail(nu, 0) <= tol) return 0;
  std::size_t lo = 0;
  std::size_t hi = 1;
  while (discrete_tail(nu, hi) > tol) {
    lo = hi;
    hi *= 2;
    if (hi > (std::size_t{1} << 26)) throw CapacityError("truncation order too large for this nu", nu);
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (discrete_tail(nu, mid) > tol) lo = mid; else hi = mid;
  }
  return hi;
}

PeriodicGenConfig PeriodicGenConfig::with_tolerance(double nu, double tol) {
  return {nu, minimal_K(nu, tol), tol};
}

void PeriodicGenConfig::validate() const {
  if (!(nu > 0.0 && std::isfinite(nu))) throw PreconditionError("nu must be positive");
  if (!(tail_tol > 0.0)) throw PreconditionError("tail tolerance must be positive");
  if (tail_variance() > tail_tol) {
    std::ostringstream os;
    os << "truncation order K=" << K << " leaves tail variance " << tail_variance()
       << " above tolerance " << tail_tol << "; minimal admissible K=" << minimal_K(nu, tail_tol);
    throw PreconditionError(os.str());
  }
}

// ---------------------------------------------------------------------------
// Generator internals

struct PathGenerator::Series {
  std::vector<double> amplitude;  // index k = 0..K
  std::vector<double> cos_table;  // (K) x n, row k-1
  std::vector<double> sin_table;
  std::size_t n = 0;
};

namespace {

struct FftwPlanDeleter {
  void operator()(fftw_plan_s* p) const {
    if (p != nullptr) fftw_destroy_plan(p);
  }
};

std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

}  // namespace

struct PathGenerator::Circulant {
  std::size_t M = 0;
  std::vector<double> sqrt_eig;  // sqrt(lambda_m / M)
  std::unique_ptr<fftw_plan_s, FftwPlanDeleter> plan;
};

struct PathGenerator::Strata {
  std::vector<double> freq;
  double amplitude = 0.0;
  std::vector<double> cos_table;  // empty when evaluated by recurrence
  std::vector<double> sin_table;
};

namespace {

constexpr std::size_t kMaxTableEntries = std::size_t{1} << 22;

// Largest tolerated |R_strata - R| on grid lags, relative to R(0).
constexpr double kStrataTolerance = 1e-3;

std::string describe_grid(const GridSpec& g) {
  std::ostringstream os;
  os.precision(17);
  os << "grid[" << g.t_min << "," << g.t_max << "]x" << g.n_points;
  return os.str();
}

std::shared_ptr<PathGenerator::Series> build_series(std::vector<double> amplitude, const GridSpec& grid) {
  const std::size_t K = amplitude.size() - 1;
  const std::size_t n = grid.n_points;
  if (K * n > kMaxTableEntries * 4) throw CapacityError("Fourier table too large", static_cast<double>(K));
  auto s = std::make_shared<PathGenerator::Series>();
  s->n = n;
  s->amplitude = std::move(amplitude);
  s->cos_table.resize(K * n);
  s->sin_table.resize(K * n);
  for (std::size_t k = 1; k <= K; ++k) {
    const double w = kTwoPi * static_cast<double>(k);
    for (std::size_t j = 0; j < n; ++j) {
      const double t = grid.at(j);
      s->cos_table[(k - 1) * n + j] = std::cos(w * t);
      s->sin_table[(k - 1) * n + j] = std::sin(w * t);
    }
  }
  return s;
}

}  // namespace

PathGenerator PathGenerator::atomic(const SpectralModel& model, const GridSpec& grid, double tail_tol) {
  if (!model.is_discrete()) throw UnsupportedOperation("atomic generator needs an atomic spectrum");
  model.validate();
  grid.validate();
  const std::size_t K = model.kind == SpectrumKind::DiscreteBand
                            ? static_cast<std::size_t>(model.cutoff)
                            : PeriodicGenConfig::minimal_K(model.nu, tail_tol);
  std::vector<double> amplitude(K + 1);
  amplitude[0] = std::sqrt(spectra::atom_mass(model, 0));
  for (std::size_t k = 1; k <= K; ++k) {
    amplitude[k] = std::sqrt(2.0 * spectra::atom_mass(model, static_cast<long>(k)));
  }
  PathGenerator g;
  g.grid_ = grid;
  g.method_ = Method::FourierSeries;
  g.truncation_K_ = K;
  for (double a : amplitude) g.variance_ += a * a;
  g.description_ = model.describe() + ";K=" + std::to_string(K) + ";" + describe_grid(grid);
  g.series_ = build_series(std::move(amplitude), grid);
  return g;
}

PathGenerator PathGenerator::periodic(const PeriodicGenConfig& cfg, const GridSpec& grid) {
  cfg.validate();
  grid.validate();
  std::vector<double> amplitude(cfg.K + 1);
  amplitude[0] = 1.0;
  for (std::size_t k = 1; k <= cfg.K; ++k) {
    amplitude[k] = std::sqrt(2.0 * std::exp(-std::pow(static_cast<double>(k), cfg.nu)));
  }
  PathGenerator g;
  g.grid_ = grid;
  g.method_ = Method::FourierSeries;
  g.truncation_K_ = cfg.K;
  for (double a : amplitude) g.variance_ += a * a;
  g.description_ = SpectralModel::discrete(cfg.nu).describe() + ";K=" + std::to_string(cfg.K) + ";" +
                   describe_grid(grid);
  g.series_ = build_series(std::move(amplitude), grid);
  return g;
}

namespace {

std::shared_ptr<PathGenerator::Strata> build_strata(const SpectralModel& model, const GridSpec& grid,
                                                    std::size_t J);

}  // namespace

PathGenerator PathGenerator::spectral_quadrature(const SpectralModel& model, const GridSpec& grid,
                                                 std::size_t strata) {
  if (model.is_discrete()) throw UnsupportedOperation("spectral quadrature needs a continuous spectrum");
  model.validate();
  grid.validate();
  PathGenerator g;
  g.grid_ = grid;
  g.method_ = Method::SpectralQuadrature;
  g.embedding_size_ = strata;
  g.variance_ = spectra::total_mass(model);
  g.strata_ = build_strata(model, grid, strata);
  g.description_ = model.describe() + ";strata=" + std::to_string(strata) + ";" + describe_grid(grid);
  return g;
}

PathGenerator PathGenerator::continuous(const SpectralModel& model, const GridSpec& grid,
                                        std::size_t strata) {
  if (model.is_discrete()) throw UnsupportedOperation("gen_continuous needs a continuous spectrum");
  model.validate();
  grid.validate();
  const std::size_t n = grid.n_points;
  const double delta = grid.spacing();
  std::size_t M = 1;
  while (M < 2 * (n - 1)) M *= 2;

  // First row of the circulant: R at lags 0..M/2, mirrored.
  std::vector<double> cov(M / 2 + 1);
  for (std::size_t j = 0; j <= M / 2; ++j) {
    cov[j] = spectra::covariance(model, static_cast<double>(j) * delta).value;
  }
  const double r0 = cov[0];

  FftwBuffer in(M);
  FftwBuffer out(M);
  std::unique_ptr<fftw_plan_s, FftwPlanDeleter> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_1d(static_cast<int>(M), in.data, out.data, FFTW_FORWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED));
  }
  for (std::size_t j = 0; j < M; ++j) {
    in.data[j][0] = cov[std::min(j, M - j)];
    in.data[j][1] = 0.0;
  }
  fftw_execute_dft(plan.get(), in.data, out.data);
  double min_eig = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < M; ++m) min_eig = std::min(min_eig, out.data[m][0]);

  PathGenerator g;
  g.grid_ = grid;
  g.variance_ = r0;
  g.embedding_min_ratio_ = min_eig / r0;
  if (min_eig >= -1e-8 * r0) {
    auto c = std::make_shared<Circulant>();
    c->M = M;
    c->sqrt_eig.resize(M);
    for (std::size_t m = 0; m < M; ++m) {
      c->sqrt_eig[m] = std::sqrt(std::max(out.data[m][0], 0.0) / static_cast<double>(M));
    }
    c->plan = std::move(plan);
    g.method_ = Method::CirculantEmbedding;
    g.embedding_size_ = M;
    g.circulant_ = std::move(c);
    g.description_ = model.describe() + ";circulant=" + std::to_string(M) + ";" + describe_grid(grid);
    return g;
  }

  // Fallback: equal-mass spectral quadrature, checked against the exact covariance on the grid lags.
  auto st = build_strata(model, grid, strata);
  double worst = 0.0;
  const double amp2 = st->amplitude * st->amplitude;
  for (std::size_t j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) * delta;
    double approx = 0.0;
    for (double u : st->freq) approx += amp2 * std::cos(u * t);
    const double exact = j <= M / 2 ? cov[j] : spectra::covariance(model, t).value;
    worst = std::max(worst, std::abs(approx - exact));
  }
  if (worst > kStrataTolerance * r0) {
    throw NumericFailure("circulant embedding has negative eigenvalues and spectral quadrature "
                         "misses the covariance",
                         worst / r0);
  }
  g.method_ = Method::SpectralQuadrature;
  g.embedding_size_ = strata;
  g.strata_ = std::move(st);
  g.description_ = model.describe() + ";strata=" + std::to_string(strata) + ";" + describe_grid(grid);
  return g;
}

namespace {

std::shared_ptr<PathGenerator::Strata> build_strata(const SpectralModel& model, const GridSpec& grid,
                                                    std::size_t J) {
  if (J == 0) throw PreconditionError("need at least one stratum");
  auto st = std::make_shared<PathGenerator::Strata>();
  st->freq.resize(J);
  for (std::size_t j = 0; j < J; ++j) {
    st->freq[j] = spectra::half_quantile(model, (static_cast<double>(j) + 0.5) / static_cast<double>(J));
  }
  // Each stratum carries F([0,inf)) / J on the half line; doubling accounts for the mirror half.
  st->amplitude = std::sqrt(spectra::total_mass(model) / static_cast<double>(J));
  const std::size_t n = grid.n_points;
  if (J * n <= kMaxTableEntries) {
    st->cos_table.resize(J * n);
    st->sin_table.resize(J * n);
    for (std::size_t j = 0; j < J; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        const double a = st->freq[j] * grid.at(i);
        st->cos_table[j * n + i] = std::cos(a);
        st->sin_table[j * n + i] = std::sin(a);
      }
    }
  }
  return st;
}

}  // namespace

void PathGenerator::generate(std::uint64_t seed, std::uint64_t index, std::span<double> out) const {
  const std::size_t n = grid_.n_points;
  if (out.size() != n) throw PreconditionError("output span does not match grid size");
  NormalStream normal(seed, index);

  if (series_) {
    const Series& s = *series_;
    const double c0 = s.amplitude[0] * normal();
    std::fill(out.begin(), out.end(), c0);
    const std::size_t K = s.amplitude.size() - 1;
    for (std::size_t k = 1; k <= K; ++k) {
      const double a = s.amplitude[k] * normal();
      const double b = s.amplitude[k] * normal();
      const double* ct = s.cos_table.data() + (k - 1) * n;
      const double* stb = s.sin_table.data() + (k - 1) * n;
      double* o = out.data();
      for (std::size_t j = 0; j < n; ++j) o[j] += a * ct[j] + b * stb[j];
    }
    return;
  }

  if (circulant_) {
    const Circulant& c = *circulant_;
    FftwBuffer in(c.M);
    FftwBuffer res(c.M);
    for (std::size_t m = 0; m < c.M; ++m) {
      const double re = normal();
      const double im = normal();
      in.data[m][0] = c.sqrt_eig[m] * re;
      in.data[m][1] = c.sqrt_eig[m] * im;
    }
    fftw_execute_dft(c.plan.get(), in.data, res.data);
    for (std::size_t j = 0; j < n; ++j) out[j] = res.data[j][0];
    return;
  }

  const Strata& st = *strata_;
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t J = st.freq.size();
  double* o = out.data();
  if (!st.cos_table.empty()) {
    for (std::size_t j = 0; j < J; ++j) {
      const double a = st.amplitude * normal();
      const double b = st.amplitude * normal();
      const double* ct = st.cos_table.data() + j * n;
      const double* sn = st.sin_table.data() + j * n;
      for (std::size_t i = 0; i < n; ++i) o[i] += a * ct[i] + b * sn[i];
    }
    return;
  }
  const double delta = grid_.spacing();
  for (std::size_t j = 0; j < J; ++j) {
    const double a = st.amplitude * normal();
    const double b = st.amplitude * normal();
    const double u = st.freq[j];
    const std::complex<double> step = std::polar(1.0, u * delta);
    std::complex<double> z = std::polar(1.0, u * grid_.t_min);
    for (std::size_t i = 0; i < n; ++i) {
      o[i] += a * z.real() + b * z.imag();
      z *= step;
      if ((i & 63u) == 63u) z = std::polar(1.0, u * grid_.at(i + 1));
    }
  }
}

PathSample PathGenerator::sample(std::uint64_t seed, std::uint64_t index) const {
  PathSample p;
  p.grid = grid_;
  p.values.resize(grid_.n_points);
  p.seed = seed;
  p.index = index;
  p.method = method_;
  p.truncation_K = truncation_K_;
  p.embedding_size = embedding_size_;
  generate(seed, index, p.values);
  return p;
}

// ---------------------------------------------------------------------------

PathSample gen_periodic(const PeriodicGenConfig& cfg, const GridSpec& grid, std::uint64_t seed,
                        std::uint64_t index) {
  return PathGenerator::periodic(cfg, grid).sample(seed, index);
}

PathSample gen_continuous(const SpectralModel& model, const GridSpec& grid, std::uint64_t seed,
                          std::uint64_t index) {
  return PathGenerator::continuous(model, grid).sample(seed, index);
}

SpectralModel minorant_discrete_model(long l, double nu) {
  if (l < 1) throw PreconditionError("minorant parameter l must be >= 1");
  return SpectralModel::discrete_band(l, std::exp(-std::pow(static_cast<double>(l), nu)));
}

SpectralModel minorant_continuous_model(double l, double nu) {
  if (!(l >= 1.0)) throw PreconditionError("minorant parameter l must be >= 1");
  return SpectralModel::bandlimited(l, std::exp(-std::pow(l, nu)));
}

PathSample gen_minorant_discrete(long l, double nu, const GridSpec& grid, std::uint64_t seed,
                                 std::uint64_t index) {
  return PathGenerator::atomic(minorant_discrete_model(l, nu), grid).sample(seed, index);
}

PathSample gen_minorant_continuous(double l, double nu, const GridSpec& grid, std::uint64_t seed,
                                   std::uint64_t index) {
  return PathGenerator::continuous(minorant_continuous_model(l, nu), grid).sample(seed, index);
}

double sup_norm(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double l2_norm(std::span<const double> values, const GridSpec& grid) {
  const std::size_t n = values.size();
  if (n < 2) return n == 1 ? std::abs(values[0]) : 0.0;
  double sum = 0.5 * (values[0] * values[0] + values[n - 1] * values[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) sum += values[i] * values[i];
  return std::sqrt(sum * grid.spacing());
}

}  // namespace smalldev::pathgen
