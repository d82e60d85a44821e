#include <catch_amalgamated.hpp>

#include <cmath>

#include "smalldev/errors.hpp"
#include "smalldev/numeric.hpp"
#include "smalldev/spectra.hpp"

using namespace smalldev;
using namespace smalldev::spectra;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("quadrature covariance matches closed forms", "[spectra]") {
  const double sqrt_pi = std::sqrt(numeric::kPi);
  for (double t : {0.0, 0.3, 1.0, 2.5, 7.0}) {
    CHECK_THAT(covariance(SpectralModel::continuous(1.0), t).value, WithinAbs(2.0 / (1.0 + t * t), 1e-8));
    CHECK_THAT(covariance(SpectralModel::continuous(2.0), t).value,
               WithinAbs(sqrt_pi * std::exp(-t * t / 4.0), 1e-8));
    const double sinc = t == 0.0 ? 2.0 : 2.0 * std::sin(t) / t;
    CHECK_THAT(covariance(SpectralModel::bandlimited(), t).value, WithinAbs(sinc, 1e-8));
    CHECK_THAT(covariance_closed_form(SpectralModel::continuous(1.0), t), WithinAbs(2.0 / (1.0 + t * t), 1e-14));
  }
}

TEST_CASE("periodic spectrum has period one", "[spectra]") {
  const auto m = SpectralModel::discrete(1.0);
  for (double t : {0.1, 0.37}) {
    CHECK_THAT(covariance(m, t).value, WithinAbs(covariance(m, t + 1.0).value, 1e-13));
  }
  // R(0) = 1 + 2 sum e^{-k} = 1 + 2/(e - 1)
  CHECK_THAT(total_mass(m), WithinAbs(1.0 + 2.0 / (std::exp(1.0) - 1.0), 1e-13));
}

TEST_CASE("exponential moments", "[spectra]") {
  // int e^{2|u| - u^2} du = e sqrt(pi) (1 + erf 1)
  CHECK_THAT(exp_moment(SpectralModel::continuous(2.0), 2.0), WithinRel(2.97962850591414, 1e-9));
  CHECK_THAT(log_exp_moment(SpectralModel::continuous(2.0), 2.0), WithinRel(std::log(2.97962850591414), 1e-9));
  CHECK_THROWS_AS(exp_moment(SpectralModel::continuous(1.0), 3.0), DomainError);
  CHECK_THROWS_AS(exp_moment(SpectralModel::continuous(0.5), 0.1), DomainError);
  CHECK_THROWS_AS(log_moment_asym(1.0, 2.0), DomainError);
}

TEST_CASE("model validation and kind names", "[spectra]") {
  for (auto k : {SpectrumKind::ContinuousNu, SpectrumKind::DiscreteNu, SpectrumKind::Bandlimited,
                 SpectrumKind::LogPowerAlpha, SpectrumKind::TruncatedContinuousNu, SpectrumKind::DiscreteBand}) {
    CHECK(parse_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_kind("brownian"), PreconditionError);
  CHECK_THROWS_AS(SpectralModel::continuous(-1.0), PreconditionError);
  CHECK_THROWS_AS(SpectralModel::log_power(1.0), PreconditionError);
  CHECK_THROWS_AS(density_eval(SpectralModel::discrete(1.0), 0.5), UnsupportedOperation);
  CHECK_THROWS_AS(atom_mass(SpectralModel::continuous(1.0), 1), UnsupportedOperation);
}

TEST_CASE("half-line quantiles invert the cumulative mass", "[spectra]") {
  const auto m = SpectralModel::continuous(1.0);
  for (double q : {0.1, 0.5, 0.9}) {
    CHECK_THAT(half_mass_below(m, half_quantile(m, q)) / half_mass_below(m, 1e3), WithinAbs(q, 1e-9));
  }
}
