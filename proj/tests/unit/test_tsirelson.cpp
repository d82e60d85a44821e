#include <catch_amalgamated.hpp>

#include <cmath>

#include "smalldev/errors.hpp"
#include "smalldev/numeric.hpp"
#include "smalldev/tsirelson.hpp"

using namespace smalldev;
using namespace smalldev::tsirelson;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("asymptotic constants", "[tsirelson]") {
  CHECK_THAT(asymptotic_constant(1.0), WithinRel(1.0 / (4.0 * numeric::kPi), 1e-14));
  CHECK_THAT(asymptotic_constant(2.0), WithinRel(2.0 / (numeric::kPi * std::pow(3.0, 1.5)), 1e-14));
}

TEST_CASE("optimised bound approaches the constant", "[tsirelson]") {
  const double r = 1e-100;
  const double L2 = std::log(r) * std::log(r);
  const auto b = bound_opt(1.0, Spectrum::Discrete, r);
  CHECK(b.valid);
  CHECK_THAT(b.phi_lower / L2, WithinRel(asymptotic_constant(1.0), 0.05));
}

TEST_CASE("variant ordering at fixed l", "[tsirelson]") {
  const TsirelsonConfig cfg{1.0, Spectrum::Discrete, 4.0, Convention::Period1};
  const double r = 1e-3;
  const auto g = bound_at(cfg, r, Variant::GaussianFactor);
  const auto n = bound_at(cfg, r, Variant::RigorousGridCount);
  // N = 2l + 1 grid points versus 1/Delta = 2l + 1 in the period-one convention
  CHECK_THAT(n.phi_lower, WithinRel(g.phi_lower, 1e-12));
  CHECK(bound_at(cfg, 10.0, Variant::GaussianFactor).valid == false);
}

TEST_CASE("Dirichlet certificate", "[tsirelson]") {
  for (int l = 1; l <= 10; ++l) {
    for (auto conv : {Convention::Paper2Pi, Convention::Period1}) {
      const auto rep = uncorrelated_certificate({1.0, Spectrum::Discrete, double(l), conv});
      CHECK(rep.passed);
      CHECK(rep.lags.size() == static_cast<std::size_t>(2 * l));
    }
  }
  for (double l : {1.0, 2.0, 5.0}) {
    CHECK(uncorrelated_certificate({1.0, Spectrum::Continuous, l, Convention::Paper2Pi}).passed);
  }
  CHECK_THROWS_AS(uncorrelated_certificate({1.0, Spectrum::Discrete, 3.0, Convention::Period1}, 0.1),
                  CertificateFailed);
}

TEST_CASE("minorant covariance at zero is the variance", "[tsirelson]") {
  const TsirelsonConfig d{2.0, Spectrum::Discrete, 3.0, Convention::Paper2Pi};
  CHECK_THAT(minorant_covariance(d, 0.0), WithinRel(d.sigma2(), 1e-12));
  const TsirelsonConfig c{2.0, Spectrum::Continuous, 1.5, Convention::Paper2Pi};
  CHECK_THAT(minorant_covariance(c, 0.0), WithinRel(c.sigma2(), 1e-12));
}

TEST_CASE("configuration checks and names", "[tsirelson]") {
  CHECK_THROWS_AS((TsirelsonConfig{1.0, Spectrum::Discrete, 2.5, Convention::Paper2Pi}.validate()),
                  PreconditionError);
  CHECK_THROWS_AS((TsirelsonConfig{0.0, Spectrum::Continuous, 2.0, Convention::Paper2Pi}.validate()),
                  PreconditionError);
  for (auto v : {Variant::PaperExponent, Variant::GaussianFactor, Variant::RigorousGridCount}) {
    CHECK(parse_variant(to_string(v)) == v);
  }
  CHECK(parse_convention("period-1") == Convention::Period1);
  CHECK(parse_spectrum("continuous") == Spectrum::Continuous);
  CHECK_THROWS_AS(parse_spectrum("mixed"), PreconditionError);
}
