#include <catch_amalgamated.hpp>

#include <cmath>

#include "smalldev/errors.hpp"
#include "smalldev/numeric.hpp"
#include "smalldev/smallball.hpp"

using namespace smalldev;
using namespace smalldev::smallball;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("exact L2 one-dimensional oracle", "[smallball][l2]") {
  const auto spec = WeightedChiSquareSpec::periodic(1.0, 0);
  CHECK_THAT(exact_l2(spec, 1.0), WithinAbs(0.6826894921370859, 1e-8));
  for (double r : {0.1, 0.5, 2.0}) {
    CHECK_THAT(exact_l2(spec, r), WithinAbs(std::erf(r / std::sqrt(2.0)), 1e-8));
  }
}

TEST_CASE("exact L2 two dof oracle", "[smallball][l2]") {
  // lambda chi^2_2: P(<= x) = 1 - exp(-x / (2 lambda))
  WeightedChiSquareSpec s{{0.5}, {2}};
  for (double r : {0.2, 1.0, 3.0}) {
    CHECK_THAT(exact_l2(s, r), WithinAbs(-std::expm1(-r * r), 1e-9));
  }
  CHECK_THAT(log_exact_l2(s, 1e-5), WithinRel(std::log(-std::expm1(-1e-10)), 1e-9));
}

TEST_CASE("log exact L2 is stable deep in the tail", "[smallball][l2]") {
  const auto spec = WeightedChiSquareSpec::periodic(1.0, 40);
  double prev = 0.0;
  for (double r : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const double lp = log_exact_l2(spec, r);
    REQUIRE(std::isfinite(lp));
    CHECK(lp < prev);
    prev = lp;
  }
  CHECK_THAT(std::log(exact_l2(spec, 0.5)), WithinRel(log_exact_l2(spec, 0.5), 1e-7));
}

TEST_CASE("weighted chi-square validation", "[smallball][l2]") {
  CHECK_THROWS_AS((WeightedChiSquareSpec{{1.0, -1.0}, {1, 1}}.validate()), PreconditionError);
  CHECK_THROWS_AS((WeightedChiSquareSpec{{1.0}, {1, 1}}.validate()), PreconditionError);
  CHECK_THROWS_AS(exact_l2(WeightedChiSquareSpec::periodic(1.0, 2), -1.0), PreconditionError);
}

TEST_CASE("estimates from counts", "[smallball]") {
  const auto e = from_counts(0.1, Norm::Sup, 0, 100000);
  CHECK(e.p_hat == 0.0);
  CHECK(std::isinf(e.phi_hat));
  CHECK(std::isinf(e.phi_hi));
  CHECK_THAT(e.phi_lo, WithinRel(-std::log(numeric::wilson_interval(0, 100000).high), 1e-14));
  const auto f = from_counts(0.1, Norm::Sup, 250, 1000);
  CHECK_THAT(f.se(), WithinAbs(std::sqrt(0.25 * 0.75 / 1000.0), 1e-15));
  CHECK(f.phi_lo <= f.phi_hat);
  CHECK(f.phi_hat <= f.phi_hi);
}

TEST_CASE("Monte Carlo agrees with the exact L2 law", "[smallball]") {
  GeneratorConfig cfg;
  cfg.model = spectra::SpectralModel::discrete(1.0);
  cfg.K = 8;
  cfg.grid = pathgen::GridSpec::unit(256);
  const std::vector<double> radii{0.5, 1.0, 2.0};
  const auto est = estimate(cfg, Norm::L2, radii, 20000, 99);
  const auto spec = WeightedChiSquareSpec::periodic(1.0, 8);
  for (const auto& e : est) {
    const double p = exact_l2(spec, e.r);
    CHECK(std::abs(e.p_hat - p) <= 4.0 * std::sqrt(p * (1.0 - p) / 20000.0));
  }
}

TEST_CASE("estimates do not depend on the thread count", "[smallball]") {
  GeneratorConfig cfg;
  cfg.model = spectra::SpectralModel::continuous(2.0);
  cfg.grid = pathgen::GridSpec::unit(128);
  const std::vector<double> radii{1.0, 1.5};
  const auto a = estimate(cfg, Norm::Sup, radii, 3000, 5, 1);
  const auto b = estimate(cfg, Norm::Sup, radii, 3000, 5, 3);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].hits == b[i].hits);
  CHECK(a[0].hits <= a[1].hits);
  CHECK_THROWS_AS(estimate(cfg, Norm::Sup, radii, 10, 5), PreconditionError);
}

TEST_CASE("grid refinement nests grids", "[smallball]") {
  GeneratorConfig cfg;
  cfg.model = spectra::SpectralModel::discrete(1.0);
  cfg.grid = pathgen::GridSpec::unit(65);
  const auto lv = refine_grid(cfg, Norm::Sup, 1.0, 2000, 1, 0.01, 3);
  REQUIRE(!lv.empty());
  CHECK(lv.front().n_points == 65);
  if (lv.size() > 1) CHECK(lv[1].n_points == 129);
}

TEST_CASE("norm names", "[smallball]") {
  CHECK(parse_norm("sup") == Norm::Sup);
  CHECK(parse_norm("l2") == Norm::L2);
  CHECK_THROWS_AS(parse_norm("l7"), PreconditionError);
}
