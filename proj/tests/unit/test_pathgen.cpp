#include <catch_amalgamated.hpp>

#include <cmath>

#include "smalldev/errors.hpp"
#include "smalldev/pathgen.hpp"
#include "smalldev/spectra.hpp"

using namespace smalldev;
using namespace smalldev::pathgen;
using Catch::Matchers::WithinAbs;

TEST_CASE("paths are reproducible from seed and index", "[pathgen]") {
  const auto gen = PathGenerator::periodic(PeriodicGenConfig::with_tolerance(1.0), GridSpec::unit(64));
  const auto a = gen.sample(11, 5);
  const auto b = gen.sample(11, 5);
  const auto c = gen.sample(11, 6);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  // period one
  CHECK_THAT(a.values.front(), WithinAbs(a.values.back(), 1e-12));
}

TEST_CASE("truncation order control", "[pathgen]") {
  const std::size_t K = PeriodicGenConfig::minimal_K(1.0, 1e-12);
  CHECK(PeriodicGenConfig{1.0, K, 1e-12}.tail_variance() <= 1e-12);
  CHECK(PeriodicGenConfig{1.0, K - 1, 1e-12}.tail_variance() > 1e-12);
  CHECK_THROWS_AS((PeriodicGenConfig{1.0, 3, 1e-12}.validate()), PreconditionError);
}

TEST_CASE("grid validation", "[pathgen]") {
  CHECK_THROWS_AS((GridSpec{0.0, 1.0, 1}.validate()), PreconditionError);
  CHECK_THROWS_AS((GridSpec{-1.0, 1.0, 8}.validate()), PreconditionError);
  CHECK_THROWS_AS(GridSpec::rescaled(2.0), PreconditionError);
  CHECK(GridSpec::rescaled(0.5).t_max == 2.0);
}

TEST_CASE("sample variance matches R(0)", "[pathgen]") {
  for (const auto& m : {spectra::SpectralModel::continuous(1.0), spectra::SpectralModel::continuous(2.0)}) {
    const auto gen = PathGenerator::continuous(m, GridSpec::unit(33));
    const std::size_t n = 4000;
    double s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = gen.sample(3, i);
      s2 += p.values[16] * p.values[16];
    }
    const double var = s2 / n;
    const double r0 = spectra::total_mass(m);
    // standard error of the second moment is sqrt(2/n) R(0)
    CHECK(std::abs(var - r0) <= 4.0 * std::sqrt(2.0 / n) * r0);
    CHECK_THAT(gen.variance(), WithinAbs(r0, 1e-6 * r0));
  }
}

TEST_CASE("norms", "[pathgen]") {
  const std::vector<double> v{1.0, -3.0, 2.0};
  CHECK(sup_norm(v) == 3.0);
  const std::vector<double> ones(5, 2.0);
  CHECK_THAT(l2_norm(ones, GridSpec::unit(5)), WithinAbs(2.0, 1e-15));
}

TEST_CASE("minorant models", "[pathgen]") {
  const auto d = minorant_discrete_model(3, 1.0);
  CHECK(d.is_discrete());
  CHECK_THAT(spectra::total_mass(d), WithinAbs(7.0 * std::exp(-3.0), 1e-14));
  const auto s = gen_minorant_discrete(3, 1.0, GridSpec::unit(16), 1);
  CHECK(s.values.size() == 16);
}
