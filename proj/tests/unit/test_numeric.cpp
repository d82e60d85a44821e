#include <catch_amalgamated.hpp>

#include <cmath>

#include "smalldev/errors.hpp"
#include "smalldev/numeric.hpp"
#include "smalldev/parallel.hpp"
#include "smalldev/rng.hpp"

using namespace smalldev;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("normal distribution helpers", "[numeric]") {
  CHECK_THAT(numeric::normal_cdf(1.0), WithinAbs(0.8413447460685429, 1e-15));
  CHECK_THAT(numeric::normal_quantile(0.975), WithinAbs(1.959963984540054, 1e-12));
  CHECK_THAT(numeric::normal_quantile(std::exp(-5.0)), WithinAbs(-2.4709386372615887, 1e-12));
  // far tail where exp(log_p) underflows
  for (double lp : {-10.0, -200.0, -1000.0}) {
    const double x = numeric::normal_quantile_from_log(lp);
    CHECK_THAT(numeric::normal_log_cdf(x), WithinRel(lp, 1e-10));
  }
}

TEST_CASE("zeta and its tail", "[numeric]") {
  CHECK_THAT(numeric::zeta(2.0), WithinAbs(numeric::kPi * numeric::kPi / 6.0, 1e-13));
  CHECK_THAT(numeric::zeta(1.5), WithinAbs(2.612375348685488, 1e-12));
  CHECK_THAT(numeric::zeta(3.0), WithinAbs(1.2020569031595942, 1e-13));
  CHECK_THAT(numeric::zeta_tail(2.0, 10), WithinAbs(0.09516633568168575, 1e-13));
}

TEST_CASE("adaptive quadrature", "[numeric]") {
  const auto r = numeric::integrate([](double x) { return std::sin(x); }, 0.0, numeric::kPi, 1e-12);
  CHECK_THAT(r.value, WithinAbs(2.0, 1e-12));
  const auto g = numeric::integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0, 1e-12);
  CHECK_THAT(g.value, WithinAbs(std::sqrt(numeric::kPi), 1e-12));
}

TEST_CASE("Wilson interval", "[numeric]") {
  const auto w = numeric::wilson_interval(0, 100000);
  CHECK(w.low == 0.0);
  const double z2 = numeric::kZ95 * numeric::kZ95;
  CHECK_THAT(w.high, WithinRel(z2 / (1e5 + z2), 1e-12));
  const auto h = numeric::wilson_interval(500, 1000);
  CHECK_THAT(h.low + h.high, WithinAbs(1.0, 1e-14));
}

TEST_CASE("normal streams are keyed by seed and index", "[rng]") {
  NormalStream a(7, 3);
  NormalStream b(7, 3);
  NormalStream c(7, 4);
  const double xa = a();
  CHECK(xa == b());
  CHECK(xa != c());
}

TEST_CASE("parallel_chunks visits every index once and forwards errors", "[parallel]") {
  std::vector<int> seen(1000, 0);
  parallel_chunks(seen.size(), 64, 4, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) ++seen[i];
  });
  for (int s : seen) REQUIRE(s == 1);
  CHECK_THROWS_AS(parallel_chunks(10, 1, 3, [](std::size_t lo, std::size_t) {
                    if (lo == 5) throw PreconditionError("boom");
                  }),
                  PreconditionError);
}
