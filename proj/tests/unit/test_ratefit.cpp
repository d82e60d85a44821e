#include <catch_amalgamated.hpp>

#include <cmath>

#include "smalldev/ratefit.hpp"

using namespace smalldev;
using namespace smalldev::ratefit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<RatePoint> synthetic(double A, double gamma, double beta) {
  std::vector<RatePoint> pts;
  for (int e = 20; e <= 80; e += 5) {
    const double r = std::pow(10.0, -e);
    const double L = -std::log(r);
    pts.push_back({r, A * std::pow(L, gamma) * std::pow(std::log(L), beta)});
  }
  return pts;
}

}  // namespace

TEST_CASE("free fit recovers exact parameters", "[ratefit]") {
  const auto f = fit(synthetic(0.3, 1.5, 0.5));
  REQUIRE_FALSE(f.refused);
  CHECK(f.mode == "free");
  CHECK_THAT(f.gamma, WithinAbs(1.5, 1e-8));
  CHECK_THAT(f.beta, WithinAbs(0.5, 1e-8));
  CHECK_THAT(f.A, WithinRel(0.3, 1e-8));
  CHECK_THAT(evaluate(f, 1e-50), WithinRel(synthetic(0.3, 1.5, 0.5)[6].phi, 1e-8));
}

TEST_CASE("fixed beta fit", "[ratefit]") {
  const auto f = fit(synthetic(2.0, 2.0, 1.0), 1.0);
  REQUIRE_FALSE(f.refused);
  CHECK(f.mode == "fixed");
  CHECK(f.beta == 1.0);
  CHECK_THAT(f.gamma, WithinAbs(2.0, 1e-9));
}

TEST_CASE("refusals", "[ratefit]") {
  CHECK(fit(std::vector<RatePoint>{{0.5, 1.0}, {0.01, 2.0}, {1e-4, 3.0}, {1e-6, 4.0}}).refused);
  auto pts = synthetic(1.0, 2.0, 0.0);
  pts[3].phi = 0.0;
  CHECK(fit(pts).refused);
  const std::vector<RatePoint> narrow{{1e-20, 1.0}, {2e-20, 1.1}, {5e-20, 1.2}, {9e-20, 1.3}};
  const auto n = fit(narrow);
  CHECK(n.refused);
  CHECK_FALSE(n.reason.empty());
  const std::vector<RatePoint> two{{1e-20, 1.0}, {1e-40, 2.0}};
  CHECK(fit(two).refused);
}

TEST_CASE("log-power reference curves", "[ratefit]") {
  const double r = 1e-10;
  const double L = -std::log(r);
  const auto p = open_problem_point(2.0, r);
  CHECK_THAT(p.lower, WithinRel(std::sqrt(L) * std::exp(std::sqrt(2.0 * L)), 1e-13));
  CHECK_THAT(p.upper, WithinRel(L * std::exp(std::sqrt(2.0 * L) + 2.5), 1e-13));
  CHECK(p.lower < p.upper);
  const std::vector<double> rs{1e-3, 1e-6};
  const auto c = open_problem_curves(2.0, rs);
  CHECK(c.points.size() == 2);
  CHECK(c.points[0].method == "open-problem-reference");
}
