#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "smalldev/errors.hpp"
#include "smalldev/numeric.hpp"
#include "smalldev/entropy.hpp"

using namespace smalldev;
using namespace smalldev::entropy;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("periodic ellipsoid axes", "[entropy]") {
  const auto e = CoefficientEllipsoid::periodic(1.0, 5);
  REQUIRE(e.axes.size() == 11);
  CHECK(e.axes[0] == 1.0);
  CHECK_THAT(e.axes[1], WithinRel(std::sqrt(2.0) * std::exp(-0.5), 1e-14));
  CHECK_THAT(e.axes[2], WithinRel(e.axes[1], 1e-14));
  CHECK(e.tail_sq > 0.0);
}

TEST_CASE("ellipsoid members map to functions", "[entropy]") {
  const auto e = CoefficientEllipsoid::periodic(1.0, 2);
  std::vector<std::complex<double>> c(5, 0.0);
  c[2] = 0.5;  // k = 0
  const std::vector<double> t{0.0, 0.25};
  const auto h = ellipsoid_member_to_function(e, c, t);
  CHECK_THAT(h[0], WithinAbs(0.5, 1e-15));
  c[3] = 2.0;  // k = 1 with energy 4e > 1
  CHECK_THROWS_AS(ellipsoid_member_to_function(e, c, t), PreconditionError);
}

TEST_CASE("entropy bracket is ordered and monotone", "[entropy]") {
  const auto e = CoefficientEllipsoid::periodic(1.0, 40);
  double prev_lo = -1.0;
  for (double eps : {0.5, 0.2, 0.1}) {
    const auto b = entropy_bracket(e, eps);
    CHECK(b.H_lower <= b.H_upper);
    CHECK(b.H_lower >= prev_lo);
    CHECK(b.dimension <= kMaxCoveringDimension);
    prev_lo = b.H_lower;
  }
}

TEST_CASE("covering capacity error names the smallest epsilon", "[entropy]") {
  const auto e = CoefficientEllipsoid::periodic(1.0, 40);
  try {
    entropy_upper(e, 1e-3);
    FAIL("expected a capacity error");
  } catch (const CapacityError& err) {
    const double m = err.min_supported();
    CHECK(m > 1e-3);
    CHECK_NOTHROW(entropy_upper(e, m * 1.001));
  }
}

TEST_CASE("alpha_r round trip", "[entropy][kl]") {
  CHECK_THAT(alpha_r(5.0), WithinAbs(-2.4709386372615887, 1e-10));
  for (double phi : {1e-3, 0.5, 8.0, 40.0, 700.0, 5000.0}) {
    CHECK_THAT(-numeric::normal_log_cdf(alpha_r(phi)), WithinRel(phi, 1e-9));
  }
  CHECK(std::isinf(alpha_r(0.0)));
  CHECK_THROWS_AS(alpha_r(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("simplified Kuelbs-Li form against the exact one", "[entropy][kl]") {
  for (double phi : {8.0, 12.0, 30.0, 100.0}) {
    const auto k = check_simplified(phi, 2.0 * phi);
    CHECK(k.dominated);
    CHECK(k.correction < 0.0);
    CHECK(k.correction > -std::log(2.0));
    CHECK_THAT(k.exact - k.simplified, WithinAbs(k.correction, 1e-9));
  }
}

TEST_CASE("phi to H translation", "[entropy][kl]") {
  BoundCurve phi;
  phi.add(0.1, 5.0, 6.0, "mc");
  phi.add(0.2, 2.0, kNaN, "mc");
  const auto h = kl_phi_to_H(phi, 2.0);
  REQUIRE(h.points.size() == 2);
  CHECK(h.points[0].x == 0.1);
  CHECK(h.points[0].upper == 8.0);
  CHECK(h.points[1].upper == 4.0);
}

TEST_CASE("entropy to phi fixed point", "[entropy][kl]") {
  const auto H = [](double eps) { return std::log(1.0 / eps) * std::log(1.0 / eps); };
  const double r = 1e-3;
  const double p = phi_upper_from_entropy(H, r);
  CHECK_THAT(p, WithinRel(H(r / (2.0 * std::sqrt(2.0 * p))) + std::log(2.0), 1e-10));
}

TEST_CASE("truncation bound keeps I below 2v", "[entropy]") {
  for (double nu : {0.5, 1.0}) {
    for (double eps : {1e-12, 1e-6, 1e-3}) {
      TruncationBoundInput in;
      in.model = spectra::SpectralModel::continuous(nu);
      in.epsilon = eps;
      const auto r = truncation_entropy_upper(in);
      CHECK(r.I_within_2v);
      CHECK(r.tail_within_eps);
      CHECK(r.H_upper > 0.0);
    }
  }
}

TEST_CASE("scaling patch multiplies by ceil(1/c)", "[entropy]") {
  CHECK(patch_multiplier(0.5) == 2);
  CHECK(patch_multiplier(0.3) == 4);
  CHECK(patch_multiplier(1.0) == 1);
  const auto e = CoefficientEllipsoid::periodic(1.0, 40);
  const std::vector<double> eps{0.5, 0.2};
  const auto h = entropy_curve(e, eps);
  const auto p = scaling_patch(h, 0.5);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    CHECK(p.points[i].x == 2.0 * eps[i]);
    CHECK(p.points[i].upper == 2.0 * h.points[i].upper);
  }
}

TEST_CASE("RKHS members grow no faster than the moment bound", "[entropy]") {
  const auto rep = rkhs_growth_check(2.0, 64, 3.0, 17, 7);
  CHECK(rep.members >= 64);
  CHECK(rep.max_ratio <= 1.0 + 1e-8);
}
