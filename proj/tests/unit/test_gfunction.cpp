#include <catch_amalgamated.hpp>

#include <cmath>

#include "smalldev/errors.hpp"
#include "smalldev/gfunction.hpp"
#include "smalldev/numeric.hpp"

using namespace smalldev;
using namespace smalldev::entropy;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("normalisation constant", "[gfunction]") {
  const auto s = GFunctionSpec::make(0.5);
  CHECK_THAT(s.c, WithinAbs(0.3827933839994266, 1e-10));
  CHECK_THROWS_AS(GFunctionSpec::make(1.0), PreconditionError);
}

TEST_CASE("values at small t", "[gfunction]") {
  const auto s = GFunctionSpec::make(0.5);
  CHECK(g_eval(s, 0.0).value == 1.0);
  // log G(t) ~ -(t^2/6) sum a_k^2 for small t
  const double t = 1e-3;
  const double expect = -t * t / 6.0 * s.c * s.c * numeric::zeta(3.0);
  CHECK_THAT(g_eval(s, t).log_abs, WithinRel(expect, 1e-5));
  CHECK(g_eval(s, 3.0).value == g_eval(s, -3.0).value);
}

TEST_CASE("truncated product agrees with a deeper one", "[gfunction]") {
  const auto auto_depth = GFunctionSpec::make(0.5);
  auto deep = GFunctionSpec::make(0.5, 20000);
  for (double t : {0.5, 5.0, 40.0}) {
    CHECK_THAT(g_eval(auto_depth, t).value, WithinAbs(g_eval(deep, t).value, 1e-10));
  }
  auto shallow = GFunctionSpec::make(0.5, 2);
  CHECK_THROWS_AS(g_eval(shallow, 100.0), CapacityError);
}

TEST_CASE("envelope dominates the product", "[gfunction]") {
  const auto s = GFunctionSpec::make(0.5);
  for (double t : {10.0, 100.0, 1000.0}) {
    CHECK(g_eval(s, t).log_abs <= g_envelope_log(s, t) + 1e-12);
  }
}

TEST_CASE("certificate", "[gfunction]") {
  const auto cert = g_certify(GFunctionSpec::make(0.5), 1e3, 501, 10.0);
  CHECK(cert.theta_positive);
  CHECK(cert.bounded_by_one);
  CHECK(cert.bounded_by_exp);
  CHECK(cert.decay_exponent >= 2.0 / 3.0 - 0.1);
  CHECK_THROWS_AS(g_certify(GFunctionSpec::make(0.5), 5.0, 501, 10.0), PreconditionError);
}
