#include <catch_amalgamated.hpp>

#include <cmath>

#include "darboux/quadrature.hpp"

using namespace darboux;

namespace {
// Independent Beta oracle through the libm Gamma routine.
double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}
const QuadratureConfig kCfg{};
}  // namespace

TEST_CASE("smooth integrals of elementary functions") {
  CHECK(integrate_smooth([](double) { return 1.0; }, 0.0, 1.0, kCfg) ==
        Catch::Approx(1.0).epsilon(1e-13));
  CHECK(integrate_smooth([](double t) { return t; }, 0.0, 2.0, kCfg) ==
        Catch::Approx(2.0).epsilon(1e-13));
  // ln(4t) is integrable but unbounded at 0; antiderivative t ln(4t) - t.
  CHECK(integrate_smooth([](double t) { return std::log(4.0 * t); }, 0.0, 1.0, kCfg) ==
        Catch::Approx(std::log(4.0) - 1.0).epsilon(5e-9));
}

TEST_CASE("singular endpoint integrals with known values") {
  // Beta(1/2,1/2) = pi
  double v = integrate_singular(
      [](double k) { return 1.0 / (std::sqrt(k) * std::sqrt(1.0 - k)); }, 0.0, 1.0,
      EndpointExponents{0.5, 0.5}, kCfg);
  CHECK(v == Catch::Approx(M_PI).epsilon(1e-11));

  v = integrate_singular([](double k) { return 1.0 / std::sqrt(1.0 - k); }, 0.0, 1.0,
                         EndpointExponents{0.0, 0.5}, kCfg);
  CHECK(v == Catch::Approx(2.0).epsilon(1e-11));

  const double alpha = 0.3, x = 0.5;
  v = integrate_singular(
      [&](double k) { return std::pow(k, -alpha) / std::sqrt(x - k); }, 0.0, x,
      EndpointExponents{alpha, 0.5}, kCfg);
  CHECK(v == Catch::Approx(std::pow(x, 0.5 - alpha) * beta_fn(1.0 - alpha, 0.5)).epsilon(1e-11));
}

TEST_CASE("Beta identity across the exponent/abscissa matrix") {
  for (int ai = 0; ai <= 9; ++ai) {
    const double alpha = 0.1 * ai;
    for (double x : {0.1, 0.5, 0.9}) {
      const double got = integrate_singular(
          [&](double k) { return std::pow(k, -alpha) / std::sqrt(x - k); }, 0.0, x,
          EndpointExponents{alpha, 0.5}, kCfg);
      const double want = std::pow(x, 0.5 - alpha) * beta_fn(1.0 - alpha, 0.5);
      INFO("alpha=" << alpha << " x=" << x);
      CHECK(std::abs(got - want) <= 1e-9 * std::abs(want));
    }
  }
}

TEST_CASE("linearity and interval additivity") {
  auto f = [](double t) { return std::exp(t) / std::sqrt(t); };
  auto g = [](double t) { return std::cos(t) / std::sqrt(t); };
  const EndpointExponents e{0.5, 0.0};
  const double c = 2.75;
  const double lhs = integrate_singular([&](double t) { return c * f(t) + g(t); }, 0.0, 1.0, e, kCfg);
  const double rhs = c * integrate_singular(f, 0.0, 1.0, e, kCfg) +
                     integrate_singular(g, 0.0, 1.0, e, kCfg);
  CHECK(std::abs(lhs - rhs) <= 2.0 * kCfg.rel_tol * std::abs(rhs) + 1e-12);

  auto h = [](double t) { return std::sin(3.0 * t) + t * t; };
  const double whole = integrate_smooth(h, 0.0, 2.0, kCfg);
  const double split =
      integrate_smooth(h, 0.0, 0.7, kCfg) + integrate_smooth(h, 0.7, 2.0, kCfg);
  CHECK(std::abs(whole - split) <= 2.0 * kCfg.rel_tol * std::abs(whole) + 1e-12);
}

TEST_CASE("determinism: repeated calls are bit-identical") {
  auto f = [](double k) { return std::pow(k, -0.4) / std::sqrt(1.0 - k); };
  const double a = integrate_singular(f, 0.0, 1.0, EndpointExponents{0.4, 0.5}, kCfg);
  const double b = integrate_singular(f, 0.0, 1.0, EndpointExponents{0.4, 0.5}, kCfg);
  CHECK(a == b);
}

TEST_CASE("error paths") {
  CHECK_THROWS_AS(integrate_singular([](double) { return 1.0; }, 0.0, 1.0,
                                     EndpointExponents{1.0, 0.0}, kCfg),
                  InvalidExponent);
  // Undeclared strong singularity with a tiny subdivision budget cannot meet
  // the tolerance.
  QuadratureConfig tight = kCfg;
  tight.max_subdivisions = 3;
  tight.base_nodes = 4;
  CHECK_THROWS_AS(integrate_singular([](double t) { return std::pow(t, -0.95); }, 0.0, 1.0,
                                     EndpointExponents{0.0, 0.0}, tight),
                  NonConvergence);
}

TEST_CASE("subtracted kernel tails") {
  // Antiderivative of 1/(sqrt(v) sqrt(v+1)) is 2 ln(sqrt(v) + sqrt(v+1)).
  const double t00 = integrate_subtracted_tail(0, KernelId::K0Like, kCfg);
  CHECK(t00 == Catch::Approx(std::log(4.0) - 2.0 * std::log(1.0 + std::sqrt(2.0))).epsilon(1e-10));

  // Antiderivative of 1/(sqrt(v-1) sqrt(v)) is 2 ln(sqrt(v-1) + sqrt(v)).
  const double t10 = integrate_subtracted_tail(0, KernelId::K1Like, kCfg);
  CHECK(t10 == Catch::Approx(std::log(4.0)).epsilon(1e-10));

  // Adding the (0,1) kernel moment recovers ln 4 for the K0 branch.
  const double inner = integrate_singular(
      [](double v) { return 1.0 / (std::sqrt(v) * std::sqrt(v + 1.0)); }, 0.0, 1.0,
      EndpointExponents{0.5, 0.0}, kCfg);
  CHECK(inner + t00 == Catch::Approx(std::log(4.0)).epsilon(1e-10));

  // j = 1 closed forms, from the antiderivatives of v K(v,1):
  //   K0: [sqrt(v(v+1)) - asinh(sqrt v) - v + (1/2) ln v]  -> 3/2 - ln2 - sqrt2 + ln(1+sqrt2)
  //   K1: [sqrt(v(v-1)) + ln(sqrt(v-1)+sqrt v) - v - (1/2) ln v] -> 1/2 + ln2
  const double s2 = std::sqrt(2.0);
  const double t01 = integrate_subtracted_tail(1, KernelId::K0Like, kCfg);
  CHECK(t01 == Catch::Approx(1.5 - std::log(2.0) - s2 + std::log(1.0 + s2)).epsilon(1e-10));
  const double t11 = integrate_subtracted_tail(1, KernelId::K1Like, kCfg);
  CHECK(t11 == Catch::Approx(0.5 + std::log(2.0)).epsilon(1e-10));

  // j = 2 closed forms, from the antiderivatives of v^2 K(v,1) in
  // hyperbolic-substitution form:
  //   K0: (3/4) asinh(sqrt v) - sqrt(v(v+1)) + (1/4)(2v+1) sqrt(v(v+1))
  //       -> (3/4) ln2 - 7/16 + sqrt2/4 - (3/4) ln(1+sqrt2)
  //   K1: (3/4) ln(sqrt v + sqrt(v-1)) + sqrt(v(v-1)) + (1/4)(2v-1) sqrt(v(v-1))
  //       -> (3/4) ln2 + 9/16
  const double t02 = integrate_subtracted_tail(2, KernelId::K0Like, kCfg);
  CHECK(t02 == Catch::Approx(0.75 * std::log(2.0) - 7.0 / 16.0 + s2 / 4.0 -
                             0.75 * std::log(1.0 + s2)).epsilon(1e-10));
  const double t12 = integrate_subtracted_tail(2, KernelId::K1Like, kCfg);
  CHECK(t12 == Catch::Approx(0.75 * std::log(2.0) + 9.0 / 16.0).epsilon(1e-10));
}
