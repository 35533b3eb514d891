#include <catch_amalgamated.hpp>

#include <cmath>

#include "darboux/abel.hpp"

using namespace darboux;

namespace {

const QuadratureConfig kCfg{};

SingularFunction constant_one() {
  return SingularFunction(0.0, {[](double) { return 1.0; },
                                [](double) { return 0.0; },
                                [](double) { return 0.0; }});
}

SingularFunction identity_fn() {
  return SingularFunction(0.0, {[](double k) { return k; },
                                [](double) { return 1.0; },
                                [](double) { return 0.0; }});
}

SingularFunction inv_sqrt() {
  return SingularFunction(0.5, {[](double k) { return 1.0 / std::sqrt(k); },
                                [](double k) { return -0.5 * std::pow(k, -1.5); },
                                [](double k) { return 0.75 * std::pow(k, -2.5); }});
}

// h(k) = sqrt(1-k) exp(k), smooth and bounded on [0, 1)
SingularFunction smooth_bump() {
  auto v = [](double k) { return std::sqrt(1.0 - k) * std::exp(k); };
  auto d1 = [](double k) {
    return std::exp(k) * (std::sqrt(1.0 - k) - 0.5 / std::sqrt(1.0 - k));
  };
  auto d2 = [d1, v](double k) {
    // d2 = d/dk d1 = e^k (sqrt(1-k) - 1/sqrt(1-k) - 1/(4 (1-k)^{3/2}))
    return std::exp(k) * (std::sqrt(1.0 - k) - 1.0 / std::sqrt(1.0 - k) -
                          0.25 * std::pow(1.0 - k, -1.5));
  };
  return SingularFunction(0.0, {v, d1, d2});
}

}  // namespace

TEST_CASE("transform closed forms") {
  CHECK(transform(constant_one(), 0.25, kCfg) == Catch::Approx(1.0).epsilon(1e-11));
  for (double x : {0.2, 0.6, 0.9})
    CHECK(transform(inv_sqrt(), x, kCfg) == Catch::Approx(M_PI).epsilon(1e-10));
  for (double x : {0.25, 0.7})
    CHECK(transform(identity_fn(), x, kCfg) ==
          Catch::Approx(4.0 / 3.0 * std::pow(x, 1.5)).epsilon(1e-11));
}

TEST_CASE("transform derivatives via the recursion") {
  CHECK(transform_derivative(constant_one(), 0.25, 1, kCfg) ==
        Catch::Approx(2.0).epsilon(1e-10));
  for (double x : {0.3, 0.64})
    CHECK(transform_derivative(identity_fn(), x, 1, kCfg) ==
          Catch::Approx(2.0 * std::sqrt(x)).epsilon(1e-10));
  // A(k^{-1/2}) is the constant pi
  CHECK(std::abs(transform_derivative(inv_sqrt(), 0.5, 1, kCfg)) < 1e-8);
  // second derivative of (4/3) x^{3/2} is x^{-1/2}
  CHECK(transform_derivative(identity_fn(), 0.49, 2, kCfg) ==
        Catch::Approx(1.0 / 0.7).epsilon(1e-9));
}

TEST_CASE("derivative identity against a central difference") {
  const SingularFunction h = smooth_bump();
  const QuadratureConfig tight = kCfg.with_rel_tol(1e-12);
  for (double x : {0.2, 0.5, 0.8}) {
    const double exact = transform_derivative(h, x, 1, tight);
    const double step = 1e-5;
    const double fd =
        (transform(h, x + step, tight) - transform(h, x - step, tight)) / (2.0 * step);
    CHECK(std::abs(exact - fd) <= 1e-5 * std::abs(exact));
  }
}

TEST_CASE("split-form derivative backend agrees with the recursion") {
  const SingularFunction h = smooth_bump();
  for (double x : {0.3, 0.7}) {
    const double rec = transform_derivative(h, x, 1, kCfg);
    const double split = transform_derivative_split(h, x, 0.5 * x, kCfg);
    CHECK(split == Catch::Approx(rec).epsilon(1e-8));
  }
}

TEST_CASE("inversion closed forms and roundtrip") {
  // f = A(1) = 2 sqrt(x)
  SingularFunction f1(0.0, {[](double x) { return 2.0 * std::sqrt(x); },
                            [](double x) { return 1.0 / std::sqrt(x); }});
  for (double k : {0.2, 0.5, 0.8})
    CHECK(invert(f1, k, kCfg) == Catch::Approx(1.0).epsilon(1e-10));

  // f = A(k) = (4/3) x^{3/2}
  SingularFunction f2(0.0, {[](double x) { return 4.0 / 3.0 * std::pow(x, 1.5); },
                            [](double x) { return 2.0 * std::sqrt(x); }});
  for (double k : {0.3, 0.6})
    CHECK(invert(f2, k, kCfg) == Catch::Approx(k).epsilon(1e-10));

  // roundtrip through numerically computed f and f'
  const SingularFunction h = smooth_bump();
  const QuadratureConfig inner = kCfg.with_rel_tol(1e-12);
  SingularFunction f(0.0, {[&](double x) { return transform(h, x, inner); },
                           [&](double x) { return transform_derivative(h, x, 1, inner); }});
  double sup = 0.0;
  for (double k : {0.2, 0.5, 0.8}) {
    const double rec = invert(f, k, kCfg);
    sup = std::max(sup, std::abs(rec - h(k)));
  }
  CHECK(sup <= 1e-7);
}

TEST_CASE("inversion roundtrip sup over a denser grid") {
  const SingularFunction h = smooth_bump();
  const QuadratureConfig inner = kCfg.with_rel_tol(1e-12);
  SingularFunction f(0.0, {[&](double x) { return transform(h, x, inner); },
                           [&](double x) { return transform_derivative(h, x, 1, inner); }});
  double sup = 0.0;
  for (int i = 0; i <= 8; ++i) {
    const double k = 0.1 + 0.1 * i;
    sup = std::max(sup, std::abs(invert(f, k, kCfg) - h(k)));
  }
  CHECK(sup <= 1e-7);
}

TEST_CASE("endpoint scaling limit") {
  for (double alpha : {0.25, 0.6}) {
    SingularFunction h(alpha, {[alpha](double k) { return std::pow(k, -alpha) * (1.0 + k); }});
    const double limit =
        std::sqrt(M_PI) * std::exp(std::lgamma(1.0 - alpha) - std::lgamma(1.5 - alpha));
    for (double x : {1e-4, 1e-6}) {
      const double scaled = std::pow(x, alpha - 0.5) * transform(h, x, kCfg);
      CHECK(std::abs(scaled - limit) <= 1e-4 * std::abs(limit));
    }
  }
}

TEST_CASE("transform linearity") {
  const SingularFunction f = smooth_bump();
  const SingularFunction g = identity_fn();
  const double c = -1.75;
  const SingularFunction combo = sf_add(sf_scale(c, f), g);
  for (double x : {0.35, 0.75}) {
    const double lhs = transform(combo, x, kCfg);
    const double rhs = c * transform(f, x, kCfg) + transform(g, x, kCfg);
    CHECK(std::abs(lhs - rhs) <= 2.0 * kCfg.rel_tol * std::abs(rhs) + 1e-12);
  }
}

TEST_CASE("parameterized transform") {
  // g == 1 reduces to the plain transform
  const SingularFunction one = constant_one();
  CHECK(transform_with_parameter(one, [](double, double) { return 1.0; }, 0.25, 0.3, kCfg) ==
        Catch::Approx(1.0).epsilon(1e-11));

  // at y = 0 the representation kernel sqrt(1-k)/sqrt(1-y-k) collapses to 1
  auto kernel = [](double y, double k) {
    return std::sqrt(1.0 - k) / std::sqrt(1.0 - y - k);
  };
  const SingularFunction h = smooth_bump();
  const double at0 = transform_with_parameter(h, kernel, 0.4, 0.0, kCfg);
  CHECK(at0 == Catch::Approx(transform(h, 0.4, kCfg)).epsilon(1e-10));

  CHECK_THROWS_AS(
      transform_with_parameter(h, kernel, 0.6, 0.5, kCfg),
      DiagonalBlowup);
}

TEST_CASE("missing derivative and validation errors") {
  SingularFunction h(0.0, {[](double k) { return k; }});
  CHECK_THROWS_AS(transform_derivative(h, 0.5, 1, kCfg), MissingDerivative);

  SingularFunction bad(0.25, {[](double k) { return 1.0 / k; }});  // needs alpha = 1
  CHECK_THROWS_AS(validate_singular_function(bad), std::invalid_argument);
  CHECK_NOTHROW(validate_singular_function(inv_sqrt()));
}

TEST_CASE("memoized evaluator matches direct calls and reuses entries") {
  const SingularFunction h = smooth_bump();
  AbelEvaluator ev(h, kCfg);
  for (double x : {0.3, 0.3, 0.55}) {
    CHECK(ev.value(x) == Catch::Approx(transform(h, x, kCfg)).epsilon(1e-13));
    CHECK(ev.derivative(1, x) ==
          Catch::Approx(transform_derivative(h, x, 1, kCfg)).epsilon(1e-13));
  }
}
