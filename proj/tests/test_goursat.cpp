#include <catch_amalgamated.hpp>

#include <cmath>

#include "darboux/datasets.hpp"
#include "darboux/goursat.hpp"
#include "darboux/oracle.hpp"

using namespace darboux;

namespace {
const QuadratureConfig kCfg{};

BoundaryData poly23() {  // V_0 = x^2, V_1 = y^3
  return polynomial_data({0.0, 1.0}, {0.0, 0.0, 1.0});
}
}  // namespace

TEST_CASE("representation kernel partials match finite differences") {
  const double y = 0.31, k = 0.22, h = 1e-6;
  auto g = [](double yy, double kk) {
    return std::sqrt(1.0 - kk) / std::sqrt(1.0 - yy - kk);
  };
  const auto K = detail::kernel_partials(y, k);
  CHECK(K.g == Catch::Approx(g(y, k)).epsilon(1e-12));
  CHECK(K.gy == Catch::Approx((g(y + h, k) - g(y - h, k)) / (2 * h)).epsilon(1e-7));
  CHECK(K.gk == Catch::Approx((g(y, k + h) - g(y, k - h)) / (2 * h)).epsilon(1e-7));
  CHECK(K.gyy ==
        Catch::Approx((g(y + h, k) - 2 * g(y, k) + g(y - h, k)) / (h * h)).epsilon(1e-4));
  CHECK(K.gkk ==
        Catch::Approx((g(y, k + h) - 2 * g(y, k) + g(y, k - h)) / (h * h)).epsilon(1e-4));
  CHECK(K.gky == Catch::Approx((g(y + h, k + h) - g(y + h, k - h) - g(y - h, k + h) +
                                g(y - h, k - h)) /
                               (4 * h * h))
                     .epsilon(1e-4));
}

TEST_CASE("zero data gives the zero solution") {
  SolutionField field(zero_data(), kCfg);
  for (auto p : {TrianglePoint{0.2, 0.3}, TrianglePoint{0.7, 0.1}}) {
    CHECK(std::abs(field.evaluate(p)) < 1e-13);
    auto [vx, vy] = field.gradient(p);
    CHECK(std::abs(vx) < 1e-12);
    CHECK(std::abs(vy) < 1e-12);
    const auto s = field.second(p);
    CHECK(std::abs(s.xx) < 1e-11);
    CHECK(std::abs(s.xy) < 1e-11);
    CHECK(std::abs(s.yy) < 1e-11);
  }
}

TEST_CASE("boundary short-circuit returns the data exactly") {
  const BoundaryData data = khan_penrose_data();
  SolutionField field(data, kCfg);
  for (double t : {0.1, 0.5, 0.85}) {
    CHECK(field.evaluate({t, 0.0}) == data.v0(t));
    CHECK(field.evaluate({0.0, t}) == data.v1(t));
  }
  CHECK(field.evaluate({0.0, 0.0}) == 0.0);
}

TEST_CASE("Khan-Penrose value against the closed form") {
  SolutionField field(khan_penrose_data(), kCfg);
  const TrianglePoint p{0.2, 0.3};
  const double want = oracle::khan_penrose(p);
  CHECK(field.evaluate(p) == Catch::Approx(want).epsilon(1e-9));
  // the printed form of the oracle at this point
  const double arg = (1.0 + std::sqrt(0.2) * std::sqrt(0.7) + std::sqrt(0.3) * std::sqrt(0.8)) /
                     (1.0 - std::sqrt(0.2) * std::sqrt(0.7) - std::sqrt(0.3) * std::sqrt(0.8));
  CHECK(want == Catch::Approx(-std::log(arg)).epsilon(1e-14));
}

TEST_CASE("Khan-Penrose gradient and second derivatives") {
  SolutionField field(khan_penrose_data(), kCfg);
  const TrianglePoint p{0.2, 0.3};
  auto [vx, vy] = field.gradient(p);
  CHECK(vx == Catch::Approx(oracle::khan_penrose(p, 1, 0)).epsilon(1e-8));
  CHECK(vy == Catch::Approx(oracle::khan_penrose(p, 0, 1)).epsilon(1e-8));

  const TrianglePoint q{0.3, 0.3};
  const auto s = field.second(q);
  CHECK(s.xx == Catch::Approx(oracle::khan_penrose(q, 2, 0)).epsilon(1e-7));
  CHECK(s.xy == Catch::Approx(oracle::khan_penrose(q, 1, 1)).epsilon(1e-7));
  CHECK(s.yy == Catch::Approx(oracle::khan_penrose(q, 0, 2)).epsilon(1e-7));
}

TEST_CASE("the computed field satisfies the equation pointwise") {
  for (const BoundaryData& data : {khan_penrose_data(), poly23()}) {
    SolutionField field(data, kCfg);
    const TrianglePoint p{0.25, 0.35};
    auto [vx, vy] = field.gradient(p);
    const auto s = field.second(p);
    const double res =
        std::abs(s.xy - (vx + vy) / (2.0 * (1.0 - p.x - p.y))) / (1.0 + std::abs(s.xy));
    CHECK(res <= 1e-6);
  }
}

TEST_CASE("gradient trace limit V_x(x, 0+) = V_0x(x) for smooth data") {
  const BoundaryData data = poly23();
  SolutionField field(data, kCfg);
  auto [vx, vy] = field.gradient({0.5, 1e-8});
  CHECK(vx == Catch::Approx(1.0).epsilon(1e-6));  // d/dx x^2 at 0.5
  (void)vy;
}

TEST_CASE("superposition of boundary data") {
  const BoundaryData a = khan_penrose_data();
  const BoundaryData b = poly23();
  const BoundaryData combo = linear_combination(0.5, a, 2.0, b);
  SolutionField fa(a, kCfg), fb(b, kCfg), fc(combo, kCfg);
  for (auto p : {TrianglePoint{0.2, 0.4}, TrianglePoint{0.55, 0.15}}) {
    const double want = 0.5 * fa.evaluate(p) + 2.0 * fb.evaluate(p);
    CHECK(fc.evaluate(p) == Catch::Approx(want).margin(1e-8));
  }
}

TEST_CASE("data-swap symmetry") {
  const BoundaryData d = poly23();
  SolutionField f(d, kCfg), fs(swapped(d), kCfg);
  for (auto p : {TrianglePoint{0.2, 0.4}, TrianglePoint{0.6, 0.25}}) {
    CHECK(f.evaluate(p) == Catch::Approx(fs.evaluate({p.y, p.x})).margin(1e-9));
  }
  // symmetric data: V(x,y) = V(y,x)
  SolutionField kp(khan_penrose_data(), kCfg);
  CHECK(kp.evaluate({0.2, 0.5}) == Catch::Approx(kp.evaluate({0.5, 0.2})).margin(1e-9));
}

TEST_CASE("domain and diagonal errors") {
  SolutionField field(khan_penrose_data(), kCfg);
  CHECK_THROWS_AS(field.evaluate({-0.1, 0.2}), DomainError);
  CHECK_THROWS_AS(field.evaluate({0.6, 0.6}), DomainError);
  CHECK_THROWS_AS(field.evaluate({0.5, 0.4999999}), DiagonalBlowup);
  CHECK_THROWS_AS(field.gradient({0.0, 0.5}), DomainError);
}

TEST_CASE("boundary consistency onto the axis for smooth data") {
  const BoundaryData data = poly23();
  SolutionField field(data, kCfg);
  double sup = 0.0;
  for (double x : {0.1, 0.4, 0.85}) {
    sup = std::max(sup, std::abs(field.evaluate({x, 1e-9}) - data.v0(x)));
  }
  CHECK(sup <= 1e-6);
}

TEST_CASE("grid evaluation") {
  GridSpec spec;
  spec.x0 = 0.0;
  spec.x1 = 0.6;
  spec.nx = 3;
  spec.y0 = 0.0;
  spec.y1 = 0.6;
  spec.ny = 3;

  SolutionField zero(zero_data(), kCfg);
  const FieldTable zt = evaluate_grid(zero, spec);
  REQUIRE(zt.rows.size() == 9);
  for (const auto& r : zt.rows) {
    if (r.has_value) CHECK(std::abs(r.v) < 1e-12);
  }

  SolutionField kp(khan_penrose_data(), kCfg);
  const FieldTable t = evaluate_grid(kp, spec, 2);
  double maxerr = 0.0;
  int interior = 0, skipped = 0;
  for (const auto& r : t.rows) {
    if (r.note == "skipped_diagonal") {
      ++skipped;
      continue;
    }
    if (r.has_value) maxerr = std::max(maxerr, std::abs(r.v - oracle::khan_penrose({r.x, r.y})));
    if (r.has_derivs) ++interior;
  }
  CHECK(maxerr <= 1e-8);
  CHECK(interior > 0);
  CHECK(skipped == 1);  // the (0.6, 0.6) corner..wait 0.6+0.6=1.2 out of domain

  // determinism across thread counts
  const FieldTable t1 = evaluate_grid(kp, spec, 1);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(t.rows[i].v == t1.rows[i].v);
    CHECK(t.rows[i].vx == t1.rows[i].vx);
  }
}

TEST_CASE("brute-force representation evaluator") {
  CHECK(std::abs(oracle::brute_force_solution(zero_data(), {0.3, 0.3})) < 1e-10);

  const TrianglePoint p{0.2, 0.3};
  CHECK(oracle::brute_force_solution(khan_penrose_data(), p) ==
        Catch::Approx(oracle::khan_penrose(p)).margin(1e-7));

  const BoundaryData pd = poly23();
  SolutionField field(pd, kCfg);
  const TrianglePoint q{0.3, 0.4};
  CHECK(oracle::brute_force_solution(pd, q) ==
        Catch::Approx(field.evaluate(q)).margin(1e-7));
}

TEST_CASE("oracle coherence on a small interior grid") {
  const BoundaryData data = khan_penrose_data();
  double maxerr = 0.0;
  for (double x : {0.15, 0.4, 0.65}) {
    for (double y : {0.15, 0.4, 0.65}) {
      if (x + y > 0.9) continue;
      maxerr = std::max(maxerr, std::abs(oracle::brute_force_solution(data, {x, y}) -
                                         oracle::khan_penrose({x, y})));
    }
  }
  CHECK(maxerr <= 1e-7);
}

TEST_CASE("residual checker") {
  // the exact solution passes at the FD-truncation level
  std::vector<TrianglePoint> grid;
  for (double x : {0.2, 0.45})
    for (double y : {0.2, 0.35}) grid.push_back({x, y});
  auto rep = oracle::residual_check(oracle::khan_penrose_evaluator(), grid, 1e-6, 1e-9);
  CHECK(rep.max_rel_fd <= 1e-6);
  CHECK(rep.pass);

  // V = x + y is not a solution: residual -1/(1-x-y)
  oracle::PointEvaluator notsol{[](TrianglePoint p) { return p.x + p.y; }, nullptr, nullptr};
  auto bad = oracle::residual_check(notsol, {{0.25, 0.25}}, 1e-5, 1e-5);
  CHECK(bad.entries[0].fd_residual == Catch::Approx(2.0).epsilon(1e-6));
  CHECK(!bad.pass);
}
