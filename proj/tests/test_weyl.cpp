#include <catch_amalgamated.hpp>

#include <cmath>

#include "darboux/datasets.hpp"
#include "darboux/oracle.hpp"
#include "darboux/weyl.hpp"

using namespace darboux;

namespace {
const QuadratureConfig kCfg{};

WeylComponents kp_oracle_weyl(TrianglePoint p, const WaveProfile& w) {
  return weyl_from_oracle(
      p, w,
      [](TrianglePoint q) {
        return std::make_pair(oracle::khan_penrose(q, 1, 0), oracle::khan_penrose(q, 0, 1));
      },
      [](TrianglePoint q) {
        return SecondDerivatives{oracle::khan_penrose(q, 2, 0),
                                 oracle::khan_penrose(q, 1, 1),
                                 oracle::khan_penrose(q, 0, 2)};
      });
}
}  // namespace

TEST_CASE("coordinate map") {
  const WaveProfile lin{1.0, 1.0, 1.0, 1.0};
  const auto corner = map_coordinates({0.0, 0.0}, lin);
  CHECK(corner.f == 0.5);
  CHECK(corner.g == 0.5);
  CHECK(corner.u == 0.0);
  CHECK(corner.v == 0.0);

  const auto n = map_coordinates({0.3, 0.2}, lin);
  CHECK(n.u == Catch::Approx(0.2));
  CHECK(n.v == Catch::Approx(0.3));
  CHECK(n.f + n.g == Catch::Approx(1.0 - 0.3 - 0.2).margin(1e-15));

  const WaveProfile w{1.4, 0.8, 2.0, 3.0};
  for (auto p : {TrianglePoint{0.25, 0.6}, TrianglePoint{0.5, 0.1}}) {
    const auto m = map_coordinates(p, w);
    CHECK(m.f + m.g == Catch::Approx(1.0 - p.x - p.y).margin(1e-15));
    const TrianglePoint back = unmap_coordinates(m, w);
    CHECK(back.x == Catch::Approx(p.x).margin(1e-12));
    CHECK(back.y == Catch::Approx(p.y).margin(1e-12));
  }
}

TEST_CASE("direct scalars for zero data") {
  SolutionField field(zero_data(), kCfg);
  const WaveProfile lin{1.0, 1.0, 1.0, 1.0};
  const TrianglePoint p{0.3, 0.25};
  const auto w = weyl_direct(field, p, lin);
  const double eps = 1.0 - p.x - p.y;
  CHECK(std::abs(w.psi0) < 1e-10);
  CHECK(std::abs(w.psi4) < 1e-10);
  CHECK(w.psi2 == Catch::Approx(-1.0 / (eps * eps)).epsilon(1e-10));

  const WaveProfile gen{1.2, 0.9, 2.0, 3.0};
  const auto wg = weyl_direct(field, p, gen);
  const double pref = gen.c1 * gen.n1 * std::pow(p.y, 1.0 - 1.0 / gen.n1) * gen.c2 *
                      gen.n2 * std::pow(p.x, 1.0 - 1.0 / gen.n2);
  CHECK(wg.psi2 == Catch::Approx(-pref / (eps * eps)).epsilon(1e-10));
}

TEST_CASE("direct scalars match the closed-form route for Khan-Penrose") {
  SolutionField field(khan_penrose_data(), kCfg);
  const WaveProfile w{1.0, 1.0, 2.0, 2.0};
  const TrianglePoint p{0.3, 0.3};
  const auto got = weyl_direct(field, p, w);
  const auto want = kp_oracle_weyl(p, w);
  CHECK(got.psi0 == Catch::Approx(want.psi0).epsilon(1e-6));
  CHECK(got.psi2 == Catch::Approx(want.psi2).epsilon(1e-6));
  CHECK(got.psi4 == Catch::Approx(want.psi4).epsilon(1e-6));
}

TEST_CASE("profile scaling structure") {
  SolutionField field(khan_penrose_data(), kCfg);
  const TrianglePoint p{0.25, 0.35};
  const double lam = 1.9;
  const WaveProfile base{1.0, 1.0, 2.0, 2.0};
  WaveProfile scaled = base;
  scaled.c2 *= lam;
  const auto a = weyl_direct(field, p, base);
  const auto b = weyl_direct(field, p, scaled);
  CHECK(b.psi0 == Catch::Approx(lam * lam * a.psi0).epsilon(1e-12));
  CHECK(b.psi2 == Catch::Approx(lam * a.psi2).epsilon(1e-12));
  CHECK(b.psi4 == Catch::Approx(a.psi4).epsilon(1e-12));
}

TEST_CASE("exchange symmetry swaps psi0 and psi4") {
  const BoundaryData data = polynomial_data({0.0, 1.0}, {0.0, 0.0, 1.0});
  SolutionField f(data, kCfg), fs(swapped(data), kCfg);
  const WaveProfile w{1.3, 0.7, 2.0, 3.0};
  const WaveProfile ws{0.7, 1.3, 3.0, 2.0};
  const TrianglePoint p{0.3, 0.45};
  const auto a = weyl_direct(f, p, w);
  const auto b = weyl_direct(fs, {p.y, p.x}, ws);
  CHECK(a.psi0 == Catch::Approx(b.psi4).margin(1e-8));
  CHECK(a.psi4 == Catch::Approx(b.psi0).margin(1e-8));
  CHECK(a.psi2 == Catch::Approx(b.psi2).margin(1e-8));
}

TEST_CASE("series coefficients and recurrences") {
  const WaveProfile w{1.0, 1.0, 2.0, 2.0};
  const WeylSeries s = weyl_series(khan_penrose_data(), 0.5, 2, w, kCfg);
  const auto gam = s.gamma();
  const auto G = s.big_g();
  CHECK(gam[0] == Catch::Approx(2.0).margin(1e-8));
  CHECK(G[0] == Catch::Approx(-2.0).margin(1e-8));
  CHECK(s.gamma_tilde_nominal()[0] == Catch::Approx(2.0).margin(1e-8));

  // index-wise recurrences against an independently computed table
  const ExpansionTable t = expansion(khan_penrose_data(), 0.5, 2, kCfg);
  for (int j = 0; j <= 2; ++j) {
    CHECK(gam[j] == Catch::Approx(j * t.g[j] + t.f[j]).margin(1e-9));
    CHECK(G[j] == Catch::Approx((j - 1) * gam[j] + j * t.f[j]).margin(1e-9));
  }
}

TEST_CASE("psi2 leading singular coefficient") {
  const WaveProfile w{1.0, 1.0, 2.0, 2.0};
  const WeylSeries s = weyl_series(khan_penrose_data(), 0.5, 2, w, kCfg);
  const double eps = 1e-4;
  const auto c = s.evaluate(eps);
  const TrianglePoint p{0.5, 0.5 - eps};
  const double pref = detail::profile_px(p, w) * detail::profile_py(p, w);
  // gamma_0 gamma~_0 - 1 = 3 for Khan-Penrose
  CHECK(c.psi2 * eps * eps / pref == Catch::Approx(3.0).margin(2e-3));
}

TEST_CASE("series approaches the direct scalars near the diagonal") {
  const BoundaryData kp = khan_penrose_data();
  SolutionField field(kp, kCfg);
  const WaveProfile w{1.0, 1.0, 2.0, 2.0};
  const WeylSeries s = weyl_series(kp, 0.5, 2, w, kCfg);

  double prev_gap = 1e9;
  for (double eps : {1e-2, 3e-3, 1e-3}) {
    const TrianglePoint p{0.5, 0.5 - eps};
    const auto direct = weyl_direct(field, p, w);
    const auto series = s.evaluate(eps);
    const double gap = std::max({std::abs(series.psi0 - direct.psi0) / std::abs(direct.psi0),
                                 std::abs(series.psi2 - direct.psi2) / std::abs(direct.psi2),
                                 std::abs(series.psi4 - direct.psi4) / std::abs(direct.psi4)});
    INFO("eps=" << eps << " gap=" << gap);
    CHECK(gap <= 1e-2);
    CHECK(gap <= prev_gap * 1.5);  // monotone within noise
    prev_gap = gap;
  }
  CHECK(prev_gap <= 1e-2);
}

TEST_CASE("profile validation") {
  CHECK_THROWS_AS(map_coordinates({0.2, 0.2}, WaveProfile{0.0, 1.0, 1.0, 1.0}),
                  std::invalid_argument);
  SolutionField field(khan_penrose_data(), kCfg);
  CHECK_THROWS_AS(weyl_direct(field, {0.0, 0.3}, WaveProfile{}), DomainError);
}
