// The acceptance checks, runnable as named suites. Each check reports the
// measured quantity, its threshold, pass/fail, and wall time; the CLI verify
// command serializes the result and the acceptance harness groups the same
// checks by criterion.
#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "darboux/asymptotics.hpp"
#include "darboux/datasets.hpp"
#include "darboux/goursat.hpp"
#include "darboux/oracle.hpp"
#include "darboux/quadrature.hpp"
#include "darboux/weyl.hpp"

namespace darboux {
namespace verify {

struct Check {
  std::string suite;
  int criterion = 0;  // acceptance criterion number; 0 = supplementary invariant
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  QuadratureConfig cfg{};
  // Fault-injection hook: overrides the kernel constants used by the
  // raw-ingredient cross-check of the expansion coefficients. Intended for
  // mutation tests of the verify machinery itself.
  std::vector<double> c_override;
};

namespace detail {

inline double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

class Runner {
 public:
  explicit Runner(const Options& opt) : opt_(opt) {}

  std::vector<Check> take() { return std::move(checks_); }

  void add(const std::string& suite, int criterion, const std::string& name,
           double threshold, const std::function<double(std::string&)>& body,
           bool pass_when_below = true) {
    Check c;
    c.suite = suite;
    c.criterion = criterion;
    c.name = name;
    c.threshold = threshold;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.measured = body(c.detail);
      c.pass = pass_when_below ? (c.measured <= threshold) : (c.measured >= threshold);
    } catch (const std::exception& e) {
      c.measured = std::nan("");
      c.pass = false;
      c.detail = std::string("exception: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    checks_.push_back(std::move(c));
  }

  const Options& opt() const { return opt_; }

 private:
  Options opt_;
  std::vector<Check> checks_;
};

inline void run_abel(Runner& r) {
  const QuadratureConfig cfg = r.opt().cfg;

  r.add("abel", 4, "beta identity across the exponent/abscissa matrix", 1e-9,
        [&](std::string&) {
          double worst = 0.0;
          for (int ai = 0; ai <= 9; ++ai) {
            const double alpha = 0.1 * ai;
            for (double x : {0.1, 0.5, 0.9}) {
              const double got = integrate_singular(
                  [&](double k, double, double dx) {
                    return std::pow(k, -alpha) / std::sqrt(dx);
                  },
                  0.0, x, EndpointExponents{alpha, 0.5}, cfg);
              const double want = std::pow(x, 0.5 - alpha) * beta_fn(1.0 - alpha, 0.5);
              worst = std::max(worst, std::abs(got - want) / std::abs(want));
            }
          }
          return worst;
        });

  r.add("abel", 4, "inversion roundtrip sup error", 1e-7, [&](std::string&) {
    auto v = [](double k) { return std::sqrt(1.0 - k) * std::exp(k); };
    auto d1 = [](double k) {
      return std::exp(k) * (std::sqrt(1.0 - k) - 0.5 / std::sqrt(1.0 - k));
    };
    const SingularFunction h(0.0, {v, d1});
    const QuadratureConfig inner = cfg.with_rel_tol(1e-12);
    const SingularFunction f(
        0.0, {[&](double x) { return transform(h, x, inner); },
              [&](double x) { return transform_derivative(h, x, 1, inner); }});
    double sup = 0.0;
    for (int i = 0; i <= 8; ++i) {
      const double k = 0.1 + 0.1 * i;
      sup = std::max(sup, std::abs(invert(f, k, cfg) - h(k)));
    }
    return sup;
  });

  r.add("abel", 4, "derivative recursion vs central difference", 1e-5,
        [&](std::string&) {
          auto v = [](double k) { return std::sqrt(1.0 - k) * std::exp(k); };
          auto d1 = [](double k) {
            return std::exp(k) * (std::sqrt(1.0 - k) - 0.5 / std::sqrt(1.0 - k));
          };
          const SingularFunction h(0.0, {v, d1});
          const QuadratureConfig tight = cfg.with_rel_tol(1e-12);
          double worst = 0.0;
          for (double x : {0.2, 0.5, 0.8}) {
            const double exact = transform_derivative(h, x, 1, tight);
            const double step = 1e-5;
            const double fd =
                (transform(h, x + step, tight) - transform(h, x - step, tight)) /
                (2.0 * step);
            worst = std::max(worst, std::abs(exact - fd) / std::abs(exact));
          }
          return worst;
        });
}

inline std::vector<TrianglePoint> interior_grid(double lo, double hi, int n,
                                                double max_sum) {
  std::vector<TrianglePoint> pts;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = lo + (hi - lo) * i / (n - 1);
      const double y = lo + (hi - lo) * j / (n - 1);
      if (x + y <= max_sum) pts.push_back({x, y});
    }
  return pts;
}

inline void run_goursat(Runner& r) {
  const QuadratureConfig cfg = r.opt().cfg;
  const BoundaryData kp = khan_penrose_data();
  const BoundaryData poly = polynomial_data({0.0, 1.0}, {0.0, 0.0, 1.0});

  r.add("goursat", 1, "khan-penrose field reproduction on the 10x10 grid", 1e-8,
        [&](std::string& detail) {
          SolutionField field(kp, cfg);
          double worst = 0.0;
          int used = 0;
          for (const auto& p : interior_grid(0.05, 0.85, 10, 0.9)) {
            worst = std::max(worst,
                             std::abs(field.evaluate(p) - oracle::khan_penrose(p)));
            ++used;
          }
          detail = std::to_string(used) + " grid nodes";
          return worst;
        });

  r.add("goursat", 2, "boundary short-circuit is exact", 0.0, [&](std::string&) {
    SolutionField field(kp, cfg);
    double worst = 0.0;
    for (double t : {0.0, 0.3, 0.6, 0.9}) {
      worst = std::max(worst, std::abs(field.evaluate({t, 0.0}) - kp.v0(t)));
      worst = std::max(worst, std::abs(field.evaluate({0.0, t}) - kp.v1(t)));
    }
    return worst;
  });

  r.add("goursat", 2, "near-axis trace, smooth data, y = 1e-9", 1e-6,
        [&](std::string&) {
          SolutionField field(poly, cfg);
          double sup = 0.0;
          for (int i = 0; i <= 9; ++i) {
            const double x = 0.1 * i;
            sup = std::max(sup, std::abs(field.evaluate({x, 1e-9}) - poly.v0(x)));
          }
          return sup;
        });

  r.add("goursat", 2, "near-axis khan-penrose vs closed form, y = 1e-9", 1e-6,
        [&](std::string&) {
          SolutionField field(kp, cfg);
          double sup = 0.0;
          for (double x : {0.1, 0.4, 0.7, 0.9}) {
            sup = std::max(sup,
                           std::abs(field.evaluate({x, 1e-9}) -
                                    oracle::khan_penrose({x, 1e-9})));
          }
          return sup;
        });

  const auto grid7 = interior_grid(0.1, 0.8, 7, 0.9);
  for (const auto& [name, data] :
       {std::pair<const char*, const BoundaryData*>{"khan-penrose", &kp},
        std::pair<const char*, const BoundaryData*>{"polynomial", &poly}}) {
    r.add("goursat", 3,
          std::string("pde residual, derivative route, ") + name + " data", 1e-6,
          [&, data](std::string&) {
            SolutionField field(*data, cfg);
            double worst = 0.0;
            for (const auto& p : grid7) {
              const auto [vx, vy] = field.gradient(p);
              const auto s = field.second(p);
              worst = std::max(worst,
                               std::abs(s.xy - (vx + vy) / (2.0 * (1.0 - p.x - p.y))) /
                                   (1.0 + std::abs(s.xy)));
            }
            return worst;
          });

    r.add("goursat", 3,
          std::string("pde residual, finite-difference route, ") + name + " data",
          1e-5, [&, data](std::string&) {
            QuadratureConfig fd_cfg = cfg;
            fd_cfg.composite_depth = 2;
            SolutionField field(*data, fd_cfg);
            const auto rep = oracle::residual_check(
                oracle::PointEvaluator{
                    [&field](TrianglePoint p) { return field.evaluate(p); }, nullptr,
                    nullptr},
                grid7, 1e-5, 1e-6);
            return rep.max_rel_fd;
          });
  }

  r.add("goursat", 8, "superposition linearity", 1e-8, [&](std::string&) {
    const BoundaryData combo = linear_combination(0.5, kp, 2.0, poly);
    SolutionField fa(kp, cfg), fb(poly, cfg), fc(combo, cfg);
    double worst = 0.0;
    for (auto p : {TrianglePoint{0.2, 0.4}, TrianglePoint{0.55, 0.15},
                   TrianglePoint{0.1, 0.7}}) {
      worst = std::max(worst, std::abs(fc.evaluate(p) - 0.5 * fa.evaluate(p) -
                                       2.0 * fb.evaluate(p)));
    }
    return worst;
  });

  r.add("goursat", 8, "data-swap symmetry", 1e-8, [&](std::string&) {
    SolutionField f(poly, cfg), fs(swapped(poly), cfg);
    double worst = 0.0;
    for (auto p : {TrianglePoint{0.2, 0.4}, TrianglePoint{0.6, 0.25},
                   TrianglePoint{0.35, 0.35}}) {
      worst = std::max(worst, std::abs(f.evaluate(p) - fs.evaluate({p.y, p.x})));
    }
    return worst;
  });
}

inline void run_asymptotics(Runner& r) {
  const QuadratureConfig cfg = r.opt().cfg;
  const BoundaryData kp = khan_penrose_data();
  const BoundaryData poly = polynomial_data({0.0, 1.0}, {0.0, 0.0, 1.0});

  r.add("asymptotics", 8, "c_j recurrence to j = 12", 4e-16, [&](std::string&) {
    double worst = 0.0;
    for (int j = 1; j <= 12; ++j) {
      const double rhs = c_constant(j - 1) * (2.0 * j - 1.0) / 2.0;
      worst = std::max(worst, std::abs(c_constant(j) - rhs) / std::abs(rhs));
    }
    return worst;
  });

  r.add("asymptotics", 5, "A_j / B_j match the printed khan-penrose table", 1e-8,
        [&](std::string&) {
          HFunction h(kp, cfg);
          double worst = 0.0;
          for (double x : {0.25, 0.5, 0.75}) {
            const double a[3] = {-M_PI * (std::log(x) + std::log(4.0)),
                                 M_PI / (2.0 * x), 3.0 * M_PI / (16.0 * x * x)};
            const double b[3] = {-M_PI * (std::log(1.0 - x) + std::log(4.0)),
                                 M_PI / (2.0 * (1.0 - x)),
                                 3.0 * M_PI / (16.0 * (1.0 - x) * (1.0 - x))};
            for (int j = 0; j <= 2; ++j) {
              worst = std::max(worst,
                               std::abs(coefficient_a(h, 0.5, j, x, cfg) - a[j]));
              worst = std::max(worst,
                               std::abs(coefficient_b(h, 0.5, j, x, cfg) - b[j]));
            }
          }
          return worst;
        });

  r.add("asymptotics", 5, "f_j / g_j match the printed khan-penrose expansion", 1e-8,
        [&](std::string&) {
          double worst = 0.0;
          for (double x : {0.25, 0.5, 0.75}) {
            const ExpansionTable t = expansion(kp, x, 2, cfg);
            const auto ref = oracle::khan_penrose_expansion(x, 2);
            for (int j = 0; j <= 2; ++j) {
              worst = std::max(worst, std::abs(t.f[j] - ref.f[j]));
              worst = std::max(worst, std::abs(t.g[j] - ref.g[j]));
            }
          }
          return worst;
        });

  r.add("asymptotics", 0, "expansion ln-coefficients rebuilt from raw ingredients",
        1e-9, [&](std::string&) {
          // recompute f_j from h derivatives and the kernel constants; the
          // constants can be overridden to inject a fault
          HFunction h(kp, cfg);
          const double x = 0.4;
          const ExpansionTable t = expansion(kp, x, 2, cfg);
          double worst = 0.0;
          double jf = 1.0;
          for (int j = 0; j <= 2; ++j) {
            if (j > 0) jf *= j;
            double cj = c_constant(j);
            if (j < static_cast<int>(r.opt().c_override.size()))
              cj = r.opt().c_override[j];
            const double fj = -cj *
                              (h(HSide::h0, j, x) + h(HSide::h1, j, x)) /
                              (M_PI * jf * jf);
            worst = std::max(worst, std::abs(fj - t.f[j]));
          }
          return worst;
        });

  r.add("asymptotics", 0, "g0/g1 agree with the log-derivative forms", 1e-7,
        [&](std::string&) {
          double worst = 0.0;
          for (const BoundaryData* data : {&poly, &kp}) {
            HFunction h(*data, cfg);
            for (double x : {0.3, 0.5, 0.7}) {
              const ExpansionTable t = expansion(*data, x, 1, cfg);
              const double g0 =
                  (remark_derivative_form_a0(h, data->alpha0, x, cfg) +
                   remark_derivative_form_b0(h, data->alpha1, x, cfg)) /
                  M_PI;
              const double g1 = (remark_second_form_a(h, data->alpha0, x, cfg) +
                                 remark_second_form_b(h, data->alpha1, x, cfg)) /
                                (2.0 * M_PI);
              worst = std::max(worst, std::abs(t.g[0] - g0));
              worst = std::max(worst, std::abs(t.g[1] - g1));
            }
          }
          return worst;
        });

  r.add("asymptotics", 0, "swapped-data g array consistency", 1e-10,
        [&](std::string&) {
          const ExpansionTable t = expansion(poly, 0.45, 2, cfg);
          const ExpansionTable ts = expansion(swapped(poly), 0.45, 2, cfg);
          double worst = 0.0;
          for (int j = 0; j <= 2; ++j)
            worst = std::max(worst, std::abs(t.g_swapped[j] - ts.g[j]));
          return worst;
        });

  r.add("asymptotics", 0, "remainder bound |R_2| <= C e^3 |ln e| with C <= 10", 10.0,
        [&](std::string&) {
          const ExpansionTable t = expansion(kp, 0.5, 2, cfg);
          SolutionField field(kp, cfg);
          double cfit = 0.0;
          for (double eps : {1e-2, 5e-3, 2e-3, 1e-3}) {
            const double rem = std::abs(field.evaluate({0.5, 0.5 - eps}) -
                                        evaluate_expansion(t, eps));
            cfit = std::max(cfit, rem / (eps * eps * eps * std::abs(std::log(eps))));
          }
          return cfit;
        });

  // criterion 6 exactly as stated, at the symmetric anchor
  for (int J = 0; J <= 2; ++J) {
    r.add("asymptotics", 6,
          "remainder order fit J=" + std::to_string(J) + " at x=0.5",
          0.0, [&, J](std::string& detail) {
            const OrderFit fit = remainder_order_fit(kp, 0.5, J, 1e-3, 1e-2, 8, cfg);
            const double lo = J + 0.85, hi = J + 1.2;
            if (fit.noise_floor) {
              detail = "remainder at declared noise floor " +
                       std::to_string(fit.noise_floor_value);
              return 0.0;  // pass
            }
            detail = "slope " + std::to_string(fit.slope) + ", window [" +
                     std::to_string(lo) + ", " + std::to_string(hi) + "]";
            const bool ok = fit.slope >= lo && fit.slope <= hi;
            return ok ? 0.0 : std::abs(fit.slope - (J + 1.0));
          });
  }
  // supplementary fits at a generic anchor
  for (int J = 0; J <= 2; ++J) {
    r.add("asymptotics", 0,
          "remainder order fit J=" + std::to_string(J) + " at x=0.3 (supplementary)",
          0.0, [&, J](std::string& detail) {
            const OrderFit fit = remainder_order_fit(kp, 0.3, J, 1e-3, 1e-2, 8, cfg);
            const double lo = J + 0.85, hi = J + 1.2;
            if (fit.noise_floor) {
              detail = "remainder at declared noise floor";
              return 0.0;
            }
            detail = "slope " + std::to_string(fit.slope) + ", window [" +
                     std::to_string(lo) + ", " + std::to_string(hi) + "]";
            return (fit.slope >= lo && fit.slope <= hi)
                       ? 0.0
                       : std::abs(fit.slope - (J + 1.0));
          });
  }
}

inline void run_weyl(Runner& r) {
  const QuadratureConfig cfg = r.opt().cfg;
  const BoundaryData kp = khan_penrose_data();
  const WaveProfile prof{1.0, 1.0, 2.0, 2.0};

  r.add("weyl", 7, "direct scalars vs analytic derivatives at 5 points", 1e-6,
        [&](std::string&) {
          SolutionField field(kp, cfg);
          double worst = 0.0;
          for (auto p : {TrianglePoint{0.2, 0.2}, TrianglePoint{0.3, 0.45},
                         TrianglePoint{0.5, 0.25}, TrianglePoint{0.15, 0.6},
                         TrianglePoint{0.4, 0.4}}) {
            const auto got = weyl_direct(field, p, prof);
            const auto want = weyl_from_oracle(
                p, prof,
                [](TrianglePoint q) {
                  return std::make_pair(oracle::khan_penrose(q, 1, 0),
                                        oracle::khan_penrose(q, 0, 1));
                },
                [](TrianglePoint q) {
                  return SecondDerivatives{oracle::khan_penrose(q, 2, 0),
                                           oracle::khan_penrose(q, 1, 1),
                                           oracle::khan_penrose(q, 0, 2)};
                });
            worst = std::max(worst, std::abs(got.psi0 - want.psi0) / std::abs(want.psi0));
            worst = std::max(worst, std::abs(got.psi2 - want.psi2) / std::abs(want.psi2));
            worst = std::max(worst, std::abs(got.psi4 - want.psi4) / std::abs(want.psi4));
          }
          return worst;
        });

  r.add("weyl", 7, "series (N=2) vs direct gap at eps = 1e-3, decreasing", 1e-2,
        [&](std::string& detail) {
          SolutionField field(kp, cfg);
          const WeylSeries s = weyl_series(kp, 0.5, 2, prof, cfg);
          auto gap_at = [&](double eps) {
            const TrianglePoint p{0.5, 0.5 - eps};
            const auto direct = weyl_direct(field, p, prof);
            const auto series = s.evaluate(eps);
            return std::max(
                {std::abs(series.psi0 - direct.psi0) / std::abs(direct.psi0),
                 std::abs(series.psi2 - direct.psi2) / std::abs(direct.psi2),
                 std::abs(series.psi4 - direct.psi4) / std::abs(direct.psi4)});
          };
          const double g2 = gap_at(1e-2);
          const double g3 = gap_at(1e-3);
          detail = "gap(1e-2) = " + std::to_string(g2) +
                   ", gap(1e-3) = " + std::to_string(g3);
          if (g3 > 1.5 * g2) return 1.0;  // not decreasing
          return g3;
        });

  r.add("weyl", 8, "gamma and G recurrences vs independent tables", 1e-9,
        [&](std::string&) {
          const WeylSeries s = weyl_series(kp, 0.5, 2, prof, cfg);
          const ExpansionTable t = expansion(kp, 0.5, 2, cfg);
          const auto gam = s.gamma();
          const auto G = s.big_g();
          double worst = 0.0;
          for (int j = 0; j <= 2; ++j) {
            worst = std::max(worst, std::abs(gam[j] - (j * t.g[j] + t.f[j])));
            worst = std::max(worst, std::abs(G[j] - ((j - 1) * gam[j] + j * t.f[j])));
          }
          return worst;
        });

  r.add("weyl", 0, "exchange symmetry of the scalars", 1e-8, [&](std::string&) {
    const BoundaryData poly = polynomial_data({0.0, 1.0}, {0.0, 0.0, 1.0});
    SolutionField f(poly, cfg), fs(swapped(poly), cfg);
    const WaveProfile w{1.3, 0.7, 2.0, 3.0};
    const WaveProfile ws{0.7, 1.3, 3.0, 2.0};
    const TrianglePoint p{0.3, 0.45};
    const auto a = weyl_direct(f, p, w);
    const auto b = weyl_direct(fs, {p.y, p.x}, ws);
    return std::max({std::abs(a.psi0 - b.psi4), std::abs(a.psi4 - b.psi0),
                     std::abs(a.psi2 - b.psi2)});
  });
}

}  // namespace detail

/// Run one suite ("abel", "goursat", "asymptotics", "weyl") or "all".
/// With "all" a total-runtime check is appended (criterion 8 budget).
inline std::vector<Check> run_suite(const std::string& suite, const Options& opt = {}) {
  detail::Runner r(opt);
  const auto t0 = std::chrono::steady_clock::now();
  if (suite == "abel" || suite == "all") detail::run_abel(r);
  if (suite == "goursat" || suite == "all") detail::run_goursat(r);
  if (suite == "asymptotics" || suite == "all") detail::run_asymptotics(r);
  if (suite == "weyl" || suite == "all") detail::run_weyl(r);
  auto checks = r.take();
  if (checks.empty()) throw std::invalid_argument("unknown verify suite '" + suite + "'");
  if (suite == "all") {
    Check rt;
    rt.suite = "all";
    rt.criterion = 8;
    rt.name = "total verify runtime";
    rt.threshold = 300.0;
    rt.measured =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rt.pass = rt.measured <= rt.threshold;
    checks.push_back(rt);
  }
  return checks;
}

inline bool all_pass(const std::vector<Check>& checks) {
  for (const Check& c : checks)
    if (!c.pass) return false;
  return true;
}

}  // namespace verify
}  // namespace darboux
