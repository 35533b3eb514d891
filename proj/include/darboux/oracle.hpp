// Ground truth and checkers: the exact Khan-Penrose solution with analytic
// derivatives and printed expansion coefficients, a brute-force evaluator of
// the solution representation on an independent code path, and a PDE-residual
// checker combining evaluator derivatives with finite differences of values.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "darboux/goursat.hpp"

namespace darboux {
namespace oracle {

/// Exact Khan-Penrose solution
///   V = -ln((1 + P)/(1 - P)),  P = sqrt(x) sqrt(1-y) + sqrt(y) sqrt(1-x),
/// or its partial derivative d^(dx+dy) V / dx^dx dy^dy for dx + dy <= 2.
inline double khan_penrose(TrianglePoint p, int dx = 0, int dy = 0) {
  const double x = p.x, y = p.y;
  const double sx = std::sqrt(x), sy = std::sqrt(y);
  const double cx = std::sqrt(1.0 - x), cy = std::sqrt(1.0 - y);
  const double P = sx * cy + sy * cx;
  if (P >= 1.0)
    throw DomainError("khan_penrose: log argument non-positive (focusing diagonal)");
  if (dx + dy == 0) return -std::log((1.0 + P) / (1.0 - P));

  const double vp = -2.0 / (1.0 - P * P);
  const double px = 0.5 * cy / sx - 0.5 * sy / cx;
  const double py = 0.5 * cx / sy - 0.5 * sx / cy;
  if (dx == 1 && dy == 0) return vp * px;
  if (dx == 0 && dy == 1) return vp * py;

  const double vpp = -4.0 * P / ((1.0 - P * P) * (1.0 - P * P));
  if (dx == 1 && dy == 1) {
    const double pxy = -0.25 / (sx * cy) - 0.25 / (sy * cx);
    return vpp * px * py + vp * pxy;
  }
  if (dx == 2 && dy == 0) {
    const double pxx = -0.25 * cy * std::pow(x, -1.5) - 0.25 * sy * std::pow(1.0 - x, -1.5);
    return vpp * px * px + vp * pxx;
  }
  if (dx == 0 && dy == 2) {
    const double pyy = -0.25 * cx * std::pow(y, -1.5) - 0.25 * sx * std::pow(1.0 - y, -1.5);
    return vpp * py * py + vp * pyy;
  }
  throw std::invalid_argument("khan_penrose: derivative order beyond 2");
}

// Printed diagonal expansion of the Khan-Penrose solution,
//   V(x,1-x-e) = 2 ln e - ln(16 x (1-x)) - (1-2x)/(2x(1-x)) e
//                + 3(1-2x+2x^2)/(16 x^2 (1-x)^2) e^2 + O(e^3).
struct KhanPenroseExpansion {
  std::vector<double> f;  // ln-coefficients f_0..f_J
  std::vector<double> g;  // power coefficients g_0..g_J
};

inline KhanPenroseExpansion khan_penrose_expansion(double x, int J = 2) {
  if (J < 0 || J > 2)
    throw std::invalid_argument("khan_penrose_expansion: printed orders are 0..2");
  KhanPenroseExpansion e;
  e.f = {2.0, 0.0, 0.0};
  e.g = {-std::log(16.0 * x * (1.0 - x)), -(1.0 - 2.0 * x) / (2.0 * x * (1.0 - x)),
         3.0 * (1.0 - 2.0 * x + 2.0 * x * x) / (16.0 * x * x * (1.0 - x) * (1.0 - x))};
  e.f.resize(J + 1);
  e.g.resize(J + 1);
  return e;
}

namespace detail {

// Self-contained adaptive Simpson, deliberately independent of the main
// quadrature engine.
inline double simpson_recurse(const std::function<double(double)>& f, double a, double b,
                              double fa, double fm, double fb, double whole, double tol,
                              int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double both = left + right;
  const double err = (both - whole) / 15.0;
  if (depth <= 0 || std::abs(err) <= tol) return both + err;
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol, int depth = 32) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, b, fa, fm, fb, whole, tol, depth);
}

}  // namespace detail

/// Evaluate the solution representation through a completely independent
/// discretization: both integral levels are mapped by the sine-squared
/// substitution that removes the square-root endpoint singularities, then
/// integrated by adaptive Simpson at a node budget well above the main path.
/// Intended for data with corner exponent alpha <= 1/2.
inline double brute_force_solution(const BoundaryData& data, TrianglePoint p,
                                   double tol = 1e-11) {
  if (!p.in_domain() || 1.0 - p.x - p.y < 1e-4)
    throw DomainError("brute_force_solution: need 1 - x - y >= 1e-4");
  const double half_pi = 1.57079632679489661923;

  auto term = [&](const SingularFunction& w, double x, double y) {
    if (x == 0.0) return 0.0;
    auto inner = [&](double k) {
      if (k == 0.0) return 0.0;
      const double sk = std::sqrt(k);
      auto f = [&](double phi) {
        const double s = std::sin(phi);
        return w(k * s * s) * s;
      };
      return 2.0 * sk * detail::simpson(f, 1e-9, half_pi, 0.25 * tol, 34);
    };
    auto outer = [&](double theta) {
      const double s = std::sin(theta);
      const double k = x * s * s;
      const double g = std::sqrt(1.0 - k) / std::sqrt(1.0 - y - k);
      return g * inner(k) * s;
    };
    return 2.0 * std::sqrt(x) * detail::simpson(outer, 1e-9, half_pi, 0.25 * tol, 34) /
           M_PI;
  };
  return term(data.v0x, p.x, p.y) + term(data.v1y, p.y, p.x);
}

// Field-like adapter: a value function plus optional analytic derivative
// routes. SolutionField and the closed-form oracle both fit.
struct PointEvaluator {
  std::function<double(TrianglePoint)> value;
  std::function<std::pair<double, double>(TrianglePoint)> gradient;  // optional
  std::function<SecondDerivatives(TrianglePoint)> second;            // optional
};

inline PointEvaluator make_evaluator(const SolutionField& field) {
  return PointEvaluator{
      [&field](TrianglePoint p) { return field.evaluate(p); },
      [&field](TrianglePoint p) { return field.gradient(p); },
      [&field](TrianglePoint p) { return field.second(p); }};
}

inline PointEvaluator khan_penrose_evaluator() {
  return PointEvaluator{
      [](TrianglePoint p) { return khan_penrose(p); },
      [](TrianglePoint p) {
        return std::make_pair(khan_penrose(p, 1, 0), khan_penrose(p, 0, 1));
      },
      [](TrianglePoint p) {
        return SecondDerivatives{khan_penrose(p, 2, 0), khan_penrose(p, 1, 1),
                                 khan_penrose(p, 0, 2)};
      }};
}

struct ResidualReport {
  struct Entry {
    double x, y;
    double fd_residual;     // relative, from 5-point differences of values
    double deriv_residual;  // relative, from the evaluator's own derivatives
  };
  std::vector<Entry> entries;
  double max_rel_fd = 0.0;
  double max_rel_deriv = 0.0;
  double threshold_fd = 0.0;
  double threshold_deriv = 0.0;
  bool has_deriv_route = false;
  bool pass = false;
};

namespace detail {

// 5-point first-derivative stencil; shifts to a one-sided variant when the
// point sits within 2h of the domain edge along that direction.
struct Stencil {
  std::array<int, 5> offs;
  std::array<double, 5> coef;  // divided by h outside
};

inline Stencil stencil_for(double t, double room_lo, double room_hi, double h) {
  if (t - 2.0 * h >= room_lo && t + 2.0 * h <= room_hi)
    return {{-2, -1, 0, 1, 2}, {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12}};
  if (t - 2.0 * h < room_lo)
    return {{0, 1, 2, 3, 4}, {-25.0 / 12, 48.0 / 12, -36.0 / 12, 16.0 / 12, -3.0 / 12}};
  return {{-4, -3, -2, -1, 0}, {3.0 / 12, -16.0 / 12, 36.0 / 12, -48.0 / 12, 25.0 / 12}};
}

}  // namespace detail

/// Residual of the Euler-Darboux equation at each grid point, both from the
/// evaluator's own second derivatives (when provided) and from 5-point finite
/// differences of plain values at step h. Residuals are normalized by
/// 1 + |V_xy|.
inline ResidualReport residual_check(const PointEvaluator& ev,
                                     const std::vector<TrianglePoint>& grid,
                                     double threshold_fd, double threshold_deriv,
                                     double h = 1e-4) {
  ResidualReport rep;
  rep.threshold_fd = threshold_fd;
  rep.threshold_deriv = threshold_deriv;
  rep.has_deriv_route = static_cast<bool>(ev.second);
  for (const TrianglePoint& p : grid) {
    const double eps = 1.0 - p.x - p.y;
    const auto sx = detail::stencil_for(p.x, 0.0, p.x + eps - 4.0 * h, h);
    const auto sy = detail::stencil_for(p.y, 0.0, p.y + eps - 4.0 * h, h);

    double vx = 0.0, vy = 0.0, vxy = 0.0;
    for (int i = 0; i < 5; ++i) {
      vx += sx.coef[i] * ev.value({p.x + sx.offs[i] * h, p.y});
      vy += sy.coef[i] * ev.value({p.x, p.y + sy.offs[i] * h});
      for (int j = 0; j < 5; ++j) {
        if (sx.coef[i] == 0.0 || sy.coef[j] == 0.0) continue;
        vxy += sx.coef[i] * sy.coef[j] * ev.value({p.x + sx.offs[i] * h, p.y + sy.offs[j] * h});
      }
    }
    vx /= h;
    vy /= h;
    vxy /= h * h;

    const double fd_res = std::abs(vxy - (vx + vy) / (2.0 * eps)) / (1.0 + std::abs(vxy));

    double dv_res = 0.0;
    if (rep.has_deriv_route) {
      const auto [gx, gy] = ev.gradient(p);
      const SecondDerivatives s = ev.second(p);
      dv_res = std::abs(s.xy - (gx + gy) / (2.0 * eps)) / (1.0 + std::abs(s.xy));
    }
    rep.entries.push_back({p.x, p.y, fd_res, dv_res});
    rep.max_rel_fd = std::max(rep.max_rel_fd, fd_res);
    rep.max_rel_deriv = std::max(rep.max_rel_deriv, dv_res);
  }
  rep.pass = rep.max_rel_fd <= threshold_fd &&
             (!rep.has_deriv_route || rep.max_rel_deriv <= threshold_deriv);
  return rep;
}

}  // namespace oracle
}  // namespace darboux
