// Goursat problem for the Euler-Darboux equation
//     V_xy = (V_x + V_y) / (2 (1 - x - y))
// on the triangle D = {x >= 0, y >= 0, x + y < 1} with data V(x,0) = V_0(x),
// V(0,y) = V_1(y). The solution is represented by two Abel-type integrals;
// the second term reduces to the first under (x <-> y, V_0 <-> V_1), so a
// single audited kernel serves both:
//     V(x,y) = T[V_0'](x,y) + T[V_1'](y,x),
//     T[w](x,y) = (1/pi) int_0^x g(y,k) (A w)(k) (x-k)^(-1/2) dk,
//     g(y,k) = sqrt(1-k) / sqrt(1-y-k).
// Partial derivatives are assembled from the Abel derivative recursion and
// differentiation under the integral sign, never from finite differences.
#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "darboux/abel.hpp"
#include "darboux/quadrature.hpp"

namespace darboux {

struct DomainError : std::domain_error {
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

struct TrianglePoint {
  double x = 0.0;
  double y = 0.0;

  bool in_domain() const { return x >= 0.0 && y >= 0.0 && x + y < 1.0; }
  bool interior(double eps_min) const {
    return x > 0.0 && y > 0.0 && 1.0 - x - y >= eps_min;
  }
};

// Goursat data: boundary traces with their derivative functions. v0x / v1y
// carry analytic derivatives (order n-1 for C^n data); alpha0 / alpha1 are the
// corner exponents of V_0x and V_1y. The theorems are stated with one shared
// alpha; distinct values per side are accepted and max(alpha0, alpha1) plays
// the shared role.
struct BoundaryData {
  std::function<double(double)> v0;
  std::function<double(double)> v1;
  SingularFunction v0x;
  SingularFunction v1y;
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  int order = 2;

  double alpha() const { return std::max(alpha0, alpha1); }

  // Numerical checks of the compatibility hypotheses: zero corner values and
  // bounded weighted derivatives near the corners.
  void validate() const {
    if (order < 2) throw std::invalid_argument("BoundaryData: order >= 2 required");
    if (std::abs(v0(1e-8)) > 1e-2 || std::abs(v1(1e-8)) > 1e-2)
      throw std::invalid_argument("BoundaryData: V_0(0) = V_1(0) = 0 violated");
    validate_singular_function(v0x, std::min(v0x.order(), 2));
    validate_singular_function(v1y, std::min(v1y.order(), 2));
  }
};

inline BoundaryData swapped(const BoundaryData& d) {
  BoundaryData s;
  s.v0 = d.v1;
  s.v1 = d.v0;
  s.v0x = d.v1y;
  s.v1y = d.v0x;
  s.alpha0 = d.alpha1;
  s.alpha1 = d.alpha0;
  s.order = d.order;
  return s;
}

inline BoundaryData linear_combination(double ca, const BoundaryData& a, double cb,
                                       const BoundaryData& b) {
  BoundaryData r;
  auto av0 = a.v0, bv0 = b.v0, av1 = a.v1, bv1 = b.v1;
  r.v0 = [ca, av0, cb, bv0](double x) { return ca * av0(x) + cb * bv0(x); };
  r.v1 = [ca, av1, cb, bv1](double y) { return ca * av1(y) + cb * bv1(y); };
  r.v0x = sf_add(sf_scale(ca, a.v0x), sf_scale(cb, b.v0x));
  r.v1y = sf_add(sf_scale(ca, a.v1y), sf_scale(cb, b.v1y));
  r.alpha0 = std::max(a.alpha0, b.alpha0);
  r.alpha1 = std::max(a.alpha1, b.alpha1);
  r.order = std::min(a.order, b.order);
  return r;
}

namespace detail {

// g(y,k) = (1-k)^(1/2) (1-y-k)^(-1/2) and the partials entering the first and
// second solution derivatives. rho = 1-y-k is passed exactly by the caller
// where it matters.
struct Kernel {
  double g, gy, gyy, gk, gky, gkk;
};

inline Kernel kernel_partials(double y, double k) {
  const double r = 1.0 - k;
  const double rho = 1.0 - y - k;
  const double sr = std::sqrt(r);
  const double srho = std::sqrt(rho);
  Kernel K;
  K.g = sr / srho;
  K.gy = 0.5 * K.g / rho;
  K.gyy = 0.75 * K.g / (rho * rho);
  K.gk = -0.5 / (sr * srho) + 0.5 * sr / (rho * srho);
  K.gky = -0.25 / (sr * rho * srho) + 0.75 * sr / (rho * rho * srho);
  K.gkk = -0.25 / (sr * r * srho) - 0.5 / (sr * rho * srho) +
          0.75 * sr / (rho * rho * srho);
  return K;
}

}  // namespace detail

struct SecondDerivatives {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

// Immutable evaluator of the solution V and its first and second partials on
// Int D. Inner Abel components are memoized per data side; everything is safe
// to share across threads and results do not depend on scheduling.
class SolutionField {
 public:
  SolutionField(BoundaryData data, QuadratureConfig cfg, double eps_min = 1e-6)
      : data_(std::move(data)),
        cfg_(cfg),
        eps_min_(eps_min),
        a0_(data_.v0x, cfg),
        a1_(data_.v1y, cfg) {}

  const BoundaryData& data() const { return data_; }
  const QuadratureConfig& config() const { return cfg_; }
  double eps_min() const { return eps_min_; }

  double evaluate(TrianglePoint p) const {
    check_domain(p);
    if (p.x == 0.0 && p.y == 0.0) return 0.0;
    if (p.y == 0.0) return data_.v0(p.x);
    if (p.x == 0.0) return data_.v1(p.y);
    check_diagonal(p);
    return term_value(a0_, p.x, p.y) + term_value(a1_, p.y, p.x);
  }

  std::pair<double, double> gradient(TrianglePoint p) const {
    check_interior(p);
    const double vx = term_d1(a0_, p.x, p.y) + term_d2(a1_, p.y, p.x);
    const double vy = term_d2(a0_, p.x, p.y) + term_d1(a1_, p.y, p.x);
    return {vx, vy};
  }

  SecondDerivatives second(TrianglePoint p) const {
    check_interior(p);
    if (data_.order < 2 || data_.v0x.order() < 2 || data_.v1y.order() < 2)
      throw MissingDerivative("SolutionField::second: data must carry second derivatives");
    SecondDerivatives s;
    s.xx = term_d11(a0_, p.x, p.y) + term_d22(a1_, p.y, p.x);
    s.yy = term_d22(a0_, p.x, p.y) + term_d11(a1_, p.y, p.x);
    s.xy = term_d12(a0_, p.x, p.y) + term_d12(a1_, p.y, p.x);
    return s;
  }

 private:
  void check_domain(TrianglePoint p) const {
    if (!p.in_domain())
      throw DomainError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                        ") is outside the triangle");
  }
  void check_diagonal(TrianglePoint p) const {
    if (1.0 - p.x - p.y < eps_min_)
      throw DiagonalBlowup("point closer than eps_min to the focusing diagonal; "
                           "use the asymptotic expansion there");
  }
  void check_interior(TrianglePoint p) const {
    check_domain(p);
    if (!p.interior(eps_min_))
      throw DomainError("derivatives require an interior point");
  }

  // outer integral of phi(k) / sqrt(x-k) over (0,x); the exact distance to x
  // is forwarded into the kernel
  template <class Phi>
  double outer(const Phi& phi, double x) const {
    const double mu = std::max(0.0, std::max(data_.alpha0, data_.alpha1) - 0.5);
    return integrate_singular(
        [&phi](double k, double, double dist_x) { return phi(k) / std::sqrt(dist_x); },
        0.0, x, EndpointExponents{mu, 0.5}, cfg_);
  }

  double term_value(const AbelEvaluator& a, double x, double y) const {
    return outer(
               [&](double k) {
                 return detail::kernel_partials(y, k).g * a.value(k);
               },
               x) /
           M_PI;
  }

  double term_d1(const AbelEvaluator& a, double x, double y) const {
    const double ig = outer(
        [&](double k) { return detail::kernel_partials(y, k).g * a.value(k); }, x);
    const double ikgk = outer(
        [&](double k) {
          const auto K = detail::kernel_partials(y, k);
          const double s1 = 0.5 * a.component(0, k) + a.component(1, k);  // k A'(k)
          return K.gk * k * a.value(k) + K.g * s1;
        },
        x);
    return (0.5 * ig + ikgk) / (M_PI * x);
  }

  double term_d2(const AbelEvaluator& a, double x, double y) const {
    return outer(
               [&](double k) { return detail::kernel_partials(y, k).gy * a.value(k); },
               x) /
           M_PI;
  }

  double term_d11(const AbelEvaluator& a, double x, double y) const {
    const double ig = outer(
        [&](double k) { return detail::kernel_partials(y, k).g * a.value(k); }, x);
    const double ikgk = outer(
        [&](double k) {
          const auto K = detail::kernel_partials(y, k);
          const double s1 = 0.5 * a.component(0, k) + a.component(1, k);
          return K.gk * k * a.value(k) + K.g * s1;
        },
        x);
    const double ik2gkk = outer(
        [&](double k) {
          const auto K = detail::kernel_partials(y, k);
          const double s1 = 0.5 * a.component(0, k) + a.component(1, k);
          const double s2 = -0.25 * a.component(0, k) + a.component(1, k) +
                            a.component(2, k);  // k^2 A''(k)
          return K.gkk * k * k * a.value(k) + 2.0 * K.gk * k * s1 + K.g * s2;
        },
        x);
    return (-0.25 * ig + ikgk + ik2gkk) / (M_PI * x * x);
  }

  double term_d12(const AbelEvaluator& a, double x, double y) const {
    const double igy = outer(
        [&](double k) { return detail::kernel_partials(y, k).gy * a.value(k); }, x);
    const double ikmk = outer(
        [&](double k) {
          const auto K = detail::kernel_partials(y, k);
          const double s1 = 0.5 * a.component(0, k) + a.component(1, k);
          return K.gky * k * a.value(k) + K.gy * s1;
        },
        x);
    return (0.5 * igy + ikmk) / (M_PI * x);
  }

  double term_d22(const AbelEvaluator& a, double x, double y) const {
    return outer(
               [&](double k) { return detail::kernel_partials(y, k).gyy * a.value(k); },
               x) /
           M_PI;
  }

  BoundaryData data_;
  QuadratureConfig cfg_;
  double eps_min_;
  AbelEvaluator a0_;
  AbelEvaluator a1_;
};

struct GridSpec {
  double x0 = 0.0, x1 = 0.9;
  int nx = 10;
  double y0 = 0.0, y1 = 0.9;
  int ny = 10;
  double eps_min = 1e-6;
  bool with_xy = false;  // also compute V_xy per interior node
};

struct FieldRow {
  double x = 0.0, y = 0.0;
  double v = 0.0, vx = 0.0, vy = 0.0, vxy = 0.0;
  bool has_value = false;
  bool has_derivs = false;
  std::string note;
};

struct FieldTable {
  std::vector<FieldRow> rows;
};

/// Tabulate the field over a rectangular grid. Nodes with x + y >= 1 - eps_min
/// are skipped and flagged; axis nodes report the boundary trace only. Rows
/// are computed in parallel but stored in grid iteration order (x outer, y
/// inner), so output is independent of scheduling.
inline FieldTable evaluate_grid(const SolutionField& field, const GridSpec& spec,
                                int threads = 1) {
  const auto coord = [](double lo, double hi, int n, int i) {
    return n <= 1 ? lo : lo + (hi - lo) * i / (n - 1);
  };
  std::vector<FieldRow> rows(static_cast<std::size_t>(spec.nx) * spec.ny);
  auto work = [&](int row_begin, int row_end) {
    for (int idx = row_begin; idx < row_end; ++idx) {
      const int ix = idx / spec.ny;
      const int iy = idx % spec.ny;
      FieldRow& r = rows[idx];
      r.x = coord(spec.x0, spec.x1, spec.nx, ix);
      r.y = coord(spec.y0, spec.y1, spec.ny, iy);
      const TrianglePoint p{r.x, r.y};
      if (!p.in_domain() || 1.0 - r.x - r.y < spec.eps_min) {
        r.note = "skipped_diagonal";
        continue;
      }
      try {
        r.v = field.evaluate(p);
        r.has_value = true;
        if (p.interior(spec.eps_min)) {
          auto [vx, vy] = field.gradient(p);
          r.vx = vx;
          r.vy = vy;
          if (spec.with_xy) r.vxy = field.second(p).xy;
          r.has_derivs = true;
        } else {
          r.note = "boundary_trace";
        }
      } catch (const std::exception& e) {
        r.note = std::string("error: ") + e.what();
        r.has_value = false;
        r.has_derivs = false;
      }
    }
  };
  const int total = spec.nx * spec.ny;
  if (threads <= 1 || total < 4) {
    work(0, total);
  } else {
    const int nw = std::min(threads, total);
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) {
      const int lo = total * w / nw;
      const int hi = total * (w + 1) / nw;
      pool.emplace_back(work, lo, hi);
    }
    for (auto& t : pool) t.join();
  }
  return FieldTable{std::move(rows)};
}

}  // namespace darboux
