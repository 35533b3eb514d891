// Weyl curvature scalars of the colliding-wave spacetime, both directly from
// the solution field and as diagonal series.
//
// Null-coordinate profiles f(u) = 1/2 - (c1 u)^n1, g(v) = 1/2 - (c2 v)^n2 map
// to the triangle by x = 1/2 - g, y = 1/2 - f. With e = 1 - x - y,
//   Psi0 = (c2 n2 x^(1-1/n2))^2 / 4 * (2V_xx - 3V_x/e + e V_x^3)
//   Psi2 = c1 n1 c2 n2 y^(1-1/n1) x^(1-1/n2) * (V_x V_y - 1/e^2)
//   Psi4 = (c1 n1 y^(1-1/n1))^2 / 4 * (2V_yy - 3V_y/e + e V_y^3).
//
// The series route differentiates the diagonal expansion: with gamma_j =
// j g_j + f_j and G_j = (j-1) gamma_j + j f_j,
//   V_y  = -sum j f_j(x) e^(j-1) ln e - sum gamma_j(x) e^(j-1)
//   V_yy =  sum j(j-1) f_j(x) e^(j-2) ln e + sum G_j(x) e^(j-2)
// and the x-derivatives use the same functionals built from the swapped data
// at anchor y. Psi2's product of series is expanded as a Cauchy product with
// the -1/e^2 term kept separate; the cubic terms are cubed numerically at the
// given e, exactly as the unexpanded bracket prescribes.
#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "darboux/asymptotics.hpp"
#include "darboux/goursat.hpp"

namespace darboux {

struct WaveProfile {
  double c1 = 1.0, c2 = 1.0;
  double n1 = 1.0, n2 = 1.0;

  void validate() const {
    if (!(c1 > 0.0 && c2 > 0.0 && n1 > 0.0 && n2 > 0.0))
      throw std::invalid_argument("WaveProfile: c_i and n_i must be positive");
  }
};

struct NullCoordinates {
  double u = 0.0, v = 0.0;
  double f = 0.0, g = 0.0;
};

struct WeylComponents {
  double psi0 = 0.0, psi2 = 0.0, psi4 = 0.0;
};

/// (x,y) -> (u,v,f,g). The axes map to u = 0 / v = 0 exactly.
inline NullCoordinates map_coordinates(TrianglePoint p, const WaveProfile& w) {
  w.validate();
  if (!p.in_domain()) throw DomainError("map_coordinates: point outside the triangle");
  NullCoordinates n;
  n.g = 0.5 - p.x;
  n.f = 0.5 - p.y;
  n.u = p.y == 0.0 ? 0.0 : std::pow(p.y, 1.0 / w.n1) / w.c1;
  n.v = p.x == 0.0 ? 0.0 : std::pow(p.x, 1.0 / w.n2) / w.c2;
  return n;
}

/// Inverse of map_coordinates.
inline TrianglePoint unmap_coordinates(const NullCoordinates& n, const WaveProfile& w) {
  return TrianglePoint{std::pow(w.c2 * n.v, w.n2), std::pow(w.c1 * n.u, w.n1)};
}

namespace detail {

inline double profile_px(TrianglePoint p, const WaveProfile& w) {
  return w.c2 * w.n2 * std::pow(p.x, 1.0 - 1.0 / w.n2);  // |g'(v)|
}
inline double profile_py(TrianglePoint p, const WaveProfile& w) {
  return w.c1 * w.n1 * std::pow(p.y, 1.0 - 1.0 / w.n1);  // |f'(u)|
}

inline WeylComponents weyl_from_derivatives(TrianglePoint p, const WaveProfile& w,
                                            double vx, double vy, double vxx,
                                            double vyy) {
  const double eps = 1.0 - p.x - p.y;
  const double px = profile_px(p, w), py = profile_py(p, w);
  WeylComponents out;
  out.psi0 = px * px / 4.0 * (2.0 * vxx - 3.0 * vx / eps + eps * vx * vx * vx);
  out.psi2 = px * py * (vx * vy - 1.0 / (eps * eps));
  out.psi4 = py * py / 4.0 * (2.0 * vyy - 3.0 * vy / eps + eps * vy * vy * vy);
  return out;
}

}  // namespace detail

/// Weyl scalars assembled from the computed field derivatives.
inline WeylComponents weyl_direct(const SolutionField& field, TrianglePoint p,
                                  const WaveProfile& w) {
  w.validate();
  if (!(p.x > 0.0 && p.y > 0.0))
    throw DomainError("weyl_direct: needs x > 0 and y > 0");
  const auto [vx, vy] = field.gradient(p);
  const SecondDerivatives s = field.second(p);
  return detail::weyl_from_derivatives(p, w, vx, vy, s.xx, s.yy);
}

/// Same scalars from any closed-form derivative source (oracle route).
template <class Gradient, class Second>
WeylComponents weyl_from_oracle(TrianglePoint p, const WaveProfile& w, Gradient&& grad,
                                Second&& second) {
  const auto [vx, vy] = grad(p);
  const auto s = second(p);
  return detail::weyl_from_derivatives(p, w, vx, vy, s.xx, s.yy);
}

// Diagonal series data at a fixed abscissa x. The y-direction arrays are the
// expansion of the given data at x; the x-direction ("tilde") arrays come
// from the swapped data and are re-anchored at y = 1 - x - e for each
// requested e, which is what keeps the stated error orders; nominal tilde
// arrays at anchor 1 - x are stored for inspection and recurrence tests.
class WeylSeries {
 public:
  WeylSeries(BoundaryData data, double x, int order, WaveProfile profile,
             QuadratureConfig cfg)
      : data_(std::move(data)),
        x_(x),
        order_(order),
        profile_(profile),
        cfg_(cfg),
        table_(expansion(data_, x, order, cfg)),
        swapped_(swapped(data_)),
        tilde_cache_(std::make_shared<TildeCache>()) {
    profile_.validate();
    nominal_tilde_ = detail::expansion_impl(swapped_, 1.0 - x, order, cfg, false);
  }

  double x() const { return x_; }
  int order() const { return order_; }
  const ExpansionTable& table() const { return table_; }

  std::vector<double> f() const { return table_.f; }
  std::vector<double> gamma() const { return gamma_of(table_); }
  std::vector<double> big_g() const { return big_g_of(table_); }
  std::vector<double> f_tilde_nominal() const { return nominal_tilde_.f; }
  std::vector<double> gamma_tilde_nominal() const { return gamma_of(nominal_tilde_); }
  std::vector<double> big_g_tilde_nominal() const { return big_g_of(nominal_tilde_); }

  /// All three scalars at the point (x, 1 - x - eps).
  WeylComponents evaluate(double eps) const {
    if (!(eps > 0.0 && eps < 1.0 - x_))
      throw std::invalid_argument("WeylSeries::evaluate: need 0 < eps < 1 - x");
    const double y = 1.0 - x_ - eps;
    const TrianglePoint p{x_, y};
    const ExpansionTable tilde = tilde_at(y);

    const auto gam = gamma_of(table_), G = big_g_of(table_);
    const auto gam_t = gamma_of(tilde), G_t = big_g_of(tilde);
    const double le = std::log(eps);

    // V_y and V_yy partial sums (x-anchored), V_x and V_xx (swapped, y-anchored)
    auto series_d1 = [&](const std::vector<double>& f, const std::vector<double>& g1) {
      double s = 0.0, pw = 1.0 / eps;
      for (int j = 0; j <= order_; ++j) {
        s -= (j * f[j] * le + g1[j]) * pw;
        pw *= eps;
      }
      return s;
    };
    const double vy = series_d1(table_.f, gam);
    const double vx = series_d1(tilde.f, gam_t);

    const double px = detail::profile_px(p, profile_);
    const double py = detail::profile_py(p, profile_);

    WeylComponents out;
    // Psi0 / Psi4 brackets: power and ln sums plus the cubic term composed
    // numerically from the truncated first-derivative series.
    {
      double s = 0.0, pw = 1.0 / (eps * eps);
      for (int j = 0; j <= order_; ++j) {
        s += (2.0 * G_t[j] + 3.0 * gam_t[j] + j * (2.0 * j + 1.0) * tilde.f[j] * le) * pw;
        pw *= eps;
      }
      out.psi0 = px * px / 4.0 * (s + eps * vx * vx * vx);
    }
    {
      double s = 0.0, pw = 1.0 / (eps * eps);
      for (int j = 0; j <= order_; ++j) {
        s += (2.0 * G[j] + 3.0 * gam[j] + j * (2.0 * j + 1.0) * table_.f[j] * le) * pw;
        pw *= eps;
      }
      out.psi4 = py * py / 4.0 * (s + eps * vy * vy * vy);
    }
    // Psi2: Cauchy products of the two first-derivative series, the -1/e^2
    // kept separate from the gamma_0 gamma~_0 term.
    {
      double s = -1.0 / (eps * eps);
      double pw = 1.0 / (eps * eps);
      for (int j = 0; j <= order_; ++j) {
        double cpow = 0.0, cln = 0.0, cln2 = 0.0;
        for (int k = 0; k <= j; ++k) {
          const int l = j - k;
          cpow += gam[k] * gam_t[l];
          cln += k * table_.f[k] * gam_t[l] + k * tilde.f[k] * gam[l];
          cln2 += double(k) * l * table_.f[k] * tilde.f[l];
        }
        s += (cpow + cln * le + cln2 * le * le) * pw;
        pw *= eps;
      }
      out.psi2 = px * py * s;
    }
    return out;
  }

 private:
  static std::vector<double> gamma_of(const ExpansionTable& t) {
    std::vector<double> g(t.J + 1);
    for (int j = 0; j <= t.J; ++j) g[j] = j * t.g[j] + t.f[j];
    return g;
  }
  static std::vector<double> big_g_of(const ExpansionTable& t) {
    std::vector<double> G(t.J + 1);
    for (int j = 0; j <= t.J; ++j) {
      const double gam = j * t.g[j] + t.f[j];
      G[j] = (j - 1) * gam + j * t.f[j];
    }
    return G;
  }

  const ExpansionTable& tilde_at(double y) const {
    std::lock_guard<std::mutex> lock(tilde_cache_->mu);
    auto it = tilde_cache_->map.find(y);
    if (it == tilde_cache_->map.end())
      it = tilde_cache_->map
               .emplace(y, detail::expansion_impl(swapped_, y, order_, cfg_, false))
               .first;
    return it->second;
  }

  struct TildeCache {
    std::mutex mu;
    std::map<double, ExpansionTable> map;
  };

  BoundaryData data_;
  double x_;
  int order_;
  WaveProfile profile_;
  QuadratureConfig cfg_;
  ExpansionTable table_;
  BoundaryData swapped_;
  ExpansionTable nominal_tilde_;
  std::shared_ptr<TildeCache> tilde_cache_;
};

inline WeylSeries weyl_series(const BoundaryData& data, double x, int order,
                              const WaveProfile& profile, const QuadratureConfig& cfg) {
  return WeylSeries(data, x, order, profile, cfg);
}

}  // namespace darboux
