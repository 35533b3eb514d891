// All ingredients of the diagonal expansion
//   V(x,1-x-e) = sum_j f_j(x) e^j ln(e) + sum_j g_j(x) e^j + O(e^(J+1) ln e)
// with
//   f_j = -c_j (h_0^(j) + h_1^(j)) / (pi (j!)^2),
//   g_j = ((-1)^j A_j + B_j) / pi,
// where h_0(k) = sqrt(1-k) A[V_0x](k), h_1(k) = sqrt(k) A[V_1y](1-k), and
// A_j / B_j combine a finite-part integral of the j-th Taylor remainder of h,
// rational sums, a log term, and universal kernel tail constants.
//
// The finite-part integrals are split at the midpoint between the anchor and
// the boundary. On the near piece the Taylor remainder is rewritten through
// its integral form and the k-integration carried out in closed form, which
// leaves a single log-singular integral of h^(j+1); this avoids dividing the
// quadrature noise of h by (x-k)^(j+1).
#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "darboux/abel.hpp"
#include "darboux/datasets.hpp"
#include "darboux/goursat.hpp"
#include "darboux/quadrature.hpp"

namespace darboux {

constexpr int kMaxExpansionOrder = 6;

/// c_j = 2^(-j) prod_{l<j} (2l+1); equals the j-th kernel derivative
/// (-1)^j d^j/dt^j K_0(1,0) = d^j/dt^j K_1(1,0).
inline double c_constant(int j) {
  if (j < 0) throw std::invalid_argument("c_constant: j >= 0 required");
  double c = 1.0;
  for (int l = 0; l < j; ++l) c *= (2.0 * l + 1.0) / 2.0;
  return c;
}

enum class HSide { h0, h1 };

// Evaluator of h_0, h_1 and their derivatives for one data set. Derivatives
// come from the Leibniz rule over the explicit square-root factors and the
// Abel derivative recursion; inner components are memoized.
class HFunction {
 public:
  HFunction(const BoundaryData& data, QuadratureConfig cfg)
      : a0_(data.v0x, cfg), a1_(data.v1y, cfg) {}

  double operator()(HSide side, int j, double k) const {
    double sum = 0.0;
    if (side == HSide::h0) {
      // h_0(k) = sqrt(1-k) * A0(k)
      for (int m = 0; m <= j; ++m) {
        const double sfac = detail::binomial(j, m) *
                            detail::falling_factorial(0.5, m) *
                            (m % 2 ? -1.0 : 1.0) * std::pow(1.0 - k, 0.5 - m);
        sum += sfac * a0_.derivative(j - m, k);
      }
    } else {
      // h_1(k) = sqrt(k) * A1(1-k)
      for (int m = 0; m <= j; ++m) {
        const double sfac = detail::binomial(j, m) *
                            detail::falling_factorial(0.5, m) * std::pow(k, 0.5 - m);
        const double sign = (j - m) % 2 ? -1.0 : 1.0;
        sum += sfac * sign * a1_.derivative(j - m, 1.0 - k);
      }
    }
    return sum;
  }

  int max_order(HSide side) const {
    return side == HSide::h0 ? a0_.function().order() : a1_.function().order();
  }

 private:
  AbelEvaluator a0_;
  AbelEvaluator a1_;
};

inline double h_function(const BoundaryData& data, HSide side, double k, int j,
                         const QuadratureConfig& cfg) {
  return HFunction(data, cfg)(side, j, k);
}

/// H^j(x,k) = h(k) - sum_{l<=j} h^(l)(x) (k-x)^l / l!, the j-th Taylor
/// remainder about the anchor x.
inline double taylor_remainder(const HFunction& h, HSide side, double x, double k, int j) {
  double sum = h(side, 0, k);
  double pw = 1.0, fact = 1.0;
  for (int l = 0; l <= j; ++l) {
    if (l > 0) {
      pw *= (k - x);
      fact *= l;
    }
    sum -= h(side, l, x) * pw / fact;
  }
  return sum;
}

inline double taylor_remainder(const BoundaryData& data, HSide side, double x, double k,
                               int j, const QuadratureConfig& cfg) {
  return taylor_remainder(HFunction(data, cfg), side, x, k, j);
}

// x-independent constants: c_j, and the kernel tail integrals entering A_j
// (the (0,1) moment plus the subtracted (1,inf) piece) and B_j (subtracted
// piece only). Computed once per order and tolerance, then cached.
struct UniversalConstants {
  std::vector<double> c;
  std::vector<double> tail_k0;
  std::vector<double> tail_k1;

  static const UniversalConstants& get(int J, const QuadratureConfig& cfg) {
    static std::mutex mu;
    static std::map<std::pair<int, long>, UniversalConstants> cache;
    const std::pair<int, long> key{J, std::lround(-std::log10(cfg.rel_tol))};
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    UniversalConstants u;
    for (int j = 0; j <= J; ++j) {
      u.c.push_back(c_constant(j));
      const double moment = integrate_singular(
          [j](double v) { return std::pow(v, j) / (std::sqrt(v) * std::sqrt(v + 1.0)); },
          0.0, 1.0, EndpointExponents{0.5, 0.0}, cfg);
      u.tail_k0.push_back(moment + integrate_subtracted_tail(j, KernelId::K0Like, cfg));
      u.tail_k1.push_back(integrate_subtracted_tail(j, KernelId::K1Like, cfg));
    }
    return cache.emplace(key, std::move(u)).first->second;
  }
};

namespace detail {

// closed-form inner integral of the remainder swap on the near piece:
// int (t-k)^j (x-k)^(-j-1) dk between the midpoint and t, expressed with
// dist = |x - t| and half = |x - anchor-midpoint|
inline double remainder_swap_weight(int j, double dist, double half) {
  double w = std::log(half) - std::log(dist);
  for (int m = 1; m <= j; ++m) {
    const double cm = binomial(j, m) / m;
    const double sgn = (m % 2) ? -1.0 : 1.0;
    w += sgn * cm * (1.0 - std::pow(dist / half, m));
  }
  return w;
}

}  // namespace detail

/// A_j(x): the h_0-side coefficient of the theorem, with the finite-part
/// integral split at x/2 and the near piece in remainder-swapped form.
inline double coefficient_a(const HFunction& h, double alpha0, int j, double x,
                            const QuadratureConfig& cfg) {
  const UniversalConstants& uc = UniversalConstants::get(j, cfg);
  std::vector<double> hd(j + 2);
  for (int l = 0; l <= j + 1; ++l) hd[l] = h(HSide::h0, l, x);

  // far piece: direct Taylor remainder against (x-k)^(-j-1); the distance to
  // x stays above x/2 here so no special handling is needed
  const double far = integrate_singular(
      [&](double k) {
        double rem = h(HSide::h0, 0, k);
        double pw = 1.0, fl = 1.0;
        for (int l = 0; l <= j; ++l) {
          if (l > 0) {
            pw *= (k - x);
            fl *= l;
          }
          rem -= hd[l] * pw / fl;
        }
        return rem * std::pow(x - k, -j - 1);
      },
      0.0, 0.5 * x, EndpointExponents{std::max(0.0, alpha0 - 0.5), 0.0}, cfg);

  // near piece: swapped remainder; log singularity at t = x smoothed by the
  // declared exponent
  const double half = 0.5 * x;
  const double near = integrate_singular(
      [&](double t, double, double dist_x) {
        return h(HSide::h0, j + 1, t) * detail::remainder_swap_weight(j, dist_x, half);
      },
      0.5 * x, x, EndpointExponents{0.0, 0.75}, cfg);
  double jfact = 1.0;
  for (int l = 2; l <= j; ++l) jfact *= l;
  const double fpart = far + (((j + 1) % 2) ? -1.0 : 1.0) * near / jfact;

  double ratsum = 0.0, csum = 0.0;
  double lf = 1.0;
  for (int l = 0; l < j; ++l) {
    if (l > 0) lf *= l;
    const double sgn = (l % 2) ? -1.0 : 1.0;
    ratsum += sgn / (lf * (l - j)) * hd[l] * std::pow(x, l - j);
    csum += sgn * uc.c[l] / (lf * (l - j));
  }
  const double logterm = ((j % 2) ? -1.0 : 1.0) * hd[j] / jfact * std::log(x);
  return uc.c[j] / jfact * (fpart + ratsum + logterm) +
         hd[j] / jfact * (uc.tail_k0[j] + csum);
}

/// B_j(x): the h_1-side analogue, split at (1+x)/2.
inline double coefficient_b(const HFunction& h, double alpha1, int j, double x,
                            const QuadratureConfig& cfg) {
  const UniversalConstants& uc = UniversalConstants::get(j, cfg);
  std::vector<double> hd(j + 2);
  for (int l = 0; l <= j + 1; ++l) hd[l] = h(HSide::h1, l, x);

  const double mid = 0.5 * (1.0 + x);
  const double far = integrate_singular(
      [&](double k) {
        double rem = h(HSide::h1, 0, k);
        double pw = 1.0, fl = 1.0;
        for (int l = 0; l <= j; ++l) {
          if (l > 0) {
            pw *= (k - x);
            fl *= l;
          }
          rem -= hd[l] * pw / fl;
        }
        return rem * std::pow(k - x, -j - 1);
      },
      mid, 1.0, EndpointExponents{0.0, std::max(0.0, alpha1 - 0.5)}, cfg);

  const double half = mid - x;
  const double near = integrate_singular(
      [&](double t, double dist_x, double) {
        return h(HSide::h1, j + 1, t) * detail::remainder_swap_weight(j, dist_x, half);
      },
      x, mid, EndpointExponents{0.75, 0.0}, cfg);
  double jfact = 1.0;
  for (int l = 2; l <= j; ++l) jfact *= l;
  const double fpart = far + near / jfact;

  double ratsum = 0.0, csum = 0.0;
  double lf = 1.0;
  for (int l = 0; l < j; ++l) {
    if (l > 0) lf *= l;
    ratsum += hd[l] / (lf * (l - j)) * std::pow(1.0 - x, l - j);
    csum += uc.c[l] / (lf * (l - j));
  }
  const double logterm = hd[j] / jfact * std::log(1.0 - x);
  return uc.c[j] / jfact * (fpart + ratsum + logterm) +
         hd[j] / jfact * (uc.tail_k1[j] + csum);
}

struct ExpansionTable {
  double x = 0.0;
  int J = 0;
  std::vector<double> f;          // ln-coefficients
  std::vector<double> g;          // power coefficients
  std::vector<double> g_swapped;  // g of the data-swapped problem at the same x

  ExpansionTable truncated(int Jnew) const {
    ExpansionTable t = *this;
    t.J = Jnew;
    t.f.resize(Jnew + 1);
    t.g.resize(Jnew + 1);
    if (!t.g_swapped.empty()) t.g_swapped.resize(Jnew + 1);
    return t;
  }
};

namespace detail {

inline ExpansionTable expansion_impl(const BoundaryData& data, double x, int J,
                                     const QuadratureConfig& cfg, bool with_swapped) {
  if (J < 0 || J > kMaxExpansionOrder)
    throw std::invalid_argument("expansion: order must lie in [0, 6]");
  if (!(x > 0.0 && x < 1.0))
    throw DomainError("expansion: anchor x must lie in (0,1)");
  if (data.v0x.order() < J + 1 || data.v1y.order() < J + 1)
    throw MissingDerivative("expansion: data must provide derivatives to order J+1");

  HFunction h(data, cfg);
  ExpansionTable t;
  t.x = x;
  t.J = J;
  double jf = 1.0;
  for (int j = 0; j <= J; ++j) {
    if (j > 0) jf *= j;
    const double hj = h(HSide::h0, j, x) + h(HSide::h1, j, x);
    t.f.push_back(-c_constant(j) * hj / (M_PI * jf * jf));
    const double aj = coefficient_a(h, data.alpha0, j, x, cfg);
    const double bj = coefficient_b(h, data.alpha1, j, x, cfg);
    t.g.push_back((((j % 2) ? -1.0 : 1.0) * aj + bj) / M_PI);
  }
  if (with_swapped) {
    const ExpansionTable ts = expansion_impl(swapped(data), x, J, cfg, false);
    t.g_swapped = ts.g;
  }
  return t;
}

}  // namespace detail

/// Fill f_j, g_j and the swapped-data g-array at anchor x, orders 0..J.
inline ExpansionTable expansion(const BoundaryData& data, double x, int J,
                                const QuadratureConfig& cfg) {
  return detail::expansion_impl(data, x, J, cfg, true);
}

/// Partial sum sum_j f_j e^j ln e + sum_j g_j e^j.
inline double evaluate_expansion(const ExpansionTable& t, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("evaluate_expansion: eps > 0 required");
  const double le = std::log(eps);
  double sum = 0.0, pw = 1.0;
  for (int j = 0; j <= t.J; ++j) {
    sum += (t.f[j] * le + t.g[j]) * pw;
    pw *= eps;
  }
  return sum;
}

struct OrderFit {
  double slope = 0.0;
  bool noise_floor = false;       // remainder indistinguishable from noise
  double noise_floor_value = 0.0;
  int samples_used = 0;
  std::vector<double> eps;
  std::vector<double> remainder;
};

/// Least-squares slope of ln|R_J| vs ln(eps) where R_J is the direct solution
/// minus the order-J expansion. Samples below the quadrature noise floor are
/// excluded; if fewer than three remain the remainder is reported as sitting
/// at the noise floor.
inline OrderFit remainder_order_fit(const BoundaryData& data, double x, int J,
                                    double eps_lo, double eps_hi, int n,
                                    const QuadratureConfig& cfg) {
  if (n < 5) throw std::invalid_argument("remainder_order_fit: need at least 5 samples");
  const ExpansionTable t = expansion(data, x, J, cfg);
  SolutionField field(data, cfg);

  OrderFit fit;
  double vmax = 0.0;
  for (int i = 0; i < n; ++i) {
    const double eps =
        std::exp(std::log(eps_lo) + (std::log(eps_hi) - std::log(eps_lo)) * i / (n - 1));
    const double direct = field.evaluate({x, 1.0 - x - eps});
    vmax = std::max(vmax, std::abs(direct));
    fit.eps.push_back(eps);
    fit.remainder.push_back(direct - evaluate_expansion(t, eps));
  }
  fit.noise_floor_value = 50.0 * std::max(cfg.abs_tol, cfg.rel_tol * vmax);

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(fit.remainder[i]) <= fit.noise_floor_value) continue;
    const double lx = std::log(fit.eps[i]);
    const double ly = std::log(std::abs(fit.remainder[i]));
    ++fit.samples_used;
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  if (fit.samples_used < 3) {
    fit.noise_floor = true;
    return fit;
  }
  const double m = fit.samples_used;
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return fit;
}

// ---------------------------------------------------------------------------
// Low-order cross-check forms: the ln(4 (x-k)) derivative representation of
// the leading coefficients, evaluated through its own split identities. These
// share nothing with coefficient_a / coefficient_b beyond the h functions.
// ---------------------------------------------------------------------------

/// d/dx int_0^x h_0(k) ln(4(x-k)) dk, equal to A_0(x).
inline double remark_derivative_form_a0(const HFunction& h, double alpha0, double x,
                                        const QuadratureConfig& cfg) {
  const double mu = std::max(0.0, alpha0 - 0.5);
  const double i1 = integrate_singular(
      [&](double k) { return h(HSide::h0, 0, k) / (x - k); }, 0.0, 0.5 * x,
      EndpointExponents{mu, 0.0}, cfg);
  const double i2 = integrate_singular(
      [&](double k, double, double dist_x) {
        return std::log(4.0 * dist_x) * h(HSide::h0, 1, k);
      },
      0.5 * x, x, EndpointExponents{0.0, 0.75}, cfg);
  return i1 + h(HSide::h0, 0, 0.5 * x) * std::log(2.0 * x) + i2;
}

/// d/dx of -int_x^1 ln(4(k-x)) h_1(k) dk, equal to B_0(x).
inline double remark_derivative_form_b0(const HFunction& h, double alpha1, double x,
                                        const QuadratureConfig& cfg) {
  const double mid = 0.5 * (1.0 + x);
  const double nu = std::max(0.0, alpha1 - 0.5);
  const double i1 = integrate_singular(
      [&](double k, double dist_x, double) {
        return std::log(4.0 * dist_x) * h(HSide::h1, 1, k);
      },
      x, mid, EndpointExponents{0.75, 0.0}, cfg);
  const double i2 = integrate_singular(
      [&](double k) { return h(HSide::h1, 0, k) / (k - x); }, mid, 1.0,
      EndpointExponents{0.0, nu}, cfg);
  return std::log(2.0 * (1.0 - x)) * h(HSide::h1, 0, mid) - i1 + i2;
}

/// d^2/dx^2 of the same bracket; (RA2 + RB2) / (2 pi) equals g_1(x).
inline double remark_second_form_a(const HFunction& h, double alpha0, double x,
                                   const QuadratureConfig& cfg) {
  const double mu = std::max(0.0, alpha0 - 0.5);
  const double i1 = integrate_singular(
      [&](double k) { return h(HSide::h0, 0, k) / ((x - k) * (x - k)); }, 0.0, 0.5 * x,
      EndpointExponents{mu, 0.0}, cfg);
  const double i2 = integrate_singular(
      [&](double k, double, double dist_x) {
        return std::log(4.0 * dist_x) * h(HSide::h0, 2, k);
      },
      0.5 * x, x, EndpointExponents{0.0, 0.75}, cfg);
  return 2.0 * h(HSide::h0, 0, 0.5 * x) / x - i1 +
         h(HSide::h0, 1, 0.5 * x) * std::log(2.0 * x) + i2;
}

inline double remark_second_form_b(const HFunction& h, double alpha1, double x,
                                   const QuadratureConfig& cfg) {
  const double mid = 0.5 * (1.0 + x);
  const double nu = std::max(0.0, alpha1 - 0.5);
  const double i1 = integrate_singular(
      [&](double k, double dist_x, double) {
        return std::log(4.0 * dist_x) * h(HSide::h1, 2, k);
      },
      x, mid, EndpointExponents{0.75, 0.0}, cfg);
  const double i2 = integrate_singular(
      [&](double k) { return h(HSide::h1, 0, k) / ((k - x) * (k - x)); }, mid, 1.0,
      EndpointExponents{0.0, nu}, cfg);
  return -2.0 * h(HSide::h1, 0, mid) / (1.0 - x) +
         std::log(2.0 * (1.0 - x)) * h(HSide::h1, 1, mid) - i1 + i2;
}

}  // namespace darboux
