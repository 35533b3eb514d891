// Builtin boundary data sets. Every derivative is supplied in closed form;
// nothing here is differentiated numerically.
#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "darboux/goursat.hpp"

namespace darboux {
namespace detail {

inline double falling_factorial(double p, int m) {
  double r = 1.0;
  for (int i = 0; i < m; ++i) r *= (p - i);
  return r;
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

struct PowerTerm {
  double coeff;
  double expo;
};

// sum_i c_i x^{p_i} with derivative closures to order nderiv
inline SingularFunction power_series_function(std::vector<PowerTerm> terms, double alpha,
                                              int nderiv) {
  std::vector<std::function<double(double)>> d;
  for (int j = 0; j <= nderiv; ++j) {
    d.emplace_back([terms, j](double x) {
      double s = 0.0;
      for (const PowerTerm& t : terms) {
        const double c = t.coeff * falling_factorial(t.expo, j);
        if (c != 0.0) s += c * std::pow(x, t.expo - j);
      }
      return s;
    });
  }
  return SingularFunction(alpha, std::move(d));
}

}  // namespace detail

/// V_0 = sum c0[i] x^(i+1), V_1 = sum c1[i] y^(i+1); alpha = 0.
inline BoundaryData polynomial_data(const std::vector<double>& c0,
                                    const std::vector<double>& c1, int nderiv = 9) {
  using detail::PowerTerm;
  auto value_terms = [](const std::vector<double>& c) {
    std::vector<PowerTerm> t;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0.0) t.push_back({c[i], double(i + 1)});
    return t;
  };
  auto deriv_terms = [](const std::vector<double>& c) {
    std::vector<PowerTerm> t;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0.0) t.push_back({c[i] * double(i + 1), double(i)});
    return t;
  };
  BoundaryData d;
  auto t0 = value_terms(c0), t1 = value_terms(c1);
  d.v0 = [t0](double x) {
    double s = 0.0;
    for (const auto& t : t0) s += t.coeff * std::pow(x, t.expo);
    return s;
  };
  d.v1 = [t1](double y) {
    double s = 0.0;
    for (const auto& t : t1) s += t.coeff * std::pow(y, t.expo);
    return s;
  };
  d.v0x = detail::power_series_function(deriv_terms(c0), 0.0, nderiv);
  d.v1y = detail::power_series_function(deriv_terms(c1), 0.0, nderiv);
  d.alpha0 = 0.0;
  d.alpha1 = 0.0;
  d.order = nderiv + 1;
  return d;
}

inline BoundaryData zero_data() { return polynomial_data({}, {}); }

/// V_0 = sum c0[i] x^(i+1-alpha), V_1 likewise; the corner exponent of the
/// derivative data is alpha.
inline BoundaryData power_data(double alpha, const std::vector<double>& c0,
                               const std::vector<double>& c1, int nderiv = 9) {
  using detail::PowerTerm;
  auto value_terms = [alpha](const std::vector<double>& c) {
    std::vector<PowerTerm> t;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0.0) t.push_back({c[i], double(i + 1) - alpha});
    return t;
  };
  auto deriv_terms = [alpha](const std::vector<double>& c) {
    std::vector<PowerTerm> t;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0.0) {
        const double p = double(i + 1) - alpha;
        t.push_back({c[i] * p, p - 1.0});
      }
    return t;
  };
  BoundaryData d;
  auto t0 = value_terms(c0), t1 = value_terms(c1);
  auto eval = [](std::vector<PowerTerm> t) {
    return [t](double x) {
      double s = 0.0;
      for (const auto& term : t) s += term.coeff * std::pow(x, term.expo);
      return s;
    };
  };
  d.v0 = eval(t0);
  d.v1 = eval(t1);
  d.v0x = detail::power_series_function(deriv_terms(c0), alpha, nderiv);
  d.v1y = detail::power_series_function(deriv_terms(c1), alpha, nderiv);
  d.alpha0 = alpha;
  d.alpha1 = alpha;
  d.order = nderiv + 1;
  return d;
}

/// Boundary data of the Khan-Penrose colliding-wave solution:
/// V_0(x) = V_1(x) = -2 atanh(sqrt x), V_0x = -1/(sqrt(x)(1-x)), alpha = 1/2.
inline BoundaryData khan_penrose_data(int nderiv = 9) {
  auto trace = [](double t) { return t <= 0.0 ? 0.0 : -2.0 * std::atanh(std::sqrt(t)); };
  // r-th derivative of -x^(-1/2) (1-x)^(-1) by the Leibniz rule
  std::vector<std::function<double(double)>> der;
  for (int r = 0; r <= nderiv; ++r) {
    der.emplace_back([r](double x) {
      double s = 0.0;
      for (int m = 0; m <= r; ++m) {
        const double c = detail::binomial(r, m) * detail::falling_factorial(-0.5, m) *
                         detail::factorial(r - m);
        s += c * std::pow(x, -0.5 - m) * std::pow(1.0 - x, -1.0 - (r - m));
      }
      return -s;
    });
  }
  BoundaryData d;
  d.v0 = trace;
  d.v1 = trace;
  d.v0x = SingularFunction(0.5, der);
  d.v1y = d.v0x;
  d.alpha0 = 0.5;
  d.alpha1 = 0.5;
  d.order = nderiv + 1;
  return d;
}

}  // namespace darboux
