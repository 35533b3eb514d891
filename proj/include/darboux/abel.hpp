// The Abel transform A h(x) = int_0^x h(k) (x-k)^(-1/2) dk, its derivatives,
// its inversion, and the two-variable variant with a parameterized kernel.
//
// Derivatives are never taken by differencing quadrature output. Repeated
// application of the identity
//     d/dx A h = (1/(2x)) A h + (1/x) A(k h')
// closes on the family A(k^q h^(q)); collecting coefficients gives
//     (d/dx)^j A h (x) = x^(-j) sum_q d[j][q] A(k^q h^(q))(x)
// with d[0][0] = 1 and d[j+1][q] = (q + 1/2 - j) d[j][q] + d[j][q-1].
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "darboux/quadrature.hpp"

namespace darboux {

struct MissingDerivative : std::runtime_error {
  explicit MissingDerivative(const std::string& what) : std::runtime_error(what) {}
};

struct DiagonalBlowup : std::domain_error {
  explicit DiagonalBlowup(const std::string& what) : std::domain_error(what) {}
};

// A function on (0,b) with corner exponent alpha: k^alpha h(k) extends
// continuously to 0, and k^(alpha+j) h^(j) stays bounded for every provided
// derivative order j. derivs[0] is the function itself.
struct SingularFunction {
  double alpha = 0.0;
  std::vector<std::function<double(double)>> derivs;

  SingularFunction() = default;
  SingularFunction(double a, std::vector<std::function<double(double)>> d)
      : alpha(a), derivs(std::move(d)) {}

  int order() const { return static_cast<int>(derivs.size()) - 1; }

  double operator()(double k) const { return derivs[0](k); }

  double deriv(int j, double k) const {
    if (j < 0 || j > order())
      throw MissingDerivative("SingularFunction: derivative order " + std::to_string(j) +
                              " not provided (have " + std::to_string(order()) + ")");
    return derivs[static_cast<std::size_t>(j)](k);
  }
};

inline SingularFunction sf_scale(double c, const SingularFunction& f) {
  std::vector<std::function<double(double)>> d;
  for (const auto& fj : f.derivs) d.emplace_back([c, fj](double k) { return c * fj(k); });
  return SingularFunction(f.alpha, std::move(d));
}

inline SingularFunction sf_add(const SingularFunction& f, const SingularFunction& g) {
  std::vector<std::function<double(double)>> d;
  const int n = std::min(f.order(), g.order());
  for (int j = 0; j <= n; ++j) {
    auto fj = f.derivs[j];
    auto gj = g.derivs[j];
    d.emplace_back([fj, gj](double k) { return fj(k) + gj(k); });
  }
  return SingularFunction(std::max(f.alpha, g.alpha), std::move(d));
}

// Spot-check the singular-family hypothesis at small arguments. Throws on a
// clear violation; a heuristic, not a proof.
inline void validate_singular_function(const SingularFunction& f, int max_order = -1) {
  if (!(f.alpha >= 0.0 && f.alpha < 1.0))
    throw std::invalid_argument("SingularFunction: alpha must lie in [0,1)");
  const int n = max_order < 0 ? f.order() : std::min(max_order, f.order());
  for (int j = 0; j <= n; ++j) {
    const double w3 = std::pow(1e-3, f.alpha + j) * f.deriv(j, 1e-3);
    const double w6 = std::pow(1e-6, f.alpha + j) * f.deriv(j, 1e-6);
    if (!std::isfinite(w3) || !std::isfinite(w6))
      throw std::invalid_argument("SingularFunction: non-finite weighted derivative");
    const double scale = std::max(std::abs(w3), 1.0);
    if (std::abs(w6) > 100.0 * scale)
      throw std::invalid_argument("SingularFunction: k^(alpha+j) h^(j) looks unbounded");
  }
}

namespace detail {

inline const std::vector<double>& abel_derivative_coeffs(int j) {
  static std::mutex mu;
  static std::vector<std::vector<double>> rows = {{1.0}};
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<int>(rows.size()) <= j) {
    const int m = static_cast<int>(rows.size()) - 1;  // differentiating row m
    const std::vector<double>& prev = rows.back();
    std::vector<double> next(m + 2, 0.0);
    for (int q = 0; q <= m + 1; ++q) {
      double v = 0.0;
      if (q <= m) v += (q + 0.5 - m) * prev[q];
      if (q >= 1) v += prev[q - 1];
      next[q] = v;
    }
    rows.push_back(std::move(next));
  }
  return rows[j];
}

}  // namespace detail

/// A(k^r h^(r))(x): the building block of the derivative recursion.
inline double transform_component(const SingularFunction& h, int r, double x,
                                  const QuadratureConfig& cfg) {
  if (x == 0.0) return 0.0;
  return integrate_singular(
      [&h, r](double k, double, double dist_x) {
        return std::pow(k, r) * h.deriv(r, k) / std::sqrt(dist_x);
      },
      0.0, x, EndpointExponents{h.alpha, 0.5}, cfg);
}

/// The Abel transform A h(x).
inline double transform(const SingularFunction& h, double x, const QuadratureConfig& cfg) {
  return transform_component(h, 0, x, cfg);
}

/// (d/dx)^j A h(x) via the exact recursion; requires h derivatives to order j.
inline double transform_derivative(const SingularFunction& h, double x, int j,
                                   const QuadratureConfig& cfg) {
  if (j == 0) return transform(h, x, cfg);
  if (j > h.order())
    throw MissingDerivative("transform_derivative: order " + std::to_string(j) +
                            " needs h^(" + std::to_string(j) + ")");
  const std::vector<double>& d = detail::abel_derivative_coeffs(j);
  double sum = 0.0;
  for (int q = 0; q <= j; ++q) sum += d[q] * transform_component(h, q, x, cfg);
  return sum * std::pow(x, -j);
}

/// First derivative in split form (integration by parts at delta), kept as an
/// independent backend for cross-validation.
inline double transform_derivative_split(const SingularFunction& h, double x, double delta,
                                         const QuadratureConfig& cfg) {
  if (!(delta > 0.0 && delta < x))
    throw std::invalid_argument("transform_derivative_split: need 0 < delta < x");
  const double boundary = h(delta) / std::sqrt(x - delta);
  const double near0 = integrate_singular(
      [&](double k) { return h(k) * std::pow(x - k, -1.5); }, 0.0, delta,
      EndpointExponents{h.alpha, 0.0}, cfg);
  const double rest = integrate_singular(
      [&](double k, double, double dist_x) { return h.deriv(1, k) / std::sqrt(dist_x); },
      delta, x, EndpointExponents{0.0, 0.5}, cfg);
  return boundary - 0.5 * near0 + rest;
}

/// Abel inversion h(k) = (1/pi) d/dk A f(k), computed through the derivative
/// recursion applied to f (f must carry its first derivative).
inline double invert(const SingularFunction& f, double k, const QuadratureConfig& cfg) {
  return transform_derivative(f, k, 1, cfg) / M_PI;
}

/// f(x,y) = int_0^x g(y,k) h(k) (x-k)^(-1/2) dk for a kernel g bounded by a
/// negative power of (1-x-y) toward the diagonal.
template <class G>
double transform_with_parameter(const SingularFunction& h, G&& g, double x, double y,
                                const QuadratureConfig& cfg) {
  if (1.0 - x - y <= 0.0)
    throw DiagonalBlowup("transform_with_parameter: 1-x-y <= 0");
  if (x == 0.0) return 0.0;
  return integrate_singular(
      [&](double k, double, double dist_x) { return g(y, k) * h(k) / std::sqrt(dist_x); },
      0.0, x, EndpointExponents{h.alpha, 0.5}, cfg);
}

// Memoized evaluator of the A(k^r h^(r)) components of one data function.
// Values depend only on (r, x), so concurrent use is safe and results are
// independent of scheduling.
class AbelEvaluator {
 public:
  AbelEvaluator(SingularFunction h, QuadratureConfig cfg)
      : h_(std::move(h)), cfg_(cfg), memo_(std::make_shared<Memo>()) {}

  const SingularFunction& function() const { return h_; }

  double component(int r, double x) const {
    const Key key{r, std::bit_cast<std::uint64_t>(x)};
    {
      std::shared_lock lock(memo_->mu);
      auto it = memo_->map.find(key);
      if (it != memo_->map.end()) return it->second;
    }
    const double v = transform_component(h_, r, x, cfg_);
    std::unique_lock lock(memo_->mu);
    memo_->map.emplace(key, v);
    return v;
  }

  double value(double x) const { return component(0, x); }

  double derivative(int j, double x) const {
    if (j == 0) return value(x);
    const std::vector<double>& d = detail::abel_derivative_coeffs(j);
    double sum = 0.0;
    for (int q = 0; q <= j; ++q) sum += d[q] * component(q, x);
    return sum * std::pow(x, -j);
  }

 private:
  using Key = std::pair<int, std::uint64_t>;
  struct Memo {
    mutable std::shared_mutex mu;
    std::map<Key, double> map;
  };
  SingularFunction h_;
  QuadratureConfig cfg_;
  std::shared_ptr<Memo> memo_;
};

}  // namespace darboux
