// Adaptive Gauss quadrature for integrands with algebraic endpoint
// singularities, plus the subtracted semi-infinite kernel tails used by the
// diagonal asymptotics. Self-contained; all rules are generated at runtime
// and cached, so results are deterministic for fixed inputs.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace darboux {

struct NonConvergence : std::runtime_error {
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidExponent : std::invalid_argument {
  explicit InvalidExponent(const std::string& what) : std::invalid_argument(what) {}
};

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  int max_subdivisions = 24;  // max bisection depth per panel
  int base_nodes = 32;        // Gauss nodes per panel; error from the 2n rule
  // When >= 0, integrate on a fixed uniform composite grid of 2^composite_depth
  // panels per segment instead of adapting. The error then varies smoothly with
  // the endpoints, which finite-difference probes of the solution rely on.
  int composite_depth = -1;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
      throw std::invalid_argument("QuadratureConfig: tolerances must be positive");
    if (max_subdivisions < 1)
      throw std::invalid_argument("QuadratureConfig: max_subdivisions >= 1 required");
    if (base_nodes < 2)
      throw std::invalid_argument("QuadratureConfig: base_nodes >= 2 required");
  }

  QuadratureConfig with_rel_tol(double r) const {
    QuadratureConfig c = *this;
    c.rel_tol = r;
    c.abs_tol = std::min(abs_tol, r * 1e-3);
    return c;
  }
};

// Integrand behaves like (t-a)^(-left) near a and (b-t)^(-right) near b.
// Exponents < 1 (integrability); values <= 0 mean "no singularity".
struct EndpointExponents {
  double left = 0.0;
  double right = 0.0;
};

namespace detail {

struct GaussRule {
  std::vector<double> nodes;    // on (0,1), ascending
  std::vector<double> weights;  // sum to 1
};

// Gauss-Legendre nodes by Newton iteration on P_n, mapped to (0,1).
inline GaussRule make_gauss_rule(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        // one polishing step
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        pp = n * (x * p1 - p0) / (x * x - 1.0);
        x -= p1 / pp;
        break;
      }
    }
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.nodes[i] = 0.5 * (1.0 - x);  // cos ordering gives descending x
    r.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    r.weights[i] = 0.5 * w;
    r.weights[n - 1 - i] = 0.5 * w;
  }
  return r;
}

inline const GaussRule& gauss_rule(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_rule(n)).first;
  return it->second;
}

using Fn = std::function<double(double)>;

// Integrands may take (t) or (t, dist_left, dist_right). The distances are
// synthesized exactly by the endpoint substitutions, so kernels like
// (b-t)^(-1/2) can be evaluated without the cancellation jitter of b - t.
template <class F>
inline double call_integrand(F& f, double t, double da, double db) {
  if constexpr (std::is_invocable_v<F&, double, double, double>) {
    return f(t, da, db);
  } else {
    return f(t);
  }
}

struct Panel {
  int seg;  // which segment function
  double lo, hi;
  double value;  // 2n-rule value
  double err;    // |G_2n - G_n|
  int depth;
};

struct PanelWorse {
  bool operator()(const Panel& a, const Panel& b) const { return a.err < b.err; }
};

inline void eval_panel(const Fn& f, Panel& p, const GaussRule& rc, const GaussRule& rf) {
  const double len = p.hi - p.lo;
  double coarse = 0.0, fine = 0.0;
  for (std::size_t i = 0; i < rc.nodes.size(); ++i)
    coarse += rc.weights[i] * f(p.lo + len * rc.nodes[i]);
  for (std::size_t i = 0; i < rf.nodes.size(); ++i)
    fine += rf.weights[i] * f(p.lo + len * rf.nodes[i]);
  coarse *= len;
  fine *= len;
  p.value = fine;
  p.err = std::abs(fine - coarse);
  if (!std::isfinite(p.value) || !std::isfinite(p.err))
    throw NonConvergence("quadrature: integrand produced a non-finite value");
}

// Shared adaptive driver over one or more unit-interval segments.
inline double adapt_segments(const std::vector<Fn>& segs, const QuadratureConfig& cfg) {
  cfg.validate();
  const GaussRule& rc = gauss_rule(cfg.base_nodes);
  const GaussRule& rf = gauss_rule(2 * cfg.base_nodes);

  std::vector<Panel> done;
  auto total_of = [](const std::vector<Panel>& v) {
    double s = 0.0;
    for (const Panel& p : v) s += p.value;
    return s;
  };

  if (cfg.composite_depth >= 0) {
    const int m = 1 << std::min(cfg.composite_depth, 12);
    for (int s = 0; s < static_cast<int>(segs.size()); ++s)
      for (int i = 0; i < m; ++i) {
        Panel p{s, double(i) / m, double(i + 1) / m, 0.0, 0.0, 0};
        eval_panel(segs[s], p, rc, rf);
        done.push_back(p);
      }
    return total_of(done);
  }

  std::priority_queue<Panel, std::vector<Panel>, PanelWorse> heap;
  double total = 0.0, toterr = 0.0;
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    Panel p{s, 0.0, 1.0, 0.0, 0.0, 0};
    eval_panel(segs[s], p, rc, rf);
    total += p.value;
    toterr += p.err;
    heap.push(p);
  }

  const std::size_t panel_cap = 4096;
  while (true) {
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    if (toterr <= tol) break;
    if (heap.empty() || done.size() + heap.size() >= panel_cap)
      throw NonConvergence("quadrature: error " + std::to_string(toterr) +
                           " above tolerance " + std::to_string(tol));
    Panel worst = heap.top();
    heap.pop();
    if (worst.depth >= cfg.max_subdivisions) {
      done.push_back(worst);
      if (heap.empty())
        throw NonConvergence("quadrature: subdivision limit reached with error " +
                             std::to_string(toterr));
      continue;
    }
    total -= worst.value;
    toterr -= worst.err;
    const double mid = 0.5 * (worst.lo + worst.hi);
    Panel a{worst.seg, worst.lo, mid, 0.0, 0.0, worst.depth + 1};
    Panel b{worst.seg, mid, worst.hi, 0.0, 0.0, worst.depth + 1};
    eval_panel(segs[worst.seg], a, rc, rf);
    eval_panel(segs[worst.seg], b, rc, rf);
    total += a.value + b.value;
    toterr += a.err + b.err;
    heap.push(a);
    heap.push(b);
  }

  while (!heap.empty()) {
    done.push_back(heap.top());
    heap.pop();
  }
  // fixed summation order: by segment then position
  std::sort(done.begin(), done.end(), [](const Panel& a, const Panel& b) {
    if (a.seg != b.seg) return a.seg < b.seg;
    return a.lo < b.lo;
  });
  return total_of(done);
}

}  // namespace detail

/// Adaptive integral of a function continuous on [a,b].
template <class F>
double integrate_smooth(F&& f, double a, double b, const QuadratureConfig& cfg) {
  if (a == b) return 0.0;
  if (b < a) throw std::invalid_argument("integrate_smooth: b < a");
  const double len = b - a;
  std::vector<detail::Fn> segs;
  segs.emplace_back([&f, a, len](double s) {
    const double da = len * s;
    return detail::call_integrand(f, a + da, da, len - da) * len;
  });
  return detail::adapt_segments(segs, cfg);
}

/// Improper integral over (a,b) of an integrand with algebraic endpoint
/// singularities (t-a)^(-mu), (b-t)^(-nu), mu,nu < 1. The declared exponents
/// drive power substitutions t = a + c sigma^(1/(1-mu)) that cancel the
/// singular factor exactly, so the transformed integrand is bounded and the
/// rule never needs values closer to the endpoint than ~1e-7 of the interval
/// length. Half-integer behaviour is smoothed even when an exponent is <= 0.
template <class F>
double integrate_singular(F&& f, double a, double b, EndpointExponents exps,
                          const QuadratureConfig& cfg) {
  if (!(exps.left < 1.0) || !(exps.right < 1.0))
    throw InvalidExponent("integrate_singular: endpoint exponents must be < 1");
  if (a == b) return 0.0;
  if (b < a) throw std::invalid_argument("integrate_singular: b < a");

  const double len = b - a;
  const double p = exps.left > 0.0 ? 1.0 / (1.0 - exps.left) : 2.0;
  const double q = exps.right > 0.0 ? 1.0 / (1.0 - exps.right) : 2.0;

  // left half: t = a + (len/2) sigma^p ; right half: t = b - (len/2) sigma^q
  std::vector<detail::Fn> segs;
  segs.emplace_back([&f, a, len, p](double sig) {
    const double da = len * 0.5 * std::pow(sig, p);
    const double jac = 0.5 * p * std::pow(sig, p - 1.0);
    return detail::call_integrand(f, a + da, da, len - da) * len * jac;
  });
  segs.emplace_back([&f, b, len, q](double sig) {
    const double db = len * 0.5 * std::pow(sig, q);
    const double jac = 0.5 * q * std::pow(sig, q - 1.0);
    return detail::call_integrand(f, b - db, len - db, db) * len * jac;
  });
  return detail::adapt_segments(segs, cfg);
}

// ---------------------------------------------------------------------------
// Kernels K0(u,t) = 1/(sqrt(u) sqrt(u+t)), K1(u,t) = 1/(sqrt(u) sqrt(u-t))
// and the convergent tails over (1,inf) after subtracting the first j+1
// inverse-power terms of their large-argument expansions.
// ---------------------------------------------------------------------------

enum class KernelId { K0Like, K1Like };

namespace detail {

// c_l / l! = |binom(-1/2, l)|, the l-th large-v Taylor coefficient of both
// kernels at unit second argument.
inline double kernel_taylor_coeff(int l) {
  double b = 1.0;
  for (int m = 1; m <= l; ++m) b *= (2.0 * m - 1.0) / (2.0 * m);
  return b;
}

// K0(v,1) - sum_{l<=j} (-1)^l (c_l/l!) v^(-l-1); series continuation for
// large v avoids the cancellation of the direct difference.
inline double subtracted_k0(int j, double v) {
  const double w = 1.0 / v;
  if (w <= 0.5) {
    double term = kernel_taylor_coeff(j + 1) * std::pow(w, j + 1);
    if ((j + 1) % 2) term = -term;
    double sum = 0.0;
    for (int l = j + 1; l < j + 200; ++l) {
      sum += term;
      term *= -w * (2.0 * l + 1.0) / (2.0 * l + 2.0);
      if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    return sum / v;
  }
  double s = 0.0, sign = 1.0;
  for (int l = 0; l <= j; ++l) {
    s += sign * kernel_taylor_coeff(l) * std::pow(v, -l - 1);
    sign = -sign;
  }
  return 1.0 / (std::sqrt(v) * std::sqrt(v + 1.0)) - s;
}

inline double subtracted_k1(int j, double v) {
  const double w = 1.0 / v;
  if (w <= 0.5) {
    double term = kernel_taylor_coeff(j + 1) * std::pow(w, j + 1);
    double sum = 0.0;
    for (int l = j + 1; l < j + 200; ++l) {
      sum += term;
      term *= w * (2.0 * l + 1.0) / (2.0 * l + 2.0);
      if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    return sum / v;
  }
  double s = 0.0;
  for (int l = 0; l <= j; ++l) s += kernel_taylor_coeff(l) * std::pow(v, -l - 1);
  return 1.0 / (std::sqrt(v) * std::sqrt(v - 1.0)) - s;
}

}  // namespace detail

/// Convergent improper integral over (1,inf) of v^j times the kernel with its
/// first j+1 inverse-power Taylor terms subtracted. Split at v=2; the far
/// piece is mapped to (0,1/2] by v = 1/t where the subtracted integrand is
/// bounded.
inline double integrate_subtracted_tail(int j, KernelId kid, const QuadratureConfig& cfg) {
  if (j < 0) throw std::invalid_argument("integrate_subtracted_tail: j >= 0 required");
  const bool k0 = (kid == KernelId::K0Like);
  auto sub = [j, k0](double v) {
    return (k0 ? detail::subtracted_k0(j, v) : detail::subtracted_k1(j, v));
  };

  double near;
  if (k0) {
    near = integrate_smooth([&](double v) { return std::pow(v, j) * sub(v); }, 1.0, 2.0, cfg);
  } else {
    near = integrate_singular([&](double v) { return std::pow(v, j) * sub(v); }, 1.0, 2.0,
                              EndpointExponents{0.5, 0.0}, cfg);
  }
  double far = integrate_smooth(
      [&](double t) {
        const double v = 1.0 / t;
        return std::pow(v, j) * sub(v) / (t * t);
      },
      0.0, 0.5, cfg);
  return near + far;
}

}  // namespace darboux
