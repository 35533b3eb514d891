// Flat key=value run configuration with section-prefixed keys (grid.nx=50).
// Unknown keys and malformed values are rejected with the line and field
// named; a parsed config serializes back to a canonical form that re-parses
// to the same configuration.
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "darboux/datasets.hpp"
#include "darboux/expression.hpp"
#include "darboux/goursat.hpp"
#include "darboux/quadrature.hpp"
#include "darboux/weyl.hpp"

namespace darboux {
namespace cli {

struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// full round-trip precision, deterministic across platforms
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct RunConfig {
  // data: per-side specs "khan_penrose" | "zero" | "poly:c1,c2,.." |
  // "power:alpha:c1,c2,.." | "expr:<expression>"
  std::string data_v0 = "khan_penrose";
  std::string data_v1 = "khan_penrose";
  double data_alpha0 = -1.0;  // required for expr specs, optional otherwise
  double data_alpha1 = -1.0;

  double grid_x_min = 0.05, grid_x_max = 0.85;
  int grid_nx = 10;
  double grid_y_min = 0.05, grid_y_max = 0.85;
  int grid_ny = 10;
  double grid_eps_min = 1e-6;
  bool grid_with_xy = true;

  std::vector<double> expand_x = {0.25, 0.5, 0.75};
  int expand_order = 2;
  std::vector<double> expand_eps;

  double profile_c1 = 1.0, profile_c2 = 1.0, profile_n1 = 2.0, profile_n2 = 2.0;

  std::vector<double> weyl_x = {0.5};
  std::vector<double> weyl_eps = {1e-2, 1e-3};
  std::string weyl_method = "both";  // direct | series | both
  int weyl_order = 2;

  QuadratureConfig quad;

  std::string verify_suite = "all";

  std::string serialize() const;
  static RunConfig parse_string(const std::string& text);
  static RunConfig parse_file(const std::string& path);
};

namespace detail {

inline std::vector<double> parse_list(const std::string& s, const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
        ++used;
      if (used != item.size()) throw std::invalid_argument("bad");
    } catch (...) {
      throw ConfigError(where + ": cannot parse number '" + item + "'");
    }
  }
  return out;
}

inline std::string join_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format_double(v[i]);
  }
  return s;
}

}  // namespace detail

inline std::string RunConfig::serialize() const {
  std::ostringstream o;
  o << "data.v0 = " << data_v0 << "\n";
  o << "data.v1 = " << data_v1 << "\n";
  if (data_alpha0 >= 0.0) o << "data.alpha0 = " << format_double(data_alpha0) << "\n";
  if (data_alpha1 >= 0.0) o << "data.alpha1 = " << format_double(data_alpha1) << "\n";
  o << "grid.x_min = " << format_double(grid_x_min) << "\n";
  o << "grid.x_max = " << format_double(grid_x_max) << "\n";
  o << "grid.nx = " << grid_nx << "\n";
  o << "grid.y_min = " << format_double(grid_y_min) << "\n";
  o << "grid.y_max = " << format_double(grid_y_max) << "\n";
  o << "grid.ny = " << grid_ny << "\n";
  o << "grid.eps_min = " << format_double(grid_eps_min) << "\n";
  o << "grid.with_xy = " << (grid_with_xy ? "true" : "false") << "\n";
  o << "expand.x = " << detail::join_list(expand_x) << "\n";
  o << "expand.order = " << expand_order << "\n";
  if (!expand_eps.empty()) o << "expand.eps = " << detail::join_list(expand_eps) << "\n";
  o << "profile.c1 = " << format_double(profile_c1) << "\n";
  o << "profile.c2 = " << format_double(profile_c2) << "\n";
  o << "profile.n1 = " << format_double(profile_n1) << "\n";
  o << "profile.n2 = " << format_double(profile_n2) << "\n";
  o << "weyl.x = " << detail::join_list(weyl_x) << "\n";
  o << "weyl.eps = " << detail::join_list(weyl_eps) << "\n";
  o << "weyl.method = " << weyl_method << "\n";
  o << "weyl.order = " << weyl_order << "\n";
  o << "quad.rel_tol = " << format_double(quad.rel_tol) << "\n";
  o << "quad.abs_tol = " << format_double(quad.abs_tol) << "\n";
  o << "quad.max_subdivisions = " << quad.max_subdivisions << "\n";
  o << "quad.base_nodes = " << quad.base_nodes << "\n";
  o << "verify.suite = " << verify_suite << "\n";
  return o.str();
}

inline RunConfig RunConfig::parse_string(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigError("config line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string val = trim(stripped.substr(eq + 1));
    const std::string where = "field '" + key + "'";

    auto as_double = [&](const std::string& v) {
      try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("bad");
        return d;
      } catch (...) {
        fail(where + ": cannot parse number '" + v + "'");
        return 0.0;
      }
    };
    auto as_int = [&](const std::string& v) {
      const double d = as_double(v);
      if (d != std::floor(d)) fail(where + ": expected an integer");
      return static_cast<int>(d);
    };
    auto as_bool = [&](const std::string& v) {
      if (v == "true" || v == "1") return true;
      if (v == "false" || v == "0") return false;
      fail(where + ": expected true/false");
      return false;
    };

    if (key == "data.spec") {
      c.data_v0 = val;
      c.data_v1 = val;
    } else if (key == "data.v0") c.data_v0 = val;
    else if (key == "data.v1") c.data_v1 = val;
    else if (key == "data.alpha0") c.data_alpha0 = as_double(val);
    else if (key == "data.alpha1") c.data_alpha1 = as_double(val);
    else if (key == "grid.x_min") c.grid_x_min = as_double(val);
    else if (key == "grid.x_max") c.grid_x_max = as_double(val);
    else if (key == "grid.nx") c.grid_nx = as_int(val);
    else if (key == "grid.y_min") c.grid_y_min = as_double(val);
    else if (key == "grid.y_max") c.grid_y_max = as_double(val);
    else if (key == "grid.ny") c.grid_ny = as_int(val);
    else if (key == "grid.eps_min") c.grid_eps_min = as_double(val);
    else if (key == "grid.with_xy") c.grid_with_xy = as_bool(val);
    else if (key == "expand.x") c.expand_x = detail::parse_list(val, where);
    else if (key == "expand.order") c.expand_order = as_int(val);
    else if (key == "expand.eps") c.expand_eps = detail::parse_list(val, where);
    else if (key == "profile.c1") c.profile_c1 = as_double(val);
    else if (key == "profile.c2") c.profile_c2 = as_double(val);
    else if (key == "profile.n1") c.profile_n1 = as_double(val);
    else if (key == "profile.n2") c.profile_n2 = as_double(val);
    else if (key == "weyl.x") c.weyl_x = detail::parse_list(val, where);
    else if (key == "weyl.eps") c.weyl_eps = detail::parse_list(val, where);
    else if (key == "weyl.method") {
      if (val != "direct" && val != "series" && val != "both")
        fail(where + ": expected direct|series|both");
      c.weyl_method = val;
    } else if (key == "weyl.order") c.weyl_order = as_int(val);
    else if (key == "quad.rel_tol") c.quad.rel_tol = as_double(val);
    else if (key == "quad.abs_tol") c.quad.abs_tol = as_double(val);
    else if (key == "quad.max_subdivisions") c.quad.max_subdivisions = as_int(val);
    else if (key == "quad.base_nodes") c.quad.base_nodes = as_int(val);
    else if (key == "verify.suite") {
      if (val != "abel" && val != "goursat" && val != "asymptotics" && val != "weyl" &&
          val != "all")
        fail(where + ": expected abel|goursat|asymptotics|weyl|all");
      c.verify_suite = val;
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  try {
    c.quad.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

inline RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

// Build one boundary side from its spec string.
namespace detail {

struct SideData {
  std::function<double(double)> value;
  SingularFunction deriv;
  double alpha = 0.0;
};

inline SideData make_side(const std::string& spec, double declared_alpha) {
  auto starts = [&](const char* p) { return spec.rfind(p, 0) == 0; };
  if (spec == "khan_penrose") {
    const BoundaryData kp = khan_penrose_data();
    return {kp.v0, kp.v0x, kp.alpha0};
  }
  if (spec == "zero") {
    const BoundaryData z = zero_data();
    return {z.v0, z.v0x, 0.0};
  }
  if (starts("poly:")) {
    const auto coeffs = parse_list(spec.substr(5), "poly spec");
    const BoundaryData p = polynomial_data(coeffs, {});
    return {p.v0, p.v0x, 0.0};
  }
  if (starts("power:")) {
    const std::string rest = spec.substr(6);
    const auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw ConfigError("power spec needs 'power:<alpha>:<coeffs>'");
    const double alpha = std::stod(rest.substr(0, colon));
    const auto coeffs = parse_list(rest.substr(colon + 1), "power spec");
    const BoundaryData p = power_data(alpha, coeffs, {});
    return {p.v0, p.v0x, alpha};
  }
  if (starts("expr:")) {
    if (declared_alpha < 0.0)
      throw ConfigError(
          "expression data requires an explicit data.alpha0/alpha1 declaration; "
          "the corner exponent is a hypothesis, not something to infer");
    const expr::NodePtr value_ast = expr::parse(spec.substr(5));
    const expr::NodePtr deriv_ast = expr::differentiate(value_ast);
    auto value = [value_ast](double x) { return expr::eval(value_ast, x); };
    return {value, expr::to_singular_function(deriv_ast, declared_alpha, 8),
            declared_alpha};
  }
  throw ConfigError("unknown data spec '" + spec + "'");
}

}  // namespace detail

inline BoundaryData make_data(const RunConfig& c) {
  const auto s0 = detail::make_side(c.data_v0, c.data_alpha0);
  const auto s1 = detail::make_side(c.data_v1, c.data_alpha1);
  BoundaryData d;
  d.v0 = s0.value;
  d.v1 = s1.value;
  d.v0x = s0.deriv;
  d.v1y = s1.deriv;
  d.alpha0 = c.data_alpha0 >= 0.0 ? c.data_alpha0 : s0.alpha;
  d.alpha1 = c.data_alpha1 >= 0.0 ? c.data_alpha1 : s1.alpha;
  d.order = std::min(d.v0x.order(), d.v1y.order()) + 1;
  d.validate();
  return d;
}

inline WaveProfile make_profile(const RunConfig& c) {
  WaveProfile w{c.profile_c1, c.profile_c2, c.profile_n1, c.profile_n2};
  w.validate();
  return w;
}

}  // namespace cli
}  // namespace darboux
