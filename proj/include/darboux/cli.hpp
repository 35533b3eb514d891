// Command implementations behind the darboux executable: grid evaluation,
// expansion tables, Weyl scalars, verification. Commands write CSV (default)
// or JSON and return process exit codes: 0 success, 1 verification failure,
// 2 configuration error, 3 numerical failure.
#pragma once

#include <chrono>
#include <iostream>
#include <string>

#include <json.hpp>

#include "darboux/asymptotics.hpp"
#include "darboux/config.hpp"
#include "darboux/verify.hpp"
#include "darboux/weyl.hpp"

namespace darboux {
namespace cli {

namespace exit_code {
constexpr int ok = 0;
constexpr int verify_failed = 1;
constexpr int config_error = 2;
constexpr int numerical_failure = 3;
}  // namespace exit_code

namespace detail {

inline nlohmann::ordered_json row_json(const FieldRow& r) {
  nlohmann::ordered_json j;
  j["x"] = r.x;
  j["y"] = r.y;
  if (r.has_value) j["V"] = r.v;
  if (r.has_derivs) {
    j["Vx"] = r.vx;
    j["Vy"] = r.vy;
  }
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace detail

inline int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err,
                        int threads, const std::string& format) {
  BoundaryData data;
  try {
    data = make_data(cfg);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return exit_code::config_error;
  }
  GridSpec spec;
  spec.x0 = cfg.grid_x_min;
  spec.x1 = cfg.grid_x_max;
  spec.nx = cfg.grid_nx;
  spec.y0 = cfg.grid_y_min;
  spec.y1 = cfg.grid_y_max;
  spec.ny = cfg.grid_ny;
  spec.eps_min = cfg.grid_eps_min;
  spec.with_xy = cfg.grid_with_xy;

  SolutionField field(data, cfg.quad, cfg.grid_eps_min);
  const FieldTable table = evaluate_grid(field, spec, threads);

  for (const FieldRow& r : table.rows) {
    if (r.note.rfind("error:", 0) == 0) {
      err << "numerical failure at (" << format_double(r.x) << ", " << format_double(r.y)
          << "): " << r.note << "\n";
      return exit_code::numerical_failure;
    }
  }

  if (format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const FieldRow& r : table.rows) {
      auto row = detail::row_json(r);
      if (r.has_derivs && spec.with_xy) row["Vxy"] = r.vxy;
      j.push_back(row);
    }
    out << j.dump(2) << "\n";
    return exit_code::ok;
  }

  out << "x,y,V,Vx,Vy,Vxy,note\n";
  for (const FieldRow& r : table.rows) {
    out << format_double(r.x) << "," << format_double(r.y) << ",";
    if (r.has_value) out << format_double(r.v);
    out << ",";
    if (r.has_derivs) out << format_double(r.vx);
    out << ",";
    if (r.has_derivs) out << format_double(r.vy);
    out << ",";
    if (r.has_derivs && spec.with_xy) out << format_double(r.vxy);
    out << "," << r.note << "\n";
  }
  return exit_code::ok;
}

inline int cmd_expand(const RunConfig& cfg, std::ostream& out, std::ostream& err,
                      const std::string& format) {
  BoundaryData data;
  try {
    data = make_data(cfg);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return exit_code::config_error;
  }
  try {
    std::vector<ExpansionTable> tables;
    for (double x : cfg.expand_x)
      tables.push_back(expansion(data, x, cfg.expand_order, cfg.quad));

    if (format == "json") {
      nlohmann::ordered_json j;
      j["coefficients"] = nlohmann::ordered_json::array();
      for (const auto& t : tables)
        for (int k = 0; k <= t.J; ++k)
          j["coefficients"].push_back({{"x", t.x},
                                       {"j", k},
                                       {"f_j", t.f[k]},
                                       {"g_j", t.g[k]},
                                       {"g_swapped_j", t.g_swapped[k]}});
      if (!cfg.expand_eps.empty()) {
        j["evaluations"] = nlohmann::ordered_json::array();
        for (const auto& t : tables)
          for (double eps : cfg.expand_eps)
            j["evaluations"].push_back(
                {{"x", t.x}, {"eps", eps}, {"value", evaluate_expansion(t, eps)}});
      }
      out << j.dump(2) << "\n";
      return exit_code::ok;
    }

    out << "x,j,f_j,g_j,g_swapped_j\n";
    for (const auto& t : tables)
      for (int k = 0; k <= t.J; ++k)
        out << format_double(t.x) << "," << k << "," << format_double(t.f[k]) << ","
            << format_double(t.g[k]) << "," << format_double(t.g_swapped[k]) << "\n";
    if (!cfg.expand_eps.empty()) {
      out << "\nx,eps,value\n";
      for (const auto& t : tables)
        for (double eps : cfg.expand_eps)
          out << format_double(t.x) << "," << format_double(eps) << ","
              << format_double(evaluate_expansion(t, eps)) << "\n";
    }
    return exit_code::ok;
  } catch (const std::exception& e) {
    err << "numerical failure in expansion: " << e.what() << "\n";
    return exit_code::numerical_failure;
  }
}

inline int cmd_weyl(const RunConfig& cfg, std::ostream& out, std::ostream& err,
                    const std::string& format) {
  BoundaryData data;
  WaveProfile prof;
  try {
    data = make_data(cfg);
    prof = make_profile(cfg);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return exit_code::config_error;
  }

  struct Row {
    double x, y, eps;
    WeylComponents w;
    const char* method;
  };
  std::vector<Row> rows;
  try {
    SolutionField field(data, cfg.quad, cfg.grid_eps_min);
    for (double x : cfg.weyl_x) {
      WeylSeries series = weyl_series(data, x, cfg.weyl_order, prof, cfg.quad);
      for (double eps : cfg.weyl_eps) {
        const TrianglePoint p{x, 1.0 - x - eps};
        if (cfg.weyl_method == "direct" || cfg.weyl_method == "both")
          rows.push_back({p.x, p.y, eps, weyl_direct(field, p, prof), "direct"});
        if (cfg.weyl_method == "series" || cfg.weyl_method == "both")
          rows.push_back({p.x, p.y, eps, series.evaluate(eps), "series"});
      }
    }
  } catch (const std::exception& e) {
    err << "numerical failure in weyl evaluation: " << e.what() << "\n";
    return exit_code::numerical_failure;
  }

  if (format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const Row& r : rows)
      j.push_back({{"x", r.x},
                   {"y", r.y},
                   {"eps", r.eps},
                   {"psi0", r.w.psi0},
                   {"psi2", r.w.psi2},
                   {"psi4", r.w.psi4},
                   {"method", r.method}});
    out << j.dump(2) << "\n";
    return exit_code::ok;
  }
  out << "x,y,eps,psi0,psi2,psi4,method\n";
  for (const Row& r : rows)
    out << format_double(r.x) << "," << format_double(r.y) << "," << format_double(r.eps)
        << "," << format_double(r.w.psi0) << "," << format_double(r.w.psi2) << ","
        << format_double(r.w.psi4) << "," << r.method << "\n";
  return exit_code::ok;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err,
                      const std::string& format,
                      const verify::Options* opt_override = nullptr) {
  verify::Options opt;
  opt.cfg = cfg.quad;
  if (opt_override) opt = *opt_override;
  std::vector<verify::Check> checks;
  try {
    checks = verify::run_suite(cfg.verify_suite, opt);
  } catch (const std::exception& e) {
    err << "verify failed to run: " << e.what() << "\n";
    return exit_code::numerical_failure;
  }
  const bool ok = verify::all_pass(checks);

  if (format == "csv") {
    out << "suite,criterion,name,measured,threshold,pass,seconds\n";
    for (const auto& c : checks)
      out << c.suite << "," << c.criterion << ",\"" << c.name << "\","
          << format_double(c.measured) << "," << format_double(c.threshold) << ","
          << (c.pass ? "true" : "false") << "," << format_double(c.seconds) << "\n";
  } else {
    nlohmann::ordered_json j;
    j["suite"] = cfg.verify_suite;
    j["checks"] = nlohmann::ordered_json::array();
    double total = 0.0;
    for (const auto& c : checks) {
      nlohmann::ordered_json cj;
      cj["name"] = c.name;
      cj["suite"] = c.suite;
      cj["criterion"] = c.criterion;
      cj["measured"] = c.measured;
      cj["threshold"] = c.threshold;
      cj["pass"] = c.pass;
      if (!c.detail.empty()) cj["detail"] = c.detail;
      cj["seconds"] = c.seconds;
      j["checks"].push_back(cj);
      total += c.seconds;
    }
    j["all_pass"] = ok;
    j["total_seconds"] = total;
    out << j.dump(2) << "\n";
  }
  return ok ? exit_code::ok : exit_code::verify_failed;
}

}  // namespace cli
}  // namespace darboux
