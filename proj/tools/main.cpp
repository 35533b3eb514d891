// darboux: solve the Goursat problem for the Euler-Darboux equation, expand
// the solution near the focusing diagonal, and compute Weyl scalars for
// collinearly polarized colliding plane waves.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "darboux/cli.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  int threads = 1;
  long seed = 0;  // reserved; all algorithms are deterministic
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "run configuration file (key = value)");
  cmd->add_option("--out", args.out_path, "output path (default: stdout)");
  cmd->add_option("--format", args.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", args.threads, "worker threads for grid sweeps")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", args.seed, "reserved; accepted for interface stability");
}

int load_config(const CommonArgs& args, darboux::cli::RunConfig& cfg) {
  try {
    if (!args.config_path.empty())
      cfg = darboux::cli::RunConfig::parse_file(args.config_path);
    if (const char* env = std::getenv("DARBOUX_QUAD_RTOL")) {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end == env || !(v > 0.0)) {
        std::cerr << "config error: DARBOUX_QUAD_RTOL must be a positive number\n";
        return darboux::cli::exit_code::config_error;
      }
      cfg.quad.rel_tol = v;
    }
    cfg.quad.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return darboux::cli::exit_code::config_error;
  }
  return darboux::cli::exit_code::ok;
}

template <class Fn>
int with_output(const CommonArgs& args, Fn&& fn) {
  if (args.out_path.empty()) return fn(std::cout);
  std::ofstream out(args.out_path, std::ios::binary);  // LF line endings everywhere
  if (!out) {
    std::cerr << "config error: cannot open output file '" << args.out_path << "'\n";
    return darboux::cli::exit_code::config_error;
  }
  return fn(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Goursat problem for the Euler-Darboux equation: field evaluation, diagonal "
      "asymptotics, and Weyl scalars of colliding plane gravitational waves"};
  app.require_subcommand(1);

  CommonArgs ev, ex, wy, vf;
  CLI::App* evaluate = app.add_subcommand("evaluate", "tabulate V and derivatives on a grid");
  add_common(evaluate, ev);
  CLI::App* expand = app.add_subcommand("expand", "diagonal expansion coefficients");
  add_common(expand, ex);
  CLI::App* weyl = app.add_subcommand("weyl", "Weyl scalars, direct and/or series");
  add_common(weyl, wy);
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  add_common(verify, vf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : darboux::cli::exit_code::config_error;
  }

  darboux::cli::RunConfig cfg;
  if (evaluate->parsed()) {
    if (int rc = load_config(ev, cfg)) return rc;
    return with_output(ev, [&](std::ostream& out) {
      return darboux::cli::cmd_evaluate(cfg, out, std::cerr, ev.threads, ev.format);
    });
  }
  if (expand->parsed()) {
    if (int rc = load_config(ex, cfg)) return rc;
    return with_output(ex, [&](std::ostream& out) {
      return darboux::cli::cmd_expand(cfg, out, std::cerr, ex.format);
    });
  }
  if (weyl->parsed()) {
    if (int rc = load_config(wy, cfg)) return rc;
    return with_output(wy, [&](std::ostream& out) {
      return darboux::cli::cmd_weyl(cfg, out, std::cerr, wy.format);
    });
  }
  if (verify->parsed()) {
    if (int rc = load_config(vf, cfg)) return rc;
    return with_output(vf, [&](std::ostream& out) {
      return darboux::cli::cmd_verify(cfg, out, std::cerr, vf.format);
    });
  }
  return darboux::cli::exit_code::config_error;
}
