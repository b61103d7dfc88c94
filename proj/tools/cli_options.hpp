#pragma once

// Command-line and config-file options for the cavshift tool. Kept apart from
// main() so the precedence rules (flag > config file > default) can be tested.

#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cavshift/sweep.hpp"

namespace cavshift::cli {

struct Options {
  std::vector<std::string> alpha;  ///< "inf" is accepted
  double x = 3.0;
  std::optional<double> eps;
  std::optional<double> x_min, x_max;
  std::optional<int> points;
  int n_max = 128;
  double rho_frac = 0.0;
  double rel_tol = 1e-8;
  std::string format = "csv";
  std::string out;
  bool log_y = false;
  std::string kind = "x";
  double eps_floor = 0.0;
  std::optional<double> target;
};

/// Subcommands share the top-level options (fallthrough), so a flat config
/// file of `key = value` lines reaches every option.
inline void configure(CLI::App& app, Options& o) {
  app.set_config("--config", "", "flat `key = value` file; `#` starts a comment");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.add_option("--alpha", o.alpha, "omega_0 / a (repeatable; inf = inertial)")->delimiter(',');
  app.add_option("--x", o.x, "detuning R omega_0");
  app.add_option("--eps", o.eps, "detuning from xi_01 (overrides --x)");
  app.add_option("--x-min,--x_min", o.x_min, "lower grid bound (x, or signed epsilon)");
  app.add_option("--x-max,--x_max", o.x_max, "upper grid bound");
  app.add_option("--points", o.points, "grid size")->check(CLI::PositiveNumber);
  app.add_option("--n-max,--n_max", o.n_max, "radial mode cutoff")->check(CLI::PositiveNumber);
  app.add_option("--rho-frac,--rho_frac", o.rho_frac, "radial position rho_0 / R")->check(CLI::Range(0.0, 1.0));
  app.add_option("--rel-tol,--rel_tol", o.rel_tol, "quadrature relative tolerance")->check(CLI::PositiveNumber);
  app.add_option("--format", o.format, "csv | json | svg")->check(CLI::IsMember({"csv", "json", "svg"}));
  app.add_option("--out", o.out, "output file (default stdout)");
  app.add_flag("--log-y,--log_y", o.log_y, "logarithmic ordinate in svg output");
  app.add_option("--kind", o.kind, "sweep variable: x or eps")->check(CLI::IsMember({"x", "eps"}));
  app.add_option("--eps-floor,--eps_floor", o.eps_floor, "smallest |epsilon| on the eps grid");
  app.add_option("--target", o.target, "wanted enhancement F (invert)");

  app.add_subcommand("point", "shift at one detuning")->fallthrough();
  app.add_subcommand("sweep", "detuning sweep")->fallthrough();
  app.add_subcommand("table1", "precision versus enhancement table")->fallthrough();
  app.add_subcommand("invert", "detuning giving a wanted enhancement")->fallthrough();
  app.add_subcommand("selftest", "oracle and table checks")->fallthrough();
  app.require_subcommand(1);
}

inline std::vector<double> alphas(const Options& o) {
  std::vector<double> out;
  for (const auto& s : o.alpha) out.push_back(sweep::parse_double(s));
  return out;
}

inline quad::QuadratureSpec quadrature(const Options& o) {
  quad::QuadratureSpec q;
  q.rel_tol = o.rel_tol;
  return q;
}

inline double detuning(const Options& o) {
  return o.eps ? specfun::bessel_j_zero(0, 1) + *o.eps : o.x;
}

}  // namespace cavshift::cli
