// cavshift: radiative shift of a two-level atom in a cylindrical cavity.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "cli_options.hpp"

#include "cavshift/inertial.hpp"
#include "cavshift/rindler.hpp"
#include "cavshift/specfun.hpp"
#include "cavshift/sweep.hpp"

namespace {

using namespace cavshift;
using sweep::format_double;

void write_text(const cli::Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + o.out);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + o.out);
}

void emit(const cli::Options& o, const std::vector<sweep::SweepRow>& rows, sweep::Mode mode,
          std::vector<double> markers) {
  if (rows.empty()) throw DomainError("no rows to write");
  if (o.format == "csv") return write_text(o, sweep::to_csv(rows));
  if (o.format == "json") return write_text(o, sweep::to_json(rows));
  const auto [label, value] = sweep::plotted(mode);
  sweep::SvgOptions so;
  so.log_y = o.log_y;
  so.y_label = label;
  so.markers = std::move(markers);
  write_text(o, sweep::to_svg(rows, value, so));
}

sweep::SweepRequest base_request(const cli::Options& o) {
  sweep::SweepRequest r;
  r.alphas = cli::alphas(o);
  r.rho_frac = o.rho_frac;
  r.n_max = o.n_max;
  r.quadrature = cli::quadrature(o);
  r.output_path = o.out;
  r.eps_floor = o.eps_floor;
  return r;
}

int run_point(const cli::Options& o) {
  auto r = base_request(o);
  r.mode = sweep::Mode::single_point;
  r.x_min = cli::detuning(o);
  auto rows = sweep::run_sweep(r);
  if (o.eps)
    for (auto& row : rows) row.x_or_epsilon = *o.eps;
  emit(o, rows, r.mode, {});
  return 0;
}

int run_sweep_cmd(const cli::Options& o) {
  auto r = base_request(o);
  const double xi01 = specfun::bessel_j_zero(0, 1);
  std::vector<double> markers;
  if (o.kind == "eps") {
    r.mode = sweep::Mode::fig4_enhancement;
    r.x_min = o.x_min.value_or(-1e-3 * xi01);
    r.x_max = o.x_max.value_or(1e-3 * xi01);
    r.points = o.points.value_or(200);
    markers = {0.0};
  } else {
    const bool inertial =
        r.alphas.empty() || std::all_of(r.alphas.begin(), r.alphas.end(), [](double a) { return std::isinf(a); });
    r.mode = inertial ? sweep::Mode::fig2_inertial : sweep::Mode::fig3_difference;
    if (!inertial)
      std::erase_if(r.alphas, [](double a) { return std::isinf(a); });
    r.x_min = o.x_min.value_or(inertial ? 1.5 : 2.2);
    r.x_max = o.x_max.value_or(inertial ? 9.0 : 6.0);
    r.points = o.points.value_or(inertial ? 500 : 200);
    markers = sweep::resonance_markers(r.x_min, r.x_max);
  }
  const auto rows = sweep::run_sweep(r);
  std::string m;
  for (double x : markers) m += (m.empty() ? "" : " ") + format_double(x);
  std::cerr << "resonance markers: " << (m.empty() ? "none" : m) << "\n";
  emit(o, rows, r.mode, markers);
  return 0;
}

std::string table1_text(const std::vector<std::pair<sweep::Table1Row, sweep::Table1Row>>& t) {
  std::string s = "alpha,precision,F_reference,cutoff,F_at,F_max,eps_at_max,failed_points,agrees\n";
  for (const auto& [a, b] : t)
    for (const auto* r : {&a, &b})
      s += format_double(r->alpha) + ',' + format_double(r->precision) + ',' + format_double(r->F_reference) + ',' +
           std::to_string(r->cutoff) + ',' + format_double(r->F_at) + ',' + format_double(r->F_max) + ',' +
           format_double(r->eps_at_max) + ',' + std::to_string(r->failed_points) + ',' +
           (r->agrees() ? "yes" : "no") + '\n';
  return s;
}

int run_table1(const cli::Options& o) {
  sweep::Table1Options t;
  t.n_max = o.n_max;
  t.quadrature = cli::quadrature(o);
  write_text(o, table1_text(sweep::reproduce_table1(t)));
  return 0;
}

int run_invert(const cli::Options& o) {
  if (!o.target) throw DomainError("invert needs --target");
  const auto a = cli::alphas(o);
  if (a.size() != 1) throw DomainError("invert needs exactly one --alpha");
  const double xi01 = specfun::bessel_j_zero(0, 1);
  sweep::EnhancementModel m;
  m.n_max = o.n_max;
  m.quadrature = cli::quadrature(o);
  const auto r = sweep::find_detuning_for_enhancement(a[0], *o.target, o.x_min.value_or(-1e-3 * xi01),
                                                      o.x_max.value_or(1e-3 * xi01), m);
  write_text(o, "epsilon,relative_precision,F_achieved,achievable\n" + format_double(r.epsilon) + ',' +
                    format_double(r.epsilon / xi01) + ',' + format_double(r.F_achieved) + ',' +
                    (r.achievable ? "yes" : "no") + '\n');
  return r.achievable ? 0 : 3;
}

int run_selftest(const cli::Options& o) {
  bool all = true;
  auto report = [&](bool ok, const std::string& what) {
    std::printf("%s %s\n", ok ? "PASS" : "FAIL", what.c_str());
    all = all && ok;
  };
  report(std::abs(specfun::bessel_j_zero(0, 1) - 2.404825557695773) < 1e-10 &&
             std::abs(specfun::bessel_j_zero(0, 2) - 5.520078110286311) < 1e-10,
         "Bessel zeros xi_01, xi_02");
  report(std::abs(specfun::airy_ai(0.0) - 0.3550280538878172) < 1e-10, "Ai(0)");
  double worst = 0.0;
  for (double x : {1.7, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 7.9}) {
    CavitySpec c;
    c.detuning_x = x;
    c.n_max = o.n_max;
    const double a = delta0(c).value, b = delta0_pv_oracle(c).value;
    worst = std::max(worst, std::abs(a - b) / std::abs(a));
  }
  report(worst <= 1e-5, "closed-form vs principal-value inertial shift, worst " + format_double(worst));
  for (const auto& [a, b] : sweep::reproduce_table1())
    report(b.agrees(), "enhancement table alpha=" + format_double(b.alpha) + " F_at=" + format_double(b.F_at) +
                           " F_max=" + format_double(b.F_max) + " reference=" + format_double(b.F_reference));
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radiative shift of a two-level atom in a cylindrical cavity"};
  cli::Options o;
  cli::configure(app, o);
  CLI11_PARSE(app, argc, argv);
  try {
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "point") return run_point(o);
    if (cmd == "sweep") return run_sweep_cmd(o);
    if (cmd == "table1") return run_table1(o);
    if (cmd == "invert") return run_invert(o);
    return run_selftest(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
