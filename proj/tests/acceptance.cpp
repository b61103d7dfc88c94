// One PASS/FAIL line per acceptance criterion; exit status is nonzero if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "cavshift/sweep.hpp"

using namespace cavshift;

namespace {

double xi(int n) { return specfun::bessel_j_zero(0, n); }
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

CavitySpec cavity(double x, int n_max = 128) {
  CavitySpec c;
  c.detuning_x = x;
  c.n_max = n_max;
  return c;
}

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome oracle_equivalence() {
  double worst = 0;
  int count = 0;
  for (int i = 0; count < 20; ++i) {
    const double x = 1.5 + 6.5 * (i + 0.5) / 23.0;
    if (std::abs(x - xi(1)) < 1e-2 || std::abs(x - xi(2)) < 1e-2 || std::abs(x - xi(3)) < 1e-2) continue;
    ++count;
    worst = std::max(worst, rel(delta0_pv_oracle(cavity(x)).value, delta0(cavity(x)).value));
  }
  return {worst <= 1e-5, "worst relative difference " + sweep::format_double(worst) + " over 20 detunings"};
}

Outcome special_function_anchors() {
  const double z1 = std::abs(xi(1) - 2.404825557695773), z2 = std::abs(xi(2) - 5.520078110286311);
  const double ai = std::abs(specfun::airy_ai(0.0) - 0.3550280538878172);
  double k = 0;
  for (double x : {0.5, 0.9, 1.1, 2.0})
    k = std::max(k, rel(specfun::bessel_k_imag_order_uniform_scaled(50, x),
                        specfun::bessel_k_imag_order_oracle_scaled(50, 50 * x)));
  return {z1 <= 1e-10 && z2 <= 1e-10 && ai <= 1e-10 && k <= 0.01,
          "|dxi01| " + sweep::format_double(z1) + ", |dxi02| " + sweep::format_double(z2) + ", |dAi(0)| " +
              sweep::format_double(ai) + ", K uniform vs oracle at nu=50 " + sweep::format_double(k)};
}

Outcome inertial_structure() {
  sweep::SweepRequest r;  // 500 points on (1.5, 9)
  const auto rows = sweep::run_sweep(r);
  bool ok = rows.size() == 500;
  for (const auto& row : rows) ok = ok && (std::isfinite(row.delta0) || row.flags == "resonance");
  std::string d = sweep::format_double(double(rows.size())) + " rows";
  for (int n = 1; n <= 3; ++n) {
    const double near = delta0(cavity(xi(n) - 1e-4)).value;
    const double far = delta0(cavity(xi(n) - 1e-1)).value;
    const double above = delta0(cavity(xi(n) + 1e-4)).value;
    const bool good = far < 0 && near <= 10 * far && std::isfinite(above) && above > near;
    ok = ok && good;
    d += "; xi0" + std::to_string(n) + ": " + sweep::format_double(near) + " vs " + sweep::format_double(far) +
         ", above " + sweep::format_double(above);
  }
  return {ok, d};
}

Outcome difference_structure() {
  sweep::SweepRequest r;
  r.mode = sweep::Mode::fig3_difference;
  r.x_min = 2.2;
  r.x_max = 6.0;
  r.points = 200;
  r.alphas = {1e3};
  const auto rows = sweep::run_sweep(r);
  std::vector<std::pair<double, double>> maxima;  // (|diff|, x)
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const double a = std::abs(rows[i - 1].difference), b = std::abs(rows[i].difference),
                 c = std::abs(rows[i + 1].difference);
    if (std::isfinite(b) && b > a && b > c) maxima.push_back({b, rows[i].x_or_epsilon});
  }
  std::sort(maxima.rbegin(), maxima.rend());
  if (maxima.size() < 2) return {false, "fewer than two local maxima"};
  double p = maxima[0].second, q = maxima[1].second;
  if (p > q) std::swap(p, q);
  return {std::abs(p - xi(1)) <= 0.1 && std::abs(q - xi(2)) <= 0.1,
          "largest maxima at x = " + sweep::format_double(p) + ", " + sweep::format_double(q)};
}

Outcome cross_method() {
  const AccelSpec a{1e3};
  double worst = 0;
  for (int i = 0; i < 10; ++i) {
    const double x = 2.3 + 3.6 * (i + 0.5) / 10.0;
    const auto c = cavity(x);
    const double pv = delta_minus_delta0(c, a).value;
    const double ls = delta_lstot2(c, a).value - delta0(c).value;
    worst = std::max(worst, rel(ls, pv));
  }
  return {worst <= 0.02, "worst relative difference " + sweep::format_double(worst) + " over 10 points"};
}

Outcome table_reproduction() {
  const auto rows = sweep::reproduce_table1();
  bool ok = true;
  std::string d;
  for (const auto& [nm, phys] : rows) {
    ok = ok && phys.agrees();
    if (!d.empty()) d += "; ";
    d += "alpha " + sweep::format_double(phys.alpha) + ": F_at " + sweep::format_double(phys.F_at) + ", F_max " +
         sweep::format_double(phys.F_max) + " (reference " + sweep::format_double(phys.F_reference) + ", cutoff " +
         std::to_string(phys.cutoff) + (phys.agrees() ? ", within x3)" : ", outside x3)");
  }
  return {ok, d};
}

Outcome property_suite() {
  std::string d;
  bool ok = true;
  // cutoff logarithm: successive doublings give equal increments
  {
    const double a = delta0(cavity(3.0, 128)).value, b = delta0(cavity(3.0, 256)).value,
                 c = delta0(cavity(3.0, 512)).value;
    const double ratio = (c - b) / (b - a);
    ok = ok && std::abs(ratio - 1.0) <= 0.1;
    d += "log ratio " + sweep::format_double(ratio);
  }
  // cutoff robustness of the difference
  {
    const double a = delta_minus_delta0(cavity(3.3, 128), AccelSpec{1e3}).value;
    const double b = delta_minus_delta0(cavity(3.3, 256), AccelSpec{1e3}).value;
    ok = ok && rel(b, a) <= 1e-4;
    d += "; n_max doubling " + sweep::format_double(rel(b, a));
  }
  // inertial-limit decay
  {
    double prev = std::numeric_limits<double>::infinity();
    bool mono = true;
    for (double al : {1e2, 1e3, 1e4}) {
      const double v = std::abs(delta_minus_delta0(cavity(xi(1) - 0.05), AccelSpec{al}).value);
      mono = mono && v < prev;
      prev = v;
    }
    ok = ok && mono;
    d += mono ? "; alpha ladder decays" : "; alpha ladder not monotone";
  }
  // principal-value pairing
  {
    const double pv = quad::pv_integral([](double) { return 1.0; }, 1.0, 0.0, 2.0, {});
    ok = ok && std::abs(pv) <= 1e-10;
    d += "; P.V. int_0^2 = " + sweep::format_double(pv);
  }
  // determinism across thread counts
  {
    sweep::SweepRequest r;
    r.mode = sweep::Mode::fig3_difference;
    r.x_min = 2.2;
    r.x_max = 6.0;
    r.points = 24;
    r.alphas = {1e3};
    const bool same = sweep::to_csv(sweep::run_sweep(r, 1)) == sweep::to_csv(sweep::run_sweep(r, 7));
    ok = ok && same;
    d += same ? "; csv identical for 1 and 7 threads" : "; csv differs across thread counts";
  }
  return {ok, d};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 oracle equivalence (inertial)", oracle_equivalence},
      {"2 special-function anchors", special_function_anchors},
      {"3 inertial shift structure", inertial_structure},
      {"4 noninertial difference structure", difference_structure},
      {"5 cross-method agreement", cross_method},
      {"6 precision versus enhancement table", table_reproduction},
      {"7 property suite", property_suite},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  criterion %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", name, s, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
