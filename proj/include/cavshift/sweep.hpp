#pragma once

// Detuning and acceleration sweeps, the precision/enhancement table, the
// inverse problem (which detuning gives a wanted enhancement) and output.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include <json.hpp>

#include "cavshift/error.hpp"
#include "cavshift/inertial.hpp"
#include "cavshift/rindler.hpp"
#include "cavshift/specfun.hpp"

namespace cavshift::sweep {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
/// Environment variable holding the worker count.
inline constexpr const char* kThreadsEnv = "CAVSHIFT_THREADS";

enum class Mode { fig2_inertial, fig3_difference, fig4_enhancement, table1, inverse_design, single_point };

struct SweepRequest {
  Mode mode = Mode::fig2_inertial;
  double x_min = 1.5, x_max = 9.0;  ///< detunings, or signed epsilon bounds in fig4
  int points = 500;
  std::vector<double> alphas;       ///< +inf is the inertial atom
  double rho_frac = 0.0;
  int n_max = 128;
  quad::QuadratureSpec quadrature;
  std::string output_path;
  /// Smallest |epsilon| on the logarithmic fig4 grid; 0 picks 1e-4 max|bound|.
  double eps_floor = 0.0;

  void validate() const {
    if (mode == Mode::single_point) {
      if (!(x_min > 0)) throw DomainError("SweepRequest: detuning must be positive");
    } else {
      if (!(x_min < x_max)) throw DomainError("SweepRequest: need x_min < x_max");
      if (points < 2) throw DomainError("SweepRequest: need at least two points");
    }
    if ((mode == Mode::fig3_difference || mode == Mode::fig4_enhancement) && alphas.empty())
      throw DomainError("SweepRequest: this mode needs at least one alpha");
    for (double a : alphas)
      if (!(a > 0)) throw DomainError("SweepRequest: alpha must be positive");
    quadrature.validate();
  }
};

struct SweepRow {
  double x_or_epsilon = 0.0;
  double alpha = kInf;
  double delta0 = kNaN;
  double delta = kNaN;
  double difference = kNaN;
  double F = kNaN;
  double err = kNaN;
  std::string method;
  std::string flags;

  bool operator==(const SweepRow&) const = default;
};

inline int thread_count() {
  if (const char* s = std::getenv(kThreadsEnv)) {
    int n = 0;
    const auto r = std::from_chars(s, s + std::strlen(s), n);
    if (r.ec == std::errc() && n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// f(i) for i in [0, n) on `threads` workers; results land in index order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f, int threads = thread_count()) {
  std::vector<T> out(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) out[i] = f(i);
  };
  const int k = std::clamp<int>(threads, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
  std::vector<std::jthread> pool;
  for (int t = 1; t < k; ++t) pool.emplace_back(work);
  work();
  return out;
}

/// xi_01, xi_02, xi_03 inside [lo, hi].
inline std::vector<double> resonance_markers(double lo, double hi) {
  std::vector<double> out;
  for (int n = 1; n <= 3; ++n) {
    const double xi = specfun::bessel_j_zero(0, n);
    if (xi >= lo && xi <= hi) out.push_back(xi);
  }
  return out;
}

inline std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  return g;
}

/// Signed epsilons, logarithmic in |epsilon|, ascending.
inline std::vector<double> epsilon_grid(double lo, double hi, int n, double floor) {
  const double big = std::max(std::abs(lo), std::abs(hi));
  if (floor <= 0) floor = 1e-4 * big;
  std::vector<double> g;
  auto side = [&](double a, double b, int m, double sign) {
    // magnitudes from a to b (a < b), m points
    if (m < 1 || !(b > 0)) return;
    a = std::max(a, floor);
    if (m == 1 || a >= b) {
      g.push_back(sign * b);
      return;
    }
    for (int i = 0; i < m; ++i) g.push_back(sign * a * std::pow(b / a, double(i) / (m - 1)));
  };
  if (lo < 0 && hi > 0) {
    const int nneg = n / 2;
    side(floor, -lo, nneg, -1.0);
    side(floor, hi, n - nneg, 1.0);
  } else if (hi <= 0) {
    side(-hi, -lo, n, -1.0);
  } else {
    side(lo, hi, n, 1.0);
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

inline bool near_resonance(double x, int n_max) {
  for (int n = 1; n <= n_max; ++n) {
    const double xi = specfun::bessel_j_zero(0, n);
    if (std::abs(x - xi) < 1e-12) return true;
    if (xi > x + 1.0) break;
  }
  return false;
}

inline void add_flag(std::string& flags, const std::string& f) {
  if (!flags.empty()) flags += ';';
  flags += f;
}

/// One row at detuning x. epsilon_label is what goes in the first column.
inline SweepRow evaluate_point(double x, double alpha, double label, const SweepRequest& req) {
  SweepRow row;
  row.x_or_epsilon = label;
  row.alpha = alpha;
  CavitySpec c;
  c.detuning_x = x;
  c.rho_frac = req.rho_frac;
  c.n_max = req.n_max;
  if (near_resonance(x, req.n_max)) {
    row.method = "skipped";
    row.flags = "resonance";
    return row;
  }
  try {
    const auto base = delta0(c);
    row.delta0 = base.value;
    if (std::isinf(alpha)) {
      row.delta = base.value;
      row.difference = 0.0;
      row.F = 0.0;
      row.err = base.err_estimate;
      row.method = to_string(Method::closed_form);
      return row;
    }
    const auto d = delta_minus_delta0(c, AccelSpec{alpha}, req.quadrature);
    row.difference = d.value;
    row.delta = base.value + d.value;
    row.err = d.err_estimate + base.err_estimate;
    row.method = to_string(Method::pv_unruh);
    for (const auto& n : d.notes) add_flag(row.flags, n);
    if (std::abs(base.value) < 1e-14)
      add_flag(row.flags, "degenerate_delta0");
    else
      row.F = d.value / base.value;
  } catch (const ConvergenceError& e) {
    row.method = to_string(Method::pv_unruh);
    add_flag(row.flags, "convergence");
    row.err = e.err_estimate();
  } catch (const ResonanceError&) {
    row.method = "skipped";
    add_flag(row.flags, "resonance");
  } catch (const DegenerateError&) {
    add_flag(row.flags, "degenerate");
  }
  return row;
}

/// Rows in ascending grid order (alpha-major when several alphas are given).
inline std::vector<SweepRow> run_sweep(const SweepRequest& req, int threads = thread_count()) {
  req.validate();
  const double xi01 = specfun::bessel_j_zero(0, 1);
  struct Job {
    double x, alpha, label;
  };
  std::vector<Job> jobs;
  std::vector<double> alphas = req.alphas;
  switch (req.mode) {
    case Mode::fig2_inertial:
      for (double x : linear_grid(req.x_min, req.x_max, req.points)) jobs.push_back({x, kInf, x});
      break;
    case Mode::fig3_difference:
      for (double a : alphas)
        for (double x : linear_grid(req.x_min, req.x_max, req.points)) jobs.push_back({x, a, x});
      break;
    case Mode::fig4_enhancement:
      for (double a : alphas)
        for (double e : epsilon_grid(req.x_min, req.x_max, req.points, req.eps_floor))
          jobs.push_back({xi01 + e, a, e});
      break;
    case Mode::single_point:
      if (alphas.empty()) alphas.push_back(kInf);
      for (double a : alphas) jobs.push_back({req.x_min, a, req.x_min});
      break;
    default:
      throw DomainError("run_sweep: use reproduce_table1 / find_detuning_for_enhancement");
  }
  return parallel_map<SweepRow>(
      jobs.size(), [&](std::size_t i) { return evaluate_point(jobs[i].x, jobs[i].alpha, jobs[i].label, req); },
      threads);
}

// ---------------------------------------------------------------------------
// Precision versus enhancement
// ---------------------------------------------------------------------------

struct Table1Entry {
  double alpha, precision, F_reference;
};

inline const std::vector<Table1Entry>& table1_entries() {
  static const std::vector<Table1Entry> t = {{1e5, 1e-5, 1.0}, {1e7, 1e-6, 10.0}, {1e9, 1e-7, 50.0}};
  return t;
}

/// Atomic gap used to fix the physical radial cutoff in the table (the
/// value quoted alongside it).
inline constexpr double kTable1GapHz = 1e10;

struct EnhancementModel {
  int n_max = 128;
  /// If > n_max, Delta_0 also includes the modes n_max < n <= uv_cutoff
  /// through delta0_uv_tail. The noninertial part converges on its own.
  long long uv_cutoff = 0;
  quad::QuadratureSpec quadrature;
};

struct EnhancementSample {
  double epsilon, delta0, difference, F;
};

inline EnhancementSample enhancement_at(double epsilon, double alpha, const EnhancementModel& m) {
  CavitySpec c;
  c.detuning_x = specfun::bessel_j_zero(0, 1) + epsilon;
  c.n_max = m.n_max;
  double d0 = delta0(c).value;
  if (m.uv_cutoff > m.n_max) d0 += delta0_uv_tail(c.detuning_x, m.n_max, m.uv_cutoff);
  const double diff = delta_minus_delta0(c, AccelSpec{alpha}, m.quadrature).value;
  if (std::abs(d0) < 1e-14) throw DegenerateError("enhancement_at: Delta_0 vanishes");
  return {epsilon, d0, diff, diff / d0};
}

/// |epsilon| from `lo` to `hi` on both signs, `per_decade` points per decade.
inline std::vector<double> log_window(double lo, double hi, int per_decade) {
  const int n = std::max(2, static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade)) + 1);
  std::vector<double> g;
  for (int i = 0; i < n; ++i) {
    const double e = lo * std::pow(hi / lo, double(i) / (n - 1));
    g.push_back(-e);
    g.push_back(e);
  }
  std::sort(g.begin(), g.end());
  return g;
}

struct Table1Row {
  double alpha = 0, precision = 0, F_reference = 0;
  long long cutoff = 0;       ///< radial cutoff used for Delta_0
  double F_at = kNaN;         ///< at epsilon = xi_01 * precision
  double F_max = kNaN;        ///< signed F of largest |F| over |epsilon| <= xi_01 * precision
  double eps_at_max = kNaN;
  int failed_points = 0;

  /// Either reading within a factor 3 of the reference enhancement.
  bool agrees() const {
    auto ok = [&](double f) { return std::isfinite(f) && f / F_reference >= 1.0 / 3.0 && f / F_reference <= 3.0; };
    return ok(F_at) || ok(F_max);
  }
};

struct Table1Options {
  int n_max = 128;
  int per_decade = 20;
  double decades = 4.0;  ///< window scanned from precision * 10^-decades up
  quad::QuadratureSpec quadrature;
};

/// One table row per reference entry, once with the cutoff n_max and once
/// with the physical cutoff at kTable1GapHz. Each is {n_max row, physical row}.
inline std::vector<std::pair<Table1Row, Table1Row>> reproduce_table1(const Table1Options& opt = {},
                                                                     int threads = thread_count()) {
  const double xi01 = specfun::bessel_j_zero(0, 1);
  const long long phys = physical_cutoff(xi01, electron_mass_ratio(kTable1GapHz));
  std::vector<std::pair<Table1Row, Table1Row>> out;
  for (const auto& e : table1_entries()) {
    const double w = xi01 * e.precision;
    // Stay clear of the pole-on-threshold guard |chi - 1| < 1e-9.
    const double lo = std::max(w * std::pow(10.0, -opt.decades), 2e-9 * xi01);
    auto grid = log_window(lo, w, opt.per_decade);
    grid.push_back(w);
    // Delta_0 (both cutoffs) and the difference at each epsilon.
    EnhancementModel m{opt.n_max, 0, opt.quadrature};
    struct Sample {
      bool ok;
      double d0, tail, diff;
    };
    auto samples = parallel_map<Sample>(
        grid.size(),
        [&](std::size_t i) -> Sample {
          try {
            const auto s = enhancement_at(grid[i], e.alpha, m);
            const double tail = delta0_uv_tail(xi01 + grid[i], opt.n_max, phys);
            return {true, s.delta0, tail, s.difference};
          } catch (const std::exception&) {
            return {false, 0, 0, 0};
          }
        },
        threads);
    auto fill = [&](Table1Row& row, bool physical) {
      row.alpha = e.alpha;
      row.precision = e.precision;
      row.F_reference = e.F_reference;
      row.cutoff = physical ? phys : opt.n_max;
      double best = -1.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!samples[i].ok) {
          ++row.failed_points;
          continue;
        }
        const double d0 = samples[i].d0 + (physical ? samples[i].tail : 0.0);
        const double f = samples[i].diff / d0;
        if (i + 1 == grid.size()) row.F_at = f;
        if (std::abs(f) > best) {
          best = std::abs(f);
          row.F_max = f;
          row.eps_at_max = grid[i];
        }
      }
    };
    std::pair<Table1Row, Table1Row> p;
    fill(p.first, false);
    fill(p.second, true);
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Inverse design
// ---------------------------------------------------------------------------

struct InverseResult {
  double epsilon = kNaN;
  double F_achieved = kNaN;
  bool achievable = false;
};

/// The epsilon in [eps_lo, eps_hi] whose F is closest to F_target, from a
/// logarithmic scan refined three times around the best point.
inline InverseResult find_detuning_for_enhancement(double alpha, double F_target, double eps_lo,
                                                   double eps_hi, const EnhancementModel& m = {},
                                                   int threads = thread_count()) {
  if (F_target == 0.0 || !std::isfinite(F_target))
    throw DomainError("find_detuning_for_enhancement: F_target must be nonzero");
  if (!(eps_lo < eps_hi)) throw DomainError("find_detuning_for_enhancement: empty window");
  const double xi01 = specfun::bessel_j_zero(0, 1);
  const double floor = 1e-12 * xi01;
  if (eps_lo > -floor && eps_lo < floor) eps_lo = floor;
  if (eps_hi > -floor && eps_hi < floor) eps_hi = -floor;
  if (!(eps_lo < eps_hi)) throw DomainError("find_detuning_for_enhancement: window collapses at 0");

  auto scan = [&](const std::vector<double>& g, InverseResult& best, double& dist) {
    auto f = parallel_map<double>(
        g.size(),
        [&](std::size_t i) {
          try {
            return enhancement_at(g[i], alpha, m).F;
          } catch (const std::exception&) {
            return kNaN;
          }
        },
        threads);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!std::isfinite(f[i])) continue;
      const double d = std::abs(f[i] - F_target);
      if (d < dist) {
        dist = d;
        best.epsilon = g[i];
        best.F_achieved = f[i];
      }
    }
  };
  const double big = std::max(std::abs(eps_lo), std::abs(eps_hi));
  const double small = (eps_lo < 0 && eps_hi > 0) ? std::max(floor, 1e-6 * big)
                                                  : std::min(std::abs(eps_lo), std::abs(eps_hi));
  std::vector<double> g;
  for (double e : log_window(std::max(small, floor), big, 20))
    if (e >= eps_lo && e <= eps_hi) g.push_back(e);
  InverseResult best;
  double dist = std::numeric_limits<double>::infinity();
  scan(g, best, dist);
  if (!std::isfinite(best.epsilon)) return best;
  double ratio = std::pow(10.0, 1.0 / 20);
  for (int level = 0; level < 3; ++level) {
    std::vector<double> fine;
    for (int k = -5; k <= 5; ++k) {
      const double e = best.epsilon * std::pow(ratio, k / 5.0);
      if (e >= eps_lo && e <= eps_hi) fine.push_back(e);
    }
    scan(fine, best, dist);
    ratio = std::pow(ratio, 0.2);
  }
  best.achievable = dist <= 0.5 * std::abs(F_target);
  return best;
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

inline const char* kCsvHeader = "x_or_epsilon,alpha,delta0,delta,difference,F,err,method,flags";

/// Shortest decimal that reads back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw DomainError("parse_double: bad number '" + std::string(s) + "'");
  return v;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

inline std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\r\n";
  for (const auto& r : rows) {
    for (double v : {r.x_or_epsilon, r.alpha, r.delta0, r.delta, r.difference, r.F, r.err})
      out += format_double(v) + ',';
    out += csv_field(r.method) + ',' + csv_field(r.flags) + "\r\n";
  }
  return out;
}

/// RFC 4180 records (quoted fields may hold separators and line breaks).
inline std::vector<std::vector<std::string>> parse_csv_records(const std::string& text) {
  std::vector<std::vector<std::string>> recs;
  std::vector<std::string> rec;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = any = true;
    } else if (c == ',') {
      rec.push_back(field);
      field.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      rec.push_back(field);
      recs.push_back(rec);
      rec.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (any || !field.empty()) {
    rec.push_back(field);
    recs.push_back(rec);
  }
  return recs;
}

inline std::vector<SweepRow> from_csv(const std::string& text) {
  const auto recs = parse_csv_records(text);
  if (recs.empty()) throw DomainError("from_csv: empty input");
  std::vector<SweepRow> rows;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    const auto& f = recs[i];
    if (f.size() != 9) throw DomainError("from_csv: expected 9 fields");
    SweepRow r;
    double* nums[] = {&r.x_or_epsilon, &r.alpha, &r.delta0, &r.delta, &r.difference, &r.F, &r.err};
    for (int k = 0; k < 7; ++k) *nums[k] = parse_double(f[k]);
    r.method = f[7];
    r.flags = f[8];
    rows.push_back(r);
  }
  return rows;
}

inline nlohmann::json json_number(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(format_double(v));
}

inline double json_double(const nlohmann::json& j) {
  return j.is_string() ? parse_double(j.get<std::string>()) : j.get<double>();
}

/// Array of row objects keyed like the CSV header. Non-finite values are
/// written as the strings "inf", "-inf", "nan".
inline std::string to_json(const std::vector<SweepRow>& rows) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"x_or_epsilon", json_number(r.x_or_epsilon)},
                   {"alpha", json_number(r.alpha)},
                   {"delta0", json_number(r.delta0)},
                   {"delta", json_number(r.delta)},
                   {"difference", json_number(r.difference)},
                   {"F", json_number(r.F)},
                   {"err", json_number(r.err)},
                   {"method", r.method},
                   {"flags", r.flags}});
  }
  return arr.dump(1) + "\n";
}

inline std::vector<SweepRow> from_json(const std::string& text) {
  std::vector<SweepRow> rows;
  for (const auto& o : nlohmann::json::parse(text)) {
    SweepRow r;
    r.x_or_epsilon = json_double(o.at("x_or_epsilon"));
    r.alpha = json_double(o.at("alpha"));
    r.delta0 = json_double(o.at("delta0"));
    r.delta = json_double(o.at("delta"));
    r.difference = json_double(o.at("difference"));
    r.F = json_double(o.at("F"));
    r.err = json_double(o.at("err"));
    r.method = o.at("method").get<std::string>();
    r.flags = o.at("flags").get<std::string>();
    rows.push_back(r);
  }
  return rows;
}

struct SvgOptions {
  bool log_y = false;
  std::string y_label;  ///< default picks from the sweep mode
  std::vector<double> markers;
};

inline std::string xml_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '&': o += "&amp;"; break;
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

/// Line chart of `value(row)` against the first column, one polyline per
/// alpha, with dashed verticals at the markers.
template <class Value>
std::string to_svg(const std::vector<SweepRow>& rows, Value value, const SvgOptions& opt) {
  if (rows.empty()) throw DomainError("to_svg: no rows");
  constexpr double W = 800, H = 500, L = 80, R = 20, T = 20, B = 60;
  auto ty = [&](double v) { return opt.log_y ? std::log10(std::abs(v)) : v; };
  double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
  for (const auto& r : rows) {
    const double y = value(r);
    if (!std::isfinite(y) || (opt.log_y && y == 0.0)) continue;
    xmin = std::min(xmin, r.x_or_epsilon);
    xmax = std::max(xmax, r.x_or_epsilon);
    ymin = std::min(ymin, ty(y));
    ymax = std::max(ymax, ty(y));
  }
  if (!(xmin < xmax)) xmin -= 1, xmax += 1;
  if (!(ymin < ymax)) ymin -= 1, ymax += 1;
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };
  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
    << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double m : opt.markers)
    if (m >= xmin && m <= xmax)
      s << "<line x1=\"" << px(m) << "\" y1=\"" << T << "\" x2=\"" << px(m) << "\" y2=\"" << H - B
        << "\" stroke=\"red\" stroke-dasharray=\"4 3\"/>\n";
  static const char* colours[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"};
  std::vector<double> alphas;
  for (const auto& r : rows)
    if (std::find(alphas.begin(), alphas.end(), r.alpha) == alphas.end()) alphas.push_back(r.alpha);
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    s << "<polyline fill=\"none\" stroke=\"" << colours[k % 5] << "\" points=\"";
    for (const auto& r : rows) {
      if (r.alpha != alphas[k]) continue;
      const double y = value(r);
      if (!std::isfinite(y) || (opt.log_y && y == 0.0)) continue;
      s << px(r.x_or_epsilon) << ',' << py(ty(y)) << ' ';
    }
    s << "\"/>\n";
    s << "<text x=\"" << W - R - 150 << "\" y=\"" << T + 18 * (k + 1) << "\" fill=\"" << colours[k % 5]
      << "\" font-size=\"13\">alpha = " << xml_escape(format_double(alphas[k])) << "</text>\n";
  }
  s << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" font-size=\"12\">" << format_double(xmin)
    << "</text>\n"
    << "<text x=\"" << W - R - 60 << "\" y=\"" << H - B + 18 << "\" font-size=\"12\">" << format_double(xmax)
    << "</text>\n"
    << "<text x=\"4\" y=\"" << py(ymax) + 4 << "\" font-size=\"12\">" << format_double(ymax) << "</text>\n"
    << "<text x=\"4\" y=\"" << py(ymin) << "\" font-size=\"12\">" << format_double(ymin) << "</text>\n"
    << "<text x=\"" << W / 2 - 40 << "\" y=\"" << H - 15 << "\" font-size=\"14\">x_or_epsilon</text>\n"
    << "<text x=\"14\" y=\"" << H / 2 << "\" font-size=\"14\" transform=\"rotate(-90 14 " << H / 2 << ")\">"
    << xml_escape(opt.log_y ? "log10 |" + opt.y_label + "|" : opt.y_label) << "</text>\n"
    << "</svg>\n";
  return s.str();
}

/// Quantity plotted for a sweep mode.
inline std::pair<std::string, double (*)(const SweepRow&)> plotted(Mode mode) {
  switch (mode) {
    case Mode::fig3_difference:
      return {"difference", [](const SweepRow& r) { return r.difference; }};
    case Mode::fig4_enhancement:
      return {"F", [](const SweepRow& r) { return r.F; }};
    default:
      return {"delta0", [](const SweepRow& r) { return r.delta0; }};
  }
}

}  // namespace cavshift::sweep
