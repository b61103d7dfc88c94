#pragma once

// Adaptive Gauss-Kronrod integration, semi-infinite ranges and Cauchy
// principal values with a simple pole.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cavshift/error.hpp"

namespace cavshift::quad {

/// Numerical controls shared by every integral in the library.
struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  /// Half-width of the neighbourhood of a pole that is integrated by
  /// symmetric pairing f(p+t) - f(p-t).
  double pv_window = 1e-3;
  /// Truncation of semi-infinite frequency ranges, in units of omega_0.
  double upper_cutoff = 50.0;
  int max_subdivisions = 10'000;
  int osc_panels_per_period = 8;

  void validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0))
      throw DomainError("QuadratureSpec: tolerances must be positive");
    if (!(pv_window > 0) || !(pv_window < 0.5))
      throw DomainError("QuadratureSpec: pv_window must lie in (0, 0.5)");
    if (!(upper_cutoff > 0))
      throw DomainError("QuadratureSpec: upper_cutoff must be positive");
    if (max_subdivisions < 1 || osc_panels_per_period < 1)
      throw DomainError("QuadratureSpec: counts must be positive");
  }
};

struct QuadResult {
  double value = 0.0;
  double err_estimate = 0.0;
};

enum class EndpointSingularity { none, lower, upper, both };

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980297122, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a, b, value, err;
  bool at_roundoff = false;  ///< err is the rounding floor; splitting cannot help
  bool operator<(const Segment& o) const { return err < o.err; }
};

template <class F>
Segment gk21(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kWgk[10];
  double resg = 0.0;
  double resabs = std::abs(resk);
  std::array<double, 10> f1{}, f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = h * kXgk[j];
    f1[j] = f(c - dx);
    f2[j] = f(c + dx);
    const double s = f1[j] + f2[j];
    resk += kWgk[j] * s;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * s;
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j)
    resasc += kWgk[j] * (std::abs(f1[j] - reskh) + std::abs(f2[j] - reskh));
  const double value = resk * h;
  resabs *= std::abs(h);
  resasc *= std::abs(h);
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  bool floor = false;
  if (resabs > std::numeric_limits<double>::min() / (50 * eps) && err <= 50 * eps * resabs) {
    err = 50 * eps * resabs;
    floor = true;
  }
  if (!std::isfinite(value) || !std::isfinite(err))
    throw DomainError("integrand is not finite on [" + std::to_string(a) +
                      ", " + std::to_string(b) + "]");
  return {a, b, value, err, floor};
}

/// Neumaier-compensated sum, in ascending order of the left endpoint so
/// that the result does not depend on the refinement history.
inline QuadResult accumulate(std::vector<Segment> segs) {
  std::sort(segs.begin(), segs.end(),
            [](const Segment& l, const Segment& r) { return l.a < r.a; });
  double sum = 0.0, comp = 0.0, err = 0.0;
  for (const auto& s : segs) {
    const double t = sum + s.value;
    comp += std::abs(sum) >= std::abs(s.value) ? (sum - t) + s.value
                                               : (s.value - t) + sum;
    sum = t;
    err += s.err;
  }
  return {sum + comp, err};
}

}  // namespace detail

/// Globally adaptive integration over the union of [p[i], p[i+1]].
/// Breakpoints must be ascending; the first and last are the limits.
template <class F>
QuadResult integrate(F&& f, std::span<const double> points,
                     const QuadratureSpec& spec) {
  spec.validate();
  if (points.size() < 2)
    throw DomainError("integrate: need at least two points");
  // Max-heap on the error estimate.
  std::vector<detail::Segment> work;
  std::vector<detail::Segment> done;
  double total = 0.0, total_err = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i] <= points[i + 1]))
      throw DomainError("integrate: breakpoints must be ascending");
    if (points[i] == points[i + 1]) continue;
    auto s = detail::gk21(f, points[i], points[i + 1]);
    total += s.value;
    total_err += s.err;
    work.push_back(s);
  }
  std::make_heap(work.begin(), work.end());
  auto tolerance = [&] {
    return std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
  };
  // The running totals drift under many incremental updates; refresh them.
  auto refresh = [&] {
    total = total_err = 0.0;
    for (const auto& s : work) total += s.value, total_err += s.err;
    for (const auto& s : done) total += s.value, total_err += s.err;
  };
  int splits = 0;
  while (!work.empty() && total_err > tolerance()) {
    std::pop_heap(work.begin(), work.end());
    auto s = work.back();
    work.pop_back();
    const double mid = 0.5 * (s.a + s.b);
    const double scale = std::max(std::abs(s.a), std::abs(s.b));
    if (s.at_roundoff || !(mid > s.a && mid < s.b) ||
        (s.b - s.a) < 1e-15 * std::max(scale, 1e-300)) {
      // Cannot be refined further at double precision.
      done.push_back(s);
      continue;
    }
    if (++splits > spec.max_subdivisions) {
      work.push_back(s);
      done.insert(done.end(), work.begin(), work.end());
      const auto best = detail::accumulate(std::move(done));
      throw ConvergenceError("integrate: subdivision budget exhausted",
                             best.value, best.err_estimate);
    }
    auto l = detail::gk21(f, s.a, mid);
    auto r = detail::gk21(f, mid, s.b);
    total += l.value + r.value - s.value;
    total_err += l.err + r.err - s.err;
    work.push_back(l);
    std::push_heap(work.begin(), work.end());
    work.push_back(r);
    std::push_heap(work.begin(), work.end());
    if (splits % 64 == 0) refresh();
  }
  done.insert(done.end(), work.begin(), work.end());
  auto res = detail::accumulate(std::move(done));
  if (res.err_estimate > 10 * std::max(spec.abs_tol, spec.rel_tol * std::abs(res.value)))
    throw ConvergenceError("integrate: roundoff prevents reaching tolerance",
                           res.value, res.err_estimate);
  return res;
}

/// Integral of f over [a, b]. Integrable inverse-square-root endpoint
/// singularities are removed by the substitution x = a + t^2 (or b - t^2).
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadratureSpec& spec,
                     EndpointSingularity sing = EndpointSingularity::none) {
  if (!(a < b)) throw DomainError("integrate: require a < b");
  switch (sing) {
    case EndpointSingularity::none: {
      const std::array<double, 2> p{a, b};
      return integrate(f, std::span<const double>(p), spec);
    }
    case EndpointSingularity::lower: {
      auto g = [&](double t) { return 2.0 * t * f(a + t * t); };
      const std::array<double, 2> p{0.0, std::sqrt(b - a)};
      return integrate(g, std::span<const double>(p), spec);
    }
    case EndpointSingularity::upper: {
      auto g = [&](double t) { return 2.0 * t * f(b - t * t); };
      const std::array<double, 2> p{0.0, std::sqrt(b - a)};
      return integrate(g, std::span<const double>(p), spec);
    }
    case EndpointSingularity::both: {
      const double m = 0.5 * (a + b);
      auto lo = integrate(f, a, m, spec, EndpointSingularity::lower);
      auto hi = integrate(f, m, b, spec, EndpointSingularity::upper);
      return {lo.value + hi.value, lo.err_estimate + hi.err_estimate};
    }
  }
  return {};
}

/// Integral of f over [a, inf) through x = a + scale * t / (1 - t).
template <class F>
QuadResult integrate_semi_infinite(F&& f, double a, const QuadratureSpec& spec,
                                   double scale = 1.0) {
  auto g = [&](double t) {
    const double one_minus = 1.0 - t;
    const double x = a + scale * t / one_minus;
    const double v = f(x);
    return v == 0.0 ? 0.0 : v * scale / (one_minus * one_minus);
  };
  const std::array<double, 2> p{0.0, 1.0};
  return integrate(g, std::span<const double>(p), spec);
}

/// P.V. of the integral of f(x)/(x - pole) over [a, b]. Within
/// min(pv_window, pole - a, b - pole) of the pole the integrand is folded
/// onto t = |x - pole| as (f(pole+t) - f(pole-t))/t; the remainder is a
/// regular integral. Optional breakpoints mark structure inside [a, b].
template <class F>
QuadResult pv_quad(F&& f, double pole, double a, double b,
                   const QuadratureSpec& spec,
                   std::span<const double> breakpoints = {}) {
  spec.validate();
  if (!(a < pole && pole < b))
    throw DomainError("pv_integral: pole must lie strictly inside (a, b)");
  const double w = std::min({spec.pv_window, pole - a, b - pole});

  std::vector<double> tpts{0.0, w};
  for (double bp : breakpoints) {
    const double t = std::abs(bp - pole);
    if (t > 0 && t < w) tpts.push_back(t);
  }
  std::sort(tpts.begin(), tpts.end());
  tpts.erase(std::unique(tpts.begin(), tpts.end()), tpts.end());
  auto folded = [&](double t) { return (f(pole + t) - f(pole - t)) / t; };
  auto near = integrate(folded, std::span<const double>(tpts), spec);

  QuadResult out = near;
  auto add_side = [&](double lo, double hi) {
    if (!(lo < hi)) return;
    std::vector<double> pts{lo, hi};
    for (double bp : breakpoints)
      if (bp > lo && bp < hi) pts.push_back(bp);
    std::sort(pts.begin(), pts.end());
    auto g = [&](double x) { return f(x) / (x - pole); };
    auto r = integrate(g, std::span<const double>(pts), spec);
    out.value += r.value;
    out.err_estimate += r.err_estimate;
  };
  add_side(a, pole - w);
  add_side(pole + w, b);
  return out;
}

template <class F>
double pv_integral(F&& f, double pole, double a, double b,
                   const QuadratureSpec& spec) {
  return pv_quad(f, pole, a, b, spec).value;
}

}  // namespace cavshift::quad
