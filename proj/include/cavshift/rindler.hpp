#pragma once

// Shift of a uniformly accelerated atom on the cavity axis, the purely
// noninertial part Delta - Delta_0, and the relative enhancement.
//
// Per mode, with chi = xi/x and K(w) = 1/(w+1) - 1/(w-1),
//   Delta - Delta_0 = W/(4 pi^2 x^2) P.V. int_0^inf [U(w) - I(w)] K(w) dw,
// where U(w) = (4 alpha/pi) cosh(pi nu) K_{i nu}(chi alpha)^2, nu = alpha w,
// is the Unruh-mode density and I(w) = 2 Theta(w - chi)/sqrt(w^2 - chi^2)
// the inertial one. For nu >> 1 U is an Airy function squared: it dies
// exponentially below the turning point w = chi and oscillates about I
// above it. The integral is split at a point b past the turning point:
// [0, b] is done by direct quadrature, the rest from the Airy modulus and
// phase expansions, its oscillatory part on a vertical contour.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "cavshift/error.hpp"
#include "cavshift/inertial.hpp"
#include "cavshift/oscillatory.hpp"
#include "cavshift/quadrature.hpp"
#include "cavshift/specfun.hpp"

namespace cavshift {

struct AccelSpec {
  /// omega_0 / a; +inf is the inertial atom.
  double alpha = std::numeric_limits<double>::infinity();

  void validate() const {
    if (!(alpha > 0)) throw DomainError("AccelSpec: alpha must be positive");
  }
  bool inertial() const { return std::isinf(alpha); }
};

struct EnhancementPoint {
  double epsilon = 0.0;  ///< R omega_0 - xi_01
  double alpha = 0.0;
  double F = 0.0;
  double delta = 0.0;
  double delta0 = 0.0;
};

/// Order below which K_{i nu} comes from the integral oracle rather than
/// the uniform expansion.
inline constexpr double kUniformSwitch = 10.0;

/// U(w) above. With scaled set, cosh(pi nu) K^2 is assembled from
/// e^{pi nu/2} K_{i nu} so nothing overflows at any alpha; otherwise the
/// literal product of oracle values is formed (nu up to ~200).
inline double unruh_density(double varpi, double alpha, double chi, bool scaled = true) {
  if (!(varpi > 0) || !(alpha > 0) || !(chi > 0))
    throw DomainError("unruh_density: arguments must be positive");
  const double nu = alpha * varpi;
  const double z = chi * alpha;
  if (!scaled) {
    if (nu > 220.0) throw DomainError("unruh_density: unscaled form overflows");
    const double k = specfun::bessel_k_imag_order_oracle(nu, z);
    return 4.0 * alpha / std::numbers::pi * std::cosh(std::numbers::pi * nu) * k * k;
  }
  const double damp = 1.0 + std::exp(-2.0 * std::numbers::pi * nu);
  if (nu < kUniformSwitch) {
    // e^{pi nu/2} K_{i nu}(z) <= e^{pi nu/2 - z} sqrt(pi/2z)
    if (z - 0.5 * std::numbers::pi * nu > 40.0) return 0.0;
    const double ks = specfun::bessel_k_imag_order_oracle_scaled(nu, z);
    return 2.0 * alpha / std::numbers::pi * damp * ks * ks;
  }
  const double a = specfun::uniform_airy_factor(nu, chi / varpi);
  return 4.0 * std::numbers::pi / varpi * damp * a * a;
}

/// U(w) - I(w): the integrand of the purely noninertial shift, before the
/// pole factor.
inline double noninertial_integrand(double varpi, double alpha, double chi,
                                    bool scaled = true) {
  if (varpi == chi)
    throw DomainError("noninertial_integrand: w = chi is the inertial threshold");
  const double u = unruh_density(varpi, alpha, chi, scaled);
  if (varpi < chi) return u;
  return u - 2.0 / std::sqrt((varpi - chi) * (varpi + chi));
}

namespace detail {

/// acosh(w/chi) as 2 asinh(sqrt((w - chi)/(2 chi))): w - chi is exact near
/// the threshold, whereas rounding w/chi would be amplified by 1/sqrt(w/chi - 1).
template <class T>
T acosh_ratio(T w, double chi) {
  const T z = std::sqrt((w - chi) / (2.0 * chi));
  if (std::abs(z) >= 0.1) return 2.0 * std::asinh(z);
  // Maclaurin series: the library's complex asinh goes through log(1 + z)
  // and loses eps/|z| relative.
  const T z2 = z * z;
  T term = z, sum = z;
  for (int n = 0; n < 12; ++n) {
    term *= -z2 * double((2 * n + 1) * (2 * n + 1)) / double((2 * n + 2) * (2 * n + 3));
    sum += term;
  }
  return 2.0 * sum;
}

/// Airy phase (2/3) zeta^{3/2} = alpha (w acosh(w/chi) - sqrt(w^2 - chi^2)),
/// real or complex w with Re w > chi.
template <class T>
T airy_phase(T w, double alpha, double chi) {
  // With y = acosh(w/chi): w acosh(w/chi) - sqrt(w^2 - chi^2) = chi (y cosh y - sinh y)
  // = chi sum_{k>=1} 2k y^{2k+1}/(2k+1)!, summed directly near the threshold
  // where the two terms cancel.
  const T y = acosh_ratio(w, chi);
  if (std::abs(y) >= 0.5) return alpha * chi * (y * std::cosh(y) - std::sinh(y));
  const T y2 = y * y;
  T pw = y * y2 / 6.0;  // y^{2k+1}/(2k+1)! at k = 1
  T sum = 2.0 * pw;
  for (int k = 2; k < 14; ++k) {
    pw *= y2 / double((2 * k) * (2 * k + 1));
    sum += double(2 * k) * pw;
  }
  return alpha * chi * sum;
}

/// Pieces of the tail expansion of U: U = ic * sm * (1 + cos(two_theta)).
template <class T>
struct TailTerms {
  T ic, sm, two_theta;
};

template <class T>
TailTerms<T> tail_terms(T w, double alpha, double chi) {
  const T sq = std::sqrt(w - chi) * std::sqrt(w + chi);
  const T th = airy_phase(w, alpha, chi);
  const T q = 1.0 / (2.25 * th * th);
  const T sm = 1.0 + q * (5.0 / 32.0 + q * (1155.0 / 2048.0));
  const T ph = 1.0 + q * (5.0 / 32.0 + q * (1105.0 / 6144.0 + q * (82825.0 / 65536.0)));
  return {2.0 / sq, sm, 2.0 * th * ph - std::numbers::pi / 2};
}

inline double pole_factor(double w) { return -2.0 / (w + 1.0); }  // K(w) (w - 1)

struct ModeDifference {
  double value = 0.0;
  double err = 0.0;
};

/// P.V. int_0^inf (U - I) K dw for one mode.
inline ModeDifference unruh_mode_difference(double alpha, double chi,
                                            const quad::QuadratureSpec& spec) {
  if (std::abs(chi - 1.0) < 1e-9)
    throw DegenerateError("unruh_mode_difference: threshold coincides with the pole");
  constexpr double kNearPhase = 60.0;
  const double airy_scale = chi * std::pow(alpha * chi, -2.0 / 3.0);

  // b0: where the Airy phase reaches kNearPhase.
  auto phase = [&](double w) { return airy_phase(w, alpha, chi); };
  double lo = chi, hi = chi * 2.0;
  while (phase(hi) < kNearPhase) hi = chi + 2.0 * (hi - chi);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (phase(mid) < kNearPhase ? lo : hi) = mid;
  }
  const double b0 = hi;
  const double d = b0 - chi;
  double b = b0;
  if (1.0 < b0 + d) b = std::max(b0, 1.0 + d);
  const bool pole_near = 1.0 < b;

  std::vector<double> bps;
  for (int k = 0; k <= 6; ++k) {
    const double off = airy_scale * std::ldexp(1.0, k);
    if (chi - off > 0) bps.push_back(chi - off);
    if (chi + off < b) bps.push_back(chi + off);
  }
  if (chi < b) bps.push_back(chi);
  for (double level : {2.0, 5.0, 10.0, 20.0, 40.0, 80.0, 160.0}) {
    double l = chi, h = b;
    if (phase(h) <= level) break;
    for (int i = 0; i < 100 && h - l > 1e-15 * h; ++i) {
      const double mid = 0.5 * (l + h);
      (phase(mid) < level ? l : h) = mid;
    }
    bps.push_back(h);
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

  quad::QuadratureSpec local = spec;
  local.pv_window = std::min(spec.pv_window, 0.5 * airy_scale);
  local.max_subdivisions = std::max(spec.max_subdivisions, 50'000);

  ModeDifference out;
  auto add = [&](const quad::QuadResult& r, double sign = 1.0) {
    out.value += sign * r.value;
    out.err += r.err_estimate;
  };

  // Near region, Unruh part. The point w = chi is a regular point of U.
  auto u_at = [&](double w) { return unruh_density(w, alpha, chi); };
  if (pole_near) {
    auto f = [&](double w) { return u_at(w) * pole_factor(w); };
    add(quad::pv_quad(f, 1.0, 0.0, b, local, std::span<const double>(bps)));
  } else {
    auto f = [&](double w) { return u_at(w) * pole_factor(w) / (w - 1.0); };
    std::vector<double> pts{0.0};
    for (double p : bps)
      if (p > 0 && p < b) pts.push_back(p);
    pts.push_back(b);
    add(quad::integrate(f, std::span<const double>(pts), local));
  }
  // Near region, inertial part.
  add(inertial_pv_u(chi, acosh_ratio(b, chi), local), -2.0);

  // Tail, smooth part: I (S_M - 1) K.
  auto smooth = [&](double w) {
    const auto t = tail_terms(w, alpha, chi);
    return t.ic * (t.sm - 1.0) * pole_factor(w);
  };
  if (!pole_near) {
    const double c = std::max(3.0, 2.0 * b);
    add(quad::pv_quad(smooth, 1.0, b, c, local));
    add(quad::integrate_semi_infinite(
        [&](double w) { return smooth(w) / (w - 1.0); }, c, local, c));
  } else {
    add(quad::integrate_semi_infinite(
        [&](double w) { return smooth(w) / (w - 1.0); }, b, local, b));
  }

  // Tail, oscillatory part: Re P.V. int_b^inf I S_M K e^{i two_theta} dw
  // on w = b + i s, where e^{i two_theta} decays like e^{-2 alpha acosh(b/chi) s}.
  using C = std::complex<double>;
  auto osc = [&](double s) {
    const C w(b, s);
    const auto t = tail_terms(w, alpha, chi);
    const C k = 1.0 / (w + 1.0) - 1.0 / (w - 1.0);
    const C e = std::exp(C(0.0, 1.0) * t.two_theta);
    return -(t.ic * t.sm * k * e).imag();
  };
  const double decay = 1.0 / (2.0 * alpha * acosh_ratio(b, chi));
  quad::QuadratureSpec osc_spec = local;
  osc_spec.abs_tol = std::max(1e-300, spec.abs_tol * 1e-3);
  add(quad::integrate_semi_infinite(osc, 0.0, osc_spec, decay));
  if (!pole_near) {
    const auto t = tail_terms(1.0, alpha, chi);
    out.value += std::numbers::pi * t.ic * t.sm * std::sin(t.two_theta);
  }
  return out;
}

}  // namespace detail

/// Delta - Delta_0 from the Unruh-mode principal-value representation.
inline ShiftResult delta_minus_delta0(const CavitySpec& cavity, const AccelSpec& accel,
                                      const quad::QuadratureSpec& spec = {}) {
  cavity.validate();
  accel.validate();
  spec.validate();
  if (cavity.rho_frac != 0.0)
    throw DomainError("delta_minus_delta0: only on-axis atoms are supported");
  ShiftResult out;
  out.method = Method::pv_unruh;
  const auto modes = coupled_modes(cavity);
  check_resonance(cavity, modes);
  const double x = cavity.detuning_x;
  for (const auto& md : modes) {
    double v = 0.0, e = 0.0;
    if (!accel.inertial()) {
      const auto r = detail::unruh_mode_difference(accel.alpha, md.xi / x, spec);
      const double pref = mode_weight(md, 0.0) / (4.0 * std::numbers::pi * std::numbers::pi * x * x);
      v = pref * r.value;
      e = pref * r.err;
    }
    out.per_mode_terms.push_back({md, v});
    out.value += v;
    out.err_estimate += e;
  }
  if (!out.per_mode_terms.empty() &&
      std::abs(out.per_mode_terms.back().value) > spec.rel_tol * std::abs(out.value))
    out.notes.push_back("mode sum not converged at n_max");
  return out;
}

/// Delta = Delta_0 + (Delta - Delta_0).
inline ShiftResult delta_total(const CavitySpec& cavity, const AccelSpec& accel,
                               const quad::QuadratureSpec& spec = {}) {
  auto base = delta0(cavity);
  if (accel.inertial()) return base;
  auto diff = delta_minus_delta0(cavity, accel, spec);
  for (std::size_t i = 0; i < diff.per_mode_terms.size(); ++i)
    diff.per_mode_terms[i].value += base.per_mode_terms[i].value;
  diff.value += base.value;
  diff.err_estimate += base.err_estimate;
  return diff;
}

/// Delta from the large-alpha double-integral representation: per mode
///   W alpha/(2 pi^2 x^2) D(alpha, chi) + W sqrt(alpha)/(sqrt2 pi x^2) A(alpha, chi) S(alpha, chi),
/// D the oscillatory double integral, A the Airy factor of the uniform
/// expansion and S the single sine integral.
inline ShiftResult delta_lstot2(const CavitySpec& cavity, const AccelSpec& accel,
                                const quad::QuadratureSpec& spec = {}) {
  cavity.validate();
  accel.validate();
  spec.validate();
  if (cavity.rho_frac != 0.0)
    throw DomainError("delta_lstot2: only on-axis atoms are supported");
  if (accel.inertial()) throw DomainError("delta_lstot2: alpha must be finite");
  const double alpha = accel.alpha;
  ShiftResult out;
  out.method = Method::lstot2;
  if (alpha < 1e2) out.notes.push_back("alpha below the asymptotic regime");
  if (alpha > quad::kOscillatoryAlphaMax)
    out.notes.push_back("alpha above the oscillatory quadrature range");
  const auto modes = coupled_modes(cavity);
  check_resonance(cavity, modes);
  const double x = cavity.detuning_x;
  const double pi = std::numbers::pi;
  for (const auto& md : modes) {
    const double chi = md.xi / x;
    const double w = mode_weight(md, 0.0);
    const auto plus = quad::sinh_phase_spiral(alpha, chi, +1, spec);
    const auto minus = quad::sinh_phase_spiral(alpha, chi, -1, spec);
    const double d = plus.area + minus.area;
    const double a = specfun::uniform_airy_factor(alpha, chi);
    const double v = w * alpha / (2.0 * pi * pi * x * x) * d +
                     w * std::sqrt(alpha) / (std::numbers::sqrt2 * pi * x * x) * a *
                         minus.endpoint.imag();
    out.per_mode_terms.push_back({md, v});
    out.value += v;
  }
  out.err_estimate = spec.rel_tol * std::abs(out.value);
  return out;
}

/// F = (Delta - Delta_0)/Delta_0 at one detuning.
inline EnhancementPoint relative_enhancement(const CavitySpec& cavity, const AccelSpec& accel,
                                             const quad::QuadratureSpec& spec = {}) {
  const auto base = delta0(cavity);
  if (std::abs(base.value) < 1e-14)
    throw DegenerateError("relative_enhancement: Delta_0 vanishes at this detuning");
  EnhancementPoint p;
  p.epsilon = cavity.detuning_x - specfun::bessel_j_zero(0, 1);
  p.alpha = accel.alpha;
  p.delta0 = base.value;
  const double diff = accel.inertial() ? 0.0 : delta_minus_delta0(cavity, accel, spec).value;
  p.delta = base.value + diff;
  p.F = diff / base.value;
  return p;
}

}  // namespace cavshift
