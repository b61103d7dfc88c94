#pragma once

// Radiative shift of an inertial atom on (or off) the axis of a cylindrical
// cavity. All shifts are dimensionless, in units of g^2 omega_0.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "cavshift/error.hpp"
#include "cavshift/quadrature.hpp"
#include "cavshift/specfun.hpp"

namespace cavshift {

struct CavitySpec {
  double detuning_x = 3.0;  ///< R omega_0
  double rho_frac = 0.0;    ///< rho_0 / R
  int m_max = 0;
  int n_max = 128;

  void validate() const {
    if (!(detuning_x > 0)) throw DomainError("CavitySpec: detuning_x must be positive");
    if (!(rho_frac >= 0 && rho_frac < 1))
      throw DomainError("CavitySpec: rho_frac must lie in [0, 1)");
    if (m_max < 0 || m_max > specfun::kMaxBesselOrder)
      throw DomainError("CavitySpec: m_max out of range");
    if (n_max < 1) throw DomainError("CavitySpec: n_max must be >= 1");
  }

  /// Azimuthal cutoff actually summed: only m = 0 survives on the axis.
  int effective_m_max() const { return rho_frac == 0.0 ? 0 : m_max; }
};

enum class Method { closed_form, pv_quadrature, lstot2, pv_unruh };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::pv_quadrature: return "pv_quadrature";
    case Method::lstot2: return "lstot2";
    case Method::pv_unruh: return "pv_unruh";
  }
  return "?";
}

struct ModeTerm {
  specfun::ModeIndex mode;
  double value = 0.0;
};

struct ShiftResult {
  double value = 0.0;
  std::vector<ModeTerm> per_mode_terms;
  double err_estimate = 0.0;
  Method method = Method::closed_form;
  std::vector<std::string> notes;  ///< non-fatal warnings
};

/// J_m^2(xi rho) / J_{|m|+1}^2(xi): the squared, normalised mode amplitude
/// at the atom.
inline double mode_weight(const specfun::ModeIndex& md, double rho_frac) {
  const double num = specfun::bessel_j(md.m, md.xi * rho_frac);
  const double den = specfun::bessel_j(std::abs(md.m) + 1, md.xi);
  return num * num / (den * den);
}

/// Modes in summation order (ascending n, then m), skipping those that do
/// not couple to the atom.
inline std::vector<specfun::ModeIndex> coupled_modes(const CavitySpec& c) {
  std::vector<specfun::ModeIndex> out;
  const int mm = c.effective_m_max();
  for (int n = 1; n <= c.n_max; ++n)
    for (int m = -mm; m <= mm; ++m) {
      if (c.rho_frac == 0.0 && m != 0) continue;
      out.push_back(specfun::mode(m, n));
    }
  return out;
}

inline void check_resonance(const CavitySpec& c,
                            const std::vector<specfun::ModeIndex>& modes) {
  for (const auto& md : modes)
    if (std::abs(c.detuning_x - md.xi) < 1e-12)
      throw ResonanceError("detuning sits on the resonance xi_" +
                               std::to_string(md.m) + std::to_string(md.n),
                           md.m, md.n);
}

/// t(y) = (arctan(sqrt(1-y^2)/y) - pi/2)/sqrt(1-y^2) for y < 1,
///        ln(y + sqrt(y^2-1))/sqrt(y^2-1) for y > 1, and 1 at y = 1.
inline double inertial_term(double y) {
  if (!(y > 0.0)) throw DomainError("inertial_term: argument must be positive");
  if (y == 1.0) return 1.0;
  if (y < 1.0) {
    const double s = std::sqrt((1.0 - y) * (1.0 + y));
    // arctan(s/y) - pi/2 = -arctan(y/s)
    return -std::atan2(y, s) / s;
  }
  const double r = std::sqrt((y - 1.0) * (y + 1.0));
  if (r < 1e-4) {
    // acosh(y)/r = asinh(r)/r
    const double r2 = r * r;
    return 1.0 - r2 / 6.0 + 3.0 * r2 * r2 / 40.0;
  }
  return std::asinh(r) / r;
}

/// Closed-form inertial shift, summed over the coupled modes.
inline ShiftResult delta0(const CavitySpec& cavity) {
  cavity.validate();
  const auto modes = coupled_modes(cavity);
  check_resonance(cavity, modes);
  const double x = cavity.detuning_x;
  ShiftResult out;
  out.method = Method::closed_form;
  out.per_mode_terms.reserve(modes.size());
  for (const auto& md : modes) {
    const double w = mode_weight(md, cavity.rho_frac);
    const double v = w * inertial_term(x / md.xi) / (std::numbers::pi * std::numbers::pi * x * md.xi);
    out.per_mode_terms.push_back({md, v});
    out.value += v;
  }
  out.err_estimate = 1e-15 * modes.size() * std::abs(out.value);
  return out;
}

namespace detail {

/// P.V. of int_0^{u_hi} K(chi cosh u) du with K(w) = 1/(w+1) - 1/(w-1)
/// = -2/(w^2 - 1); u_hi may be +inf. This is the inertial density of
/// states 1/sqrt(w^2 - chi^2) against K, after w = chi cosh u.
inline quad::QuadResult inertial_pv_u(double chi, double u_hi,
                                      const quad::QuadratureSpec& spec) {
  quad::QuadResult out;
  auto add = [&](const quad::QuadResult& r) {
    out.value += r.value;
    out.err_estimate += r.err_estimate;
  };
  if (chi > 1.0) {
    // chi cosh u - 1 = (chi - 1) + 2 chi sinh^2(u/2), no cancellation.
    auto h = [chi](double u) {
      const double sh = std::sinh(0.5 * u);
      return -2.0 / (((chi - 1.0) + 2.0 * chi * sh * sh) * (chi * std::cosh(u) + 1.0));
    };
    const double width = std::sqrt((chi - 1.0) / chi);
    std::vector<double> pts{0.0};
    for (double s = width; s < 4.0 && s < u_hi; s *= 4.0) pts.push_back(s);
    const double u_mid = std::min(u_hi, std::max(4.0, pts.back() * 2));
    pts.push_back(u_mid);
    add(quad::integrate(h, std::span<const double>(pts), spec));
    if (std::isinf(u_hi)) add(quad::integrate_semi_infinite(h, u_mid, spec));
    return out;
  }
  const double u0 = std::acosh(1.0 / chi);
  // chi cosh u - 1 = 2 chi sinh((u + u0)/2) sinh((u - u0)/2)
  auto denom = [chi, u0](double u) {
    const double d = u - u0;
    const double hs = std::sinh(0.5 * d);
    return 2.0 * chi * std::sinh(0.5 * (u + u0)) * hs * (chi * std::cosh(u) + 1.0);
  };
  auto h = [&](double u) { return -2.0 / denom(u); };
  auto g = [&](double u) {
    const double d = u - u0;
    // d / sinh(d/2) -> 2 as d -> 0
    const double ratio = std::abs(d) < 1e-8 ? 2.0 : d / std::sinh(0.5 * d);
    return -2.0 * ratio /
           (2.0 * chi * std::sinh(0.5 * (u + u0)) * (chi * std::cosh(u) + 1.0));
  };
  if (u_hi <= u0) {
    add(quad::integrate(h, 0.0, u_hi, spec));
    return out;
  }
  const double u_end = std::min(u_hi, 2.0 * u0 + 4.0);
  add(quad::pv_quad(g, u0, 0.0, u_end, spec));
  if (std::isinf(u_hi)) add(quad::integrate_semi_infinite(h, u_end, spec));
  return out;
}

}  // namespace detail

/// Inertial shift from the principal-value frequency integral, mode by
/// mode. Independent of the closed form; used as its oracle.
inline ShiftResult delta0_pv_oracle(const CavitySpec& cavity,
                                    const quad::QuadratureSpec& spec = {}) {
  cavity.validate();
  spec.validate();
  const auto modes = coupled_modes(cavity);
  check_resonance(cavity, modes);
  const double x = cavity.detuning_x;
  ShiftResult out;
  out.method = Method::pv_quadrature;
  out.per_mode_terms.reserve(modes.size());
  for (const auto& md : modes) {
    const double chi = md.xi / x;
    if (std::abs(chi - 1.0) < 1e-9)
      throw DegenerateError("delta0_pv_oracle: threshold coincides with the pole");
    // The density of states 2 Theta(w - chi)/sqrt(w^2 - chi^2) carries
    // both signs of k_z.
    const auto r = detail::inertial_pv_u(chi, std::numeric_limits<double>::infinity(), spec);
    const double w = mode_weight(md, cavity.rho_frac);
    const double pref = w / (4.0 * std::numbers::pi * std::numbers::pi * x * x);
    const double v = pref * 2.0 * r.value;
    out.per_mode_terms.push_back({md, v});
    out.value += v;
    out.err_estimate += pref * 2.0 * r.err_estimate;
  }
  return out;
}

/// Radial cutoff set by the electron mass: the mode index whose Bessel zero
/// reaches R m_e, given x = R omega_0 and the ratio m_e / omega_0.
inline long long physical_cutoff(double detuning_x, double electron_mass_over_omega0) {
  if (!(detuning_x > 0) || !(electron_mass_over_omega0 > 0))
    throw DomainError("physical_cutoff: arguments must be positive");
  const double n = detuning_x * electron_mass_over_omega0 / std::numbers::pi + 0.25;
  if (n > 9e18) throw DomainError("physical_cutoff: cutoff out of range");
  return std::max(1LL, std::llround(n));
}

/// m_e c^2 / (hbar omega_0) for an atomic gap of `hertz` (omega_0 = 2 pi f).
inline double electron_mass_ratio(double hertz) {
  constexpr double kElectronRestAngular = 7.763440711e20;  // m_e c^2 / hbar, rad/s
  return kElectronRestAngular / (2.0 * std::numbers::pi * hertz);
}

/// On-axis modes n_from < n <= n_to, summed in closed form from their
/// large-n behaviour: xi_0n ~ (n - 1/4) pi, J_1^2(xi_0n) ~ 2/(pi xi_0n), so
/// each term is t(x/xi)/(2 pi x); the sum is replaced by the midpoint
/// integral, whose antiderivative in y = x/xi is
///   (1/2pi^2) (arcsin(y) sqrt(1 - y^2)/y - ln y).
/// Accurate to O(1/n_from^2) relative; intended for n_from >= 64.
inline double delta0_uv_tail(double detuning_x, long long n_from, long long n_to) {
  if (!(detuning_x > 0)) throw DomainError("delta0_uv_tail: x must be positive");
  if (n_to <= n_from) return 0.0;
  auto y_of = [&](double n) { return detuning_x / ((n - 0.25) * std::numbers::pi); };
  const double y1 = y_of(n_from + 0.5), y2 = y_of(n_to + 0.5);
  if (!(y1 < 1.0)) throw DomainError("delta0_uv_tail: n_from below the detuning");
  auto prim = [](double y) {
    return (std::asin(y) * std::sqrt((1.0 - y) * (1.0 + y)) / y - std::log(y)) /
           (2.0 * std::numbers::pi * std::numbers::pi);
  };
  return prim(y1) - prim(y2);
}

}  // namespace cavshift
