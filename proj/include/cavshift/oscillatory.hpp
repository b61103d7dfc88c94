#pragma once

// The alpha >> 1 double integral over (varpi, kappa) and the related
// single-kappa integrals, evaluated in logarithmic variables.
//
// With u = ln kappa, v = ln varpi the double integral becomes
//   D = int dv int_v^0 du sin(alpha (u - v)) cos(chi alpha (sinh v - sinh u)).
// Splitting the cosine into exponentials and using the symmetry
// (u, v) -> (-u, -v), D = A_+ + A_- where, for psi_s(w) = alpha (w + s chi sinh w)
// and H_s(w) = int_0^w exp(i psi_s),
//   A_s = int_0^inf Im(conj(H_s) H_s') dw
// is the signed area swept by the spiral H_s. It is accumulated on panels a
// fraction of a local period wide, and the tail beyond the last panel is
// added from the integration-by-parts expansion of H_s.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "cavshift/error.hpp"
#include "cavshift/quadrature.hpp"

namespace cavshift::quad {

/// Above this alpha the panel sweep is outside its intended range (the
/// principal-value route is the one to use there).
inline constexpr double kOscillatoryAlphaMax = 1e4;

struct SpiralResult {
  std::complex<double> endpoint;  ///< H(inf) = int_0^inf exp(i psi)
  double area = 0.0;              ///< int_0^inf Im(conj(H) H') dw
};

namespace detail {

struct GaussLegendre8 {
  std::array<double, 8> x{}, w{};  // on [0, 1]
  std::array<std::array<double, 8>, 8> integ{};  // int_0^{x_j} L_k

  GaussLegendre8() {
    constexpr std::array<double, 4> xs = {0.1834346424956498, 0.5255324099163290,
                                          0.7966664774136267, 0.9602898564975363};
    constexpr std::array<double, 4> ws = {0.3626837833783620, 0.3137066458778873,
                                          0.2223810344533745, 0.1012285362903763};
    for (int i = 0; i < 4; ++i) {
      x[3 - i] = 0.5 * (1.0 - xs[i]);
      x[4 + i] = 0.5 * (1.0 + xs[i]);
      w[3 - i] = 0.5 * ws[i];
      w[4 + i] = 0.5 * ws[i];
    }
    auto lagrange = [&](int k, double t) {
      double p = 1.0;
      for (int m = 0; m < 8; ++m)
        if (m != k) p *= (t - x[m]) / (x[k] - x[m]);
      return p;
    };
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k) {
        double s = 0.0;
        for (int l = 0; l < 8; ++l) s += w[l] * lagrange(k, x[j] * x[l]);
        integ[j][k] = x[j] * s;
      }
  }
};

inline const GaussLegendre8& gl8() {
  static const GaussLegendre8 g;
  return g;
}

}  // namespace detail

/// Spiral H(w) = int_0^w exp(i alpha (w' + sign chi sinh w')) and the area it
/// sweeps, for w in [0, inf).
inline SpiralResult sinh_phase_spiral(double alpha, double chi, int sign,
                                      const QuadratureSpec& spec) {
  spec.validate();
  if (!(alpha > 0) || !(chi > 0))
    throw DomainError("sinh_phase_spiral: alpha and chi must be positive");
  const double s = sign >= 0 ? 1.0 : -1.0;
  auto d1 = [&](double w) { return alpha * (1.0 + s * chi * std::cosh(w)); };
  auto d2 = [&](double w) { return alpha * s * chi * std::sinh(w); };
  auto d3 = [&](double w) { return alpha * s * chi * std::cosh(w); };
  auto phase = [&](double w) { return alpha * (w + s * chi * std::sinh(w)); };

  // Stop where |psi'| is large enough for the tail expansion to be exact
  // to double precision relative to the accumulated area.
  const double target = std::max(2e3, 20.0 * alpha);
  const double w_end = std::acosh(std::max(1.0, (target / alpha + 1.0) / chi)) + 0.05;

  const auto& g = detail::gl8();
  const double ppp = spec.osc_panels_per_period;
  const double two_pi = 2.0 * std::numbers::pi;
  std::complex<double> h_acc{0.0, 0.0};
  double area = 0.0, area_c = 0.0;
  double w = 0.0;
  std::array<std::complex<double>, 8> e{};
  while (w < w_end) {
    const double a1 = std::abs(d1(w)), a2 = std::abs(d2(w)), a3 = std::abs(d3(w));
    double h = 0.5;
    if (a1 > 0) h = std::min(h, two_pi / (ppp * a1));
    if (a2 > 0) h = std::min(h, std::sqrt(2.0 * two_pi / (ppp * a2)));
    if (a3 > 0) h = std::min(h, std::cbrt(6.0 * two_pi / (ppp * a3)));
    h = std::min(h, w_end - w);
    for (int j = 0; j < 8; ++j) e[j] = std::polar(1.0, phase(w + h * g.x[j]));
    std::complex<double> panel{0.0, 0.0};
    double local = 0.0;
    for (int j = 0; j < 8; ++j) {
      std::complex<double> delta{0.0, 0.0};
      for (int k = 0; k < 8; ++k) delta += g.integ[j][k] * e[k];
      const std::complex<double> hj = h_acc + h * delta;
      local += g.w[j] * (std::conj(hj) * e[j]).imag();
      panel += g.w[j] * e[j];
    }
    // Neumaier summation keeps the area independent of the panel count.
    const double term = h * local;
    const double t = area + term;
    area_c += std::abs(area) >= std::abs(term) ? (area - t) + term : (term - t) + area;
    area = t;
    h_acc += h * panel;
    w += h;
  }

  // Tail: T(W) = int_W^inf e^{i psi}
  //       ~ e^{i psi} [i/psi' + psi''/psi'^3 - i (3 psi''^2 - psi' psi''')/psi'^5].
  const double p1 = d1(w), p2 = d2(w), p3 = d3(w);
  const double c5 = (3.0 * p2 * p2 - p1 * p3) / std::pow(p1, 5);
  const std::complex<double> tail =
      std::polar(1.0, phase(w)) *
      std::complex<double>(p2 / (p1 * p1 * p1), 1.0 / p1 - c5);
  auto tail_density = [&](double x) {
    if (x > 300.0) return 0.0;  // beyond here the density is below 1e-130
    const double q1 = d1(x), q2 = d2(x), q3 = d3(x);
    return 1.0 / q1 - (3.0 * q2 * q2 - q1 * q3) / std::pow(q1, 5);
  };
  QuadratureSpec tq = spec;
  tq.rel_tol = 1e-12;
  tq.abs_tol = 1e-300;
  const double tail_area = integrate_semi_infinite(tail_density, w, tq).value;

  SpiralResult out;
  out.endpoint = h_acc + tail;
  out.area = (area + area_c) + (std::conj(h_acc) * tail).imag() + tail_area;
  return out;
}

/// int_0^inf (dvarpi/varpi) int_varpi^1 (dkappa/kappa) sin(alpha ln(kappa/varpi))
///   cos((chi alpha / 2)(varpi - 1/varpi - kappa + 1/kappa)).
inline double oscillatory_double_integral(double alpha, double chi,
                                          const QuadratureSpec& spec) {
  if (!(alpha >= 1.0))
    throw DomainError("oscillatory_double_integral: alpha must be >= 1");
  if (!(chi > 0.0))
    throw DomainError("oscillatory_double_integral: chi must be positive");
  return sinh_phase_spiral(alpha, chi, +1, spec).area +
         sinh_phase_spiral(alpha, chi, -1, spec).area;
}

/// int_1^inf (dkappa/kappa) sin(alpha ln kappa + sign (chi alpha/2)(kappa - 1/kappa)).
inline double log_sinh_sine_integral(double alpha, double chi, int sign,
                                     const QuadratureSpec& spec) {
  return sinh_phase_spiral(alpha, chi, sign, spec).endpoint.imag();
}

}  // namespace cavshift::quad
