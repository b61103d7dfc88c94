#pragma once

// Special functions used by the shift formulas: integer-order Bessel J and
// its zeros, the Airy function Ai, the turning-point coefficients and the
// modified Bessel function K of imaginary order.

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "cavshift/error.hpp"
#include "cavshift/quadrature.hpp"

namespace cavshift::specfun {

inline constexpr int kMaxBesselOrder = 200;

/// A transverse cavity mode: azimuthal order m, radial index n >= 1 and the
/// n-th positive zero xi of J_m.
struct ModeIndex {
  int m = 0;
  int n = 1;
  double xi = 0.0;
};

inline double bessel_j(int m, double x) {
  if (!(x >= 0.0)) throw DomainError("bessel_j: x must be nonnegative");
  if (std::abs(m) > kMaxBesselOrder)
    throw DomainError("bessel_j: |m| > " + std::to_string(kMaxBesselOrder));
  const double v = boost::math::cyl_bessel_j(static_cast<double>(std::abs(m)), x);
  return (m < 0 && (std::abs(m) % 2 == 1)) ? -v : v;
}

namespace detail {

// Root of J_m in (lo, hi) with J_m(lo), J_m(hi) of opposite sign.
// Newton steps are kept only while they stay inside the shrinking bracket.
inline double refine_zero(int m, double lo, double hi) {
  double flo = bessel_j(m, lo);
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = bessel_j(m, x);
    if (fx == 0.0) return x;
    if ((fx < 0) == (flo < 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    const double dfx =
        (m == 0) ? -bessel_j(1, x) : bessel_j(m - 1, x) - m / x * fx;
    double next = x - fx / dfx;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4e-16 * x || hi - lo <= 4e-16 * x) return next;
    x = next;
  }
  return x;
}

// McMahon's large-zero expansion for J_0.
inline double mcmahon_j0(int n) {
  const double b = (n - 0.25) * std::numbers::pi;
  const double b8 = 8.0 * b;
  return b + 1.0 / b8 - 124.0 / (3.0 * b8 * b8 * b8) +
         120928.0 / (15.0 * std::pow(b8, 5));
}

/// Zeros of J_m, computed lazily order by order. Zeros of order m are
/// bracketed by consecutive zeros of order m-1 (interlacing), which makes
/// every bracket contain exactly one root.
class ZeroTable {
 public:
  double get(int m, int n) {
    {
      std::shared_lock lock(mu_);
      if (m < static_cast<int>(zeros_.size()) &&
          n <= static_cast<int>(zeros_[m].size()))
        return zeros_[m][n - 1];
    }
    std::unique_lock lock(mu_);
    ensure(m, n);
    return zeros_[m][n - 1];
  }

 private:
  void ensure(int m, int n) {
    if (zeros_.size() <= static_cast<std::size_t>(m)) zeros_.resize(m + 1);
    auto& row = zeros_[m];
    if (static_cast<int>(row.size()) >= n) return;
    if (m == 0) {
      for (int k = static_cast<int>(row.size()) + 1; k <= n; ++k) {
        const double g = mcmahon_j0(k);
        row.push_back(refine_zero(0, g - 1.0, g + 1.0));
      }
      return;
    }
    ensure(m - 1, n + 1);
    const auto& prev = zeros_[m - 1];
    for (int k = static_cast<int>(row.size()) + 1; k <= n; ++k)
      row.push_back(refine_zero(m, prev[k - 1], prev[k]));
  }

  std::shared_mutex mu_;
  std::vector<std::vector<double>> zeros_;
};

inline ZeroTable& zero_table() {
  static ZeroTable table;
  return table;
}

}  // namespace detail

/// n-th positive zero of J_m. Safe to call concurrently.
inline double bessel_j_zero(int m, int n) {
  if (n < 1) throw DomainError("bessel_j_zero: n must be >= 1");
  if (std::abs(m) > kMaxBesselOrder)
    throw DomainError("bessel_j_zero: |m| > " + std::to_string(kMaxBesselOrder));
  return detail::zero_table().get(std::abs(m), n);
}

inline ModeIndex mode(int m, int n) { return {m, n, bessel_j_zero(m, n)}; }

// ---------------------------------------------------------------------------
// Airy function
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr double kAi0 = 0.355028053887817239260063186004183;
inline constexpr double kAip0 = -0.258819403792806798405183560189203;

// Coefficients u_k of the large-argument Airy expansions.
inline const std::array<double, 40>& airy_u() {
  static const std::array<double, 40> u = [] {
    std::array<double, 40> c{};
    c[0] = 1.0;
    for (int k = 1; k < 40; ++k)
      c[k] = c[k - 1] * (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) /
             ((2.0 * k - 1) * 216.0 * k);
    return c;
  }();
  return u;
}

// Ai and Ai' for x >= 8 by the exponentially decaying expansion, as the
// pair (Ai e^{zeta}, Ai' e^{zeta}) so that callers may rescale.
inline std::pair<double, double> airy_pos_asym_scaled(double x) {
  const auto& u = airy_u();
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  double sa = 0.0, sd = 0.0, term_a = 1.0, prev = INFINITY;
  for (int k = 0; k < 40; ++k) {
    const double pk = std::pow(-1.0 / zeta, k);
    const double ta = u[k] * pk;
    const double vk = k == 0 ? 1.0 : -(6.0 * k + 1) / (6.0 * k - 1) * u[k];
    if (std::abs(ta) > prev) break;
    prev = std::abs(ta);
    sa += ta;
    sd += vk * pk;
    term_a = ta;
    if (std::abs(term_a) < 1e-18) break;
  }
  const double x4 = std::pow(x, 0.25);
  const double c = 0.5 / std::sqrt(std::numbers::pi);
  return {c / x4 * sa, -c * x4 * sd};
}

inline double airy_neg_asym(double x) {
  const auto& u = airy_u();
  const double z = -x;
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  double even = 0.0, odd = 0.0, prev = INFINITY;
  for (int k = 0; 2 * k + 1 < 40; ++k) {
    const double te = u[2 * k] / std::pow(zeta, 2 * k);
    const double to = u[2 * k + 1] / std::pow(zeta, 2 * k + 1);
    if (te > prev) break;
    prev = to;
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    even += sgn * te;
    odd += sgn * to;
    if (to < 1e-18) break;
  }
  const double ph = zeta - std::numbers::pi / 4;
  return (std::cos(ph) * even + std::sin(ph) * odd) /
         (std::sqrt(std::numbers::pi) * std::pow(z, 0.25));
}

// Local Taylor expansion of the Airy equation y'' = x y about x0.
inline std::pair<double, double> airy_taylor(double x0, double y, double dy,
                                             double h) {
  double a_km1 = 0.0, a_k = y, a_kp1 = dy;  // a_{k-1}, a_k, a_{k+1}
  double val = y + dy * h, der = dy;
  double hk = h;  // h^k for k = 1
  int small = 0;
  for (int k = 0; k < 80; ++k) {
    const double a_kp2 = (x0 * a_k + a_km1) / ((k + 2.0) * (k + 1.0));
    const double hk1 = hk * h;  // h^{k+2}
    const double tv = a_kp2 * hk1;
    const double td = (k + 2.0) * a_kp2 * hk;
    val += tv;
    der += td;
    a_km1 = a_k;
    a_k = a_kp1;
    a_kp1 = a_kp2;
    hk = hk1;
    // Coefficients can vanish individually (every third one at x0 = 0),
    // so stop only after three negligible terms in a row.
    const bool negligible = std::abs(tv) <= 1e-18 * std::abs(val) &&
                            std::abs(td) <= 1e-18 * (std::abs(der) + std::abs(val));
    small = negligible ? small + 1 : 0;
    if (small == 3) break;
  }
  return {val, der};
}

inline constexpr double kAiryTableLo = -20.0;
inline constexpr double kAiryTableHi = 12.0;
inline constexpr double kAiryStep = 0.5;
inline constexpr int kAiryNodes = 65;

struct AiryTable {
  std::array<double, kAiryNodes> ai{}, dai{};
};

// Nodes on the negative axis come from forward stepping from x = 0, where
// both solutions oscillate. Nodes on the positive axis come from stepping
// down from x = 12, where Ai is the growing solution in that direction.
inline const AiryTable& airy_table() {
  static const AiryTable t = [] {
    AiryTable tab;
    const int zero = static_cast<int>(-kAiryTableLo / kAiryStep);
    tab.ai[zero] = kAi0;
    tab.dai[zero] = kAip0;
    for (int i = zero; i > 0; --i) {
      const double x0 = kAiryTableLo + i * kAiryStep;
      auto [y, d] = airy_taylor(x0, tab.ai[i], tab.dai[i], -kAiryStep);
      tab.ai[i - 1] = y;
      tab.dai[i - 1] = d;
    }
    auto [sa, sd] = airy_pos_asym_scaled(kAiryTableHi);
    const double e = std::exp(-2.0 / 3.0 * kAiryTableHi * std::sqrt(kAiryTableHi));
    tab.ai[kAiryNodes - 1] = sa * e;
    tab.dai[kAiryNodes - 1] = sd * e;
    for (int i = kAiryNodes - 1; i > zero + 1; --i) {
      const double x0 = kAiryTableLo + i * kAiryStep;
      auto [y, d] = airy_taylor(x0, tab.ai[i], tab.dai[i], -kAiryStep);
      tab.ai[i - 1] = y;
      tab.dai[i - 1] = d;
    }
    return tab;
  }();
  return t;
}

}  // namespace detail

/// Airy function Ai(x). Beyond x ~ 104 the result underflows to zero.
inline double airy_ai(double x) {
  if (std::isnan(x)) throw DomainError("airy_ai: NaN argument");
  if (x >= detail::kAiryTableHi) {
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    if (zeta > 745.0) return 0.0;
    return detail::airy_pos_asym_scaled(x).first * std::exp(-zeta);
  }
  if (x < detail::kAiryTableLo) return detail::airy_neg_asym(x);
  const auto& tab = detail::airy_table();
  int i = static_cast<int>(
      std::lround((x - detail::kAiryTableLo) / detail::kAiryStep));
  i = std::clamp(i, 0, detail::kAiryNodes - 1);
  const double x0 = detail::kAiryTableLo + i * detail::kAiryStep;
  return detail::airy_taylor(x0, tab.ai[i], tab.dai[i], x - x0).first;
}

// ---------------------------------------------------------------------------
// Turning-point coefficients
// ---------------------------------------------------------------------------

struct BetaCoefficients {
  std::optional<double> beta_less;     // defined for 0 < x <= 1
  std::optional<double> beta_greater;  // defined for x >= 1
};

namespace detail {

// beta / s^3 for x = sqrt(1 - s^2) < 1, and beta / r^3 for x = sqrt(1 + r^2).
// Both tend to 1/2 at the turning point; the series avoid 0/0 there.
inline double beta_ratio_below(double s) {
  if (s < 0.1) {
    double sum = 0.0, p = 1.0;
    for (int k = 1; k < 12; ++k, p *= s * s) sum += p / (2.0 * k + 1);
    return 1.5 * sum;
  }
  return 1.5 * (std::atanh(s) - s) / (s * s * s);
}

inline double beta_ratio_above(double r) {
  if (r < 0.1) {
    double sum = 0.0, p = 1.0;
    for (int k = 1; k < 12; ++k, p *= -r * r) sum += p / (2.0 * k + 1);
    return 1.5 * sum;
  }
  return 1.5 * (r - std::atan(r)) / (r * r * r);
}

}  // namespace detail

inline double beta_less(double x) {
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("beta_less: need 0 < x <= 1");
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  return detail::beta_ratio_below(s) * s * s * s;
}

inline double beta_greater(double x) {
  if (!(x >= 1.0)) throw DomainError("beta_greater: need x >= 1");
  const double r = std::sqrt((x - 1.0) * (x + 1.0));
  return detail::beta_ratio_above(r) * r * r * r;
}

inline BetaCoefficients beta_coefficients(double x) {
  if (!(x > 0.0)) throw DomainError("beta_coefficients: need x > 0");
  BetaCoefficients out;
  if (x <= 1.0) out.beta_less = beta_less(x);
  if (x >= 1.0) out.beta_greater = beta_greater(x);
  return out;
}

// ---------------------------------------------------------------------------
// K_{i nu}(z)
// ---------------------------------------------------------------------------

/// e^{pi nu / 2} K_{i nu}(z) from K_{i nu}(z) = Re int_0^inf e^{i nu t - z cosh t} dt.
/// The contour is moved to Im t = c (the vertical leg contributes only to
/// the imaginary part), with c at the saddle height for nu < z and just
/// below pi/2 otherwise, so that the integrand never exceeds the result by
/// more than a factor of order e.
inline double bessel_k_imag_order_oracle_scaled(double nu, double z,
                                                const quad::QuadratureSpec& spec = {
                                                    1e-11, 1e-300, 1e-3, 50.0, 20'000, 8}) {
  if (!(z > 0.0)) throw DomainError("K_{i nu}(z) oracle: z must be positive");
  if (!(nu >= 0.0)) throw DomainError("K_{i nu}(z) oracle: nu must be >= 0");
  const double half_pi = std::numbers::pi / 2;
  double c = std::asin(std::min(1.0, nu / z));
  c = std::min(c, half_pi - 1.0 / (1.0 + nu));
  const double sc = std::sin(c), cc = std::cos(c);
  const double lead = nu * (half_pi - c);
  auto integrand = [&](double s) {
    const double mag = lead - z * cc * std::cosh(s);
    if (mag < -745.0) return 0.0;
    return std::exp(mag) * std::cos(nu * s - z * sc * std::sinh(s));
  };
  const double peak = std::exp(std::min(lead - z * cc, 700.0));
  const double s_max = std::acosh(1.0 + 60.0 / (z * cc)) + 1.0;
  quad::QuadratureSpec q = spec;
  // Near a zero in nu the result is a cancellation between O(peak) lobes;
  // ask for absolute accuracy there, at the level rounding allows.
  q.abs_tol = std::max(spec.abs_tol, 1e-13 * peak * s_max);
  // Break the range once per radian of phase so the first pass samples
  // every oscillation.
  std::vector<double> pts{0.0};
  const double total_phase = nu * s_max + z * sc * std::sinh(s_max);
  const int pieces = std::clamp(static_cast<int>(total_phase / 3.0), 1, 4000);
  for (int i = 1; i <= pieces; ++i) pts.push_back(s_max * i / pieces);
  return quad::integrate(integrand, std::span<const double>(pts), q).value;
}

inline double bessel_k_imag_order_oracle(double nu, double z) {
  const double scaled = bessel_k_imag_order_oracle_scaled(nu, z);
  return scaled * std::exp(-std::numbers::pi * nu / 2);
}

/// How the uniform expansion is evaluated exactly at the turning point x = 1.
enum class TurningPoint {
  limit,    ///< the common limit of the x<1 and x>1 branches, 2^{-1/6} nu^{1/6} Ai(0)
  literal,  ///< nu^{1/6} / (3^{2/3} Gamma(2/3)), 2^{1/6} times the limit
};

/// Bracketed Airy factor of the uniform expansion,
/// (beta nu)^{1/6} |1 - x^2|^{-1/4} Ai(-/+ (beta nu)^{2/3}).
inline double uniform_airy_factor(double nu, double x,
                                  TurningPoint tp = TurningPoint::limit) {
  if (!(x > 0.0)) throw DomainError("uniform expansion: x must be positive");
  if (!(nu > 0.0)) throw DomainError("uniform expansion: nu must be positive");
  const double nu16 = std::cbrt(std::sqrt(nu));
  const double nu23 = std::cbrt(nu * nu);
  if (x == 1.0) {
    const double c = tp == TurningPoint::limit ? std::pow(2.0, -1.0 / 6.0) : 1.0;
    return c * nu16 * detail::kAi0;
  }
  if (x < 1.0) {
    const double s = std::sqrt((1.0 - x) * (1.0 + x));
    const double q = detail::beta_ratio_below(s);
    return nu16 * std::pow(q, 1.0 / 6.0) * airy_ai(-nu23 * std::cbrt(q * q) * s * s);
  }
  const double r = std::sqrt((x - 1.0) * (x + 1.0));
  const double q = detail::beta_ratio_above(r);
  return nu16 * std::pow(q, 1.0 / 6.0) * airy_ai(nu23 * std::cbrt(q * q) * r * r);
}

/// e^{pi nu / 2} K_{i nu}(x nu) from the leading uniform (Airy) expansion.
inline double bessel_k_imag_order_uniform_scaled(double nu, double x,
                                                 TurningPoint tp = TurningPoint::limit) {
  return std::numbers::pi * std::sqrt(2.0 / nu) * uniform_airy_factor(nu, x, tp);
}

/// Leading uniform expansion of K_{i nu}(x nu) for nu >> 1. Underflows to
/// zero once pi nu / 2 exceeds the double range; use the scaled form there.
inline double bessel_k_imag_order_uniform(double nu, double x,
                                          TurningPoint tp = TurningPoint::limit) {
  return bessel_k_imag_order_uniform_scaled(nu, x, tp) *
         std::exp(-std::numbers::pi * nu / 2);
}

}  // namespace cavshift::specfun
