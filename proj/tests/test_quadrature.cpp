#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cavshift/oscillatory.hpp"
#include "cavshift/quadrature.hpp"

using namespace cavshift;
using namespace cavshift::quad;

TEST(QuadratureSpec, Validation) {
  QuadratureSpec s;
  EXPECT_NO_THROW(s.validate());
  s.pv_window = 0.5;
  EXPECT_THROW(s.validate(), DomainError);
  s = {};
  s.rel_tol = 0;
  EXPECT_THROW(s.validate(), DomainError);
  s = {};
  s.max_subdivisions = 0;
  EXPECT_THROW(s.validate(), DomainError);
}

TEST(Integrate, Examples) {
  const QuadratureSpec s;
  EXPECT_NEAR(integrate([](double) { return 1.0; }, 0.0, 1.0, s).value, 1.0, 1e-14);
  EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, s).value, 2.0, 1e-12);
  const auto r = integrate([](double w) { return 1.0 / std::sqrt((w - 2.0) * (w + 2.0)); }, 2.0 + 1e-12, 10.0, s,
                           EndpointSingularity::lower);
  EXPECT_NEAR(r.value, 2.2924316696, 1e-6);
  EXPECT_NEAR(integrate([](double w) { return 1.0 / std::sqrt((w - 2.0) * (w + 2.0)); }, 2.0, 10.0, s,
                        EndpointSingularity::lower)
                  .value,
              std::acosh(5.0), 1e-9);
}

TEST(Integrate, Linearity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const QuadratureSpec s;
  for (int i = 0; i < 20; ++i) {
    const double p = u(rng), q = u(rng), a = u(rng), b = u(rng);
    auto f = [&](double x) { return std::exp(p * x) * std::cos(3 * x); };
    auto g = [&](double x) { return 1.0 / (1.0 + q * q + x * x); };
    const double lhs = integrate([&](double x) { return a * f(x) + b * g(x); }, -1.0, 2.0, s).value;
    const double rhs = a * integrate(f, -1.0, 2.0, s).value + b * integrate(g, -1.0, 2.0, s).value;
    EXPECT_NEAR(lhs, rhs, s.rel_tol * (std::abs(lhs) + 1e-3));
  }
}

TEST(Integrate, SemiInfinite) {
  const QuadratureSpec s;
  EXPECT_NEAR(integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0, s).value, 1.0, 1e-12);
  EXPECT_NEAR(integrate_semi_infinite([](double x) { return 1.0 / (x * x); }, 1.0, s).value, 1.0, 1e-10);
}

TEST(Integrate, BudgetExhaustionThrowsWithEstimate) {
  QuadratureSpec s;
  s.max_subdivisions = 3;
  s.rel_tol = 1e-14;
  s.abs_tol = 1e-300;
  try {
    integrate([](double x) { return std::sin(200 * x) / std::sqrt(x + 1e-9); }, 0.0, 10.0, s);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_TRUE(std::isfinite(e.best_estimate()));
    EXPECT_GT(e.err_estimate(), 0.0);
  }
}

TEST(PrincipalValue, Examples) {
  const QuadratureSpec s;
  EXPECT_NEAR(pv_integral([](double) { return 1.0; }, 1.0, 0.0, 2.0, s), 0.0, 1e-10);
  EXPECT_NEAR(pv_integral([](double) { return 1.0; }, 1.0, 0.0, 3.0, s), std::numbers::ln2, 1e-10);
  EXPECT_NEAR(pv_integral([](double w) { return w; }, 1.0, 0.0, 2.0, s), 2.0, 1e-10);
  EXPECT_THROW(pv_integral([](double) { return 1.0; }, 3.0, 0.0, 2.0, s), DomainError);
}

TEST(PrincipalValue, BruteForceSymmetricPairs) {
  // P.V. int_0^3 e^w / (w - 1): symmetric excision with a shrinking gap.
  auto f = [](double w) { return std::exp(w); };
  const QuadratureSpec s;
  const double pv = pv_integral(f, 1.0, 0.0, 3.0, s);
  QuadratureSpec fine = s;
  fine.rel_tol = 1e-12;
  const double d = 1e-7;
  auto g = [&](double w) { return f(w) / (w - 1.0); };
  const double brute = integrate(g, 0.0, 1.0 - d, fine).value + integrate(g, 1.0 + d, 3.0, fine).value;
  EXPECT_NEAR(pv, brute, 1e-6);
}

TEST(PrincipalValue, WindowConverged) {
  auto f = [](double w) { return std::cos(w) / (1.0 + w * w); };
  QuadratureSpec s;
  const double a = pv_integral(f, 1.3, 0.0, 5.0, s);
  s.pv_window /= 2;
  const double b = pv_integral(f, 1.3, 0.0, 5.0, s);
  EXPECT_LE(std::abs(a - b), 10 * s.rel_tol * std::abs(a));
}

TEST(Oscillatory, MatchesIndependentReference) {
  // alpha = 3: cumulative trapezoid sums on a 1e-5 grid in log variables out
  // to |ln varpi| = 8, with the outer cutoff averaged over a window to cancel
  // its oscillating truncation error (numpy, independent of the spiral code).
  const std::pair<double, double> ref[] = {{0.7, -0.3083748}, {1.0, -0.4617355}, {1.6, -0.2847034}};
  for (const auto& [chi, v] : ref) EXPECT_NEAR(oscillatory_double_integral(3.0, chi, {}), v, 2e-6) << chi;
}

TEST(Oscillatory, StableUnderPanelRefinement) {
  QuadratureSpec s;
  const double a = oscillatory_double_integral(10, 1, s);
  s.osc_panels_per_period *= 2;
  const double b = oscillatory_double_integral(10, 1, s);
  EXPECT_NEAR(a, b, 1e-6 * std::max(1.0, std::abs(a)));
}

TEST(Oscillatory, SineIntegralReference) {
  // int_1^inf (dk/k) sin(alpha ln k +/- (chi alpha/2)(k - 1/k)) at alpha = 4,
  // chi = 1.3: 25-digit quadrature up to ln k = 5 plus the asymptotic tail.
  EXPECT_NEAR(log_sinh_sine_integral(4.0, 1.3, -1, {}), -0.546499770627463, 1e-8);
  EXPECT_NEAR(log_sinh_sine_integral(4.0, 1.3, +1, {}), 0.109470423004826, 1e-8);
}

TEST(Oscillatory, DomainErrors) {
  EXPECT_THROW(oscillatory_double_integral(0.5, 1.0, {}), DomainError);
  EXPECT_THROW(oscillatory_double_integral(10.0, 0.0, {}), DomainError);
}
