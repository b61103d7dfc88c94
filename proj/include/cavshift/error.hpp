#pragma once

#include <stdexcept>
#include <string>

namespace cavshift {

/// Argument outside the documented domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An adaptive scheme ran out of budget. Carries the best estimate so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate,
                   double err_estimate)
      : std::runtime_error(what),
        best_estimate_(best_estimate),
        err_estimate_(err_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double err_estimate() const noexcept { return err_estimate_; }

 private:
  double best_estimate_;
  double err_estimate_;
};

/// The detuning sits on an atom-cavity resonance, where the inertial shift
/// diverges.
class ResonanceError : public std::domain_error {
 public:
  ResonanceError(const std::string& what, int m, int n)
      : std::domain_error(what), m_(m), n_(n) {}
  int m() const noexcept { return m_; }
  int n() const noexcept { return n_; }

 private:
  int m_;
  int n_;
};

/// A ratio or limit is numerically degenerate (division by a vanishing
/// quantity, pole on top of a threshold).
class DegenerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace cavshift
