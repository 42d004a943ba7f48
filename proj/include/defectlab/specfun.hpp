#pragma once

#include <utility>

namespace defectlab::specfun {

/// Real order of a modified Bessel function. Orders are capped at |nu| <= 5;
/// K_{-nu} = K_nu, so evaluation normalizes to |nu| internally.
class Order {
 public:
  explicit Order(double nu);
  double value() const { return nu_; }
  double magnitude() const { return nu_ < 0 ? -nu_ : nu_; }

 private:
  double nu_;
};

/// Tuning knobs for the integral-representation evaluation of K_nu.
struct EvalConfig {
  double rel_tol = 1e-12;
  int max_panels = 512;
  double truncation_margin = 1e-3;  // tail cut at rel_tol * margin * estimate

  void validate() const;  // rel_tol > 0, max_panels >= 8
};

/// Gamma function via a fixed-coefficient Lanczos approximation, with the
/// reflection formula below x = 0.5. Relative error <= 1e-13 on [0.1, 30].
/// Throws PoleError at non-positive integers.
double gamma(double x);

/// Both sides of Gamma(nu) Gamma(1-nu) = pi / sin(pi nu) for nu in (0,1).
/// Returns {lhs, rhs}; the two evaluations are independent routes.
std::pair<double, double> gamma_reflection(double nu);

struct BesselKResult {
  double value = 0.0;
  bool underflowed = false;  // result flushed to zero for very large z
  int panels_used = 0;
};

/// Modified Bessel function of the second kind, K_nu(z), computed from
///   K_nu(z) = integral_0^inf exp(-z cosh t) cosh(nu t) dt
/// with adaptive panel quadrature and a decay-bound truncation point.
/// Relative error <= 1e-10 for z in [1e-3, 50], |nu| <= 5.
BesselKResult bessel_k_eval(Order order, double z, const EvalConfig& cfg = {});

/// Value-only convenience wrapper around bessel_k_eval.
double bessel_k(Order order, double z, const EvalConfig& cfg = {});

/// Central-difference residual of the modified Bessel equation
///   (1/r)(r u')' - (nu^2/r^2) u - u = 0  at  u = K_nu,
/// evaluated at r with step h. Pure discretization error, O(h^2).
/// Requires r - 2h > 0.
double bessel_k_ode_residual(Order order, double r, double h,
                             const EvalConfig& cfg = {});

}  // namespace defectlab::specfun
