#pragma once

#include <functional>
#include <map>
#include <string>

namespace defectlab::quad {

/// Value and rigorous error bookkeeping from an adaptive quadrature run.
struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;  // >= 0, upper bound on the validation suite
  int panels_used = 0;
};

struct QuadOptions {
  int max_panels = 4000;
  /// Lower bound on the exponential decay rate of the integrand, asserted by
  /// the caller when the upper limit is +infinity; used to pick the
  /// truncation point and to map the tail onto a finite interval.
  double decay_rate = 1.0;
  double abs_tol = 0.0;
};

/// Adaptive Gauss-Kronrod integration of f over (a, b); b may be +infinity.
/// Throws ConvergenceError when the panel budget is exhausted with the error
/// estimate still above tolerance.
QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, double tol, const QuadOptions& opt = {});

/// Quadrature of K_nu(z)^2 z over (0, inf) for |nu| < 1. The integrable
/// endpoint singularity is handled with an analytic z^{1-2nu} head below
/// z = 1e-10; the rest is adaptive.
QuadResult kv_radial_norm(double nu, double tol);

/// One verified integral identity: quadrature side, closed-form side, and
/// their relative discrepancy.
struct IdentityReport {
  double lhs = 0.0;  // quadrature route
  double rhs = 0.0;  // closed form
  double rel_err = 0.0;
  std::map<std::string, double> params;
};

enum class KvIdentityMode {
  Direct,       // integrate K_nu(z)^2 z directly
  FubiniProof,  // z-integral first at scaled argument, then the t-integral
};

/// Squared-norm identity: integral_0^inf K_nu(z)^2 z dz = (1/2) pi nu / sin(pi nu),
/// for nu in (-1,1) \ {0}.
IdentityReport verify_kv_identity(double nu, double tol,
                                  KvIdentityMode mode = KvIdentityMode::Direct);

/// Nicholson representation at equal orders:
///   K_nu(z)^2 = 2 integral_0^inf K_{2nu}(2 z cosh t) dt.
IdentityReport verify_nicholson(double nu, double z, double tol);

/// Mellin transform identity:
///   integral_0^inf K_nu(z) z^{beta-1} dz
///     = 2^{beta-2} Gamma((beta+nu)/2) Gamma((beta-nu)/2),  beta > |nu|.
IdentityReport verify_mellin(double nu, double beta, double tol);

}  // namespace defectlab::quad
