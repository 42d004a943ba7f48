#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace defectlab::spectral {

/// Angular mode order of the separated radial problem: |k|/N on the N-fold
/// cover, or a continuous sample xi from (-1, 1) on the infinite cover.
struct ModeOrder {
  double nu = 0.0;  // normalized to >= 0
};

enum class AngularSign { Plus, Minus, Zero };

/// One defect-space basis element K_nu(r) e^{+- i nu theta}. Only sub-unit
/// orders admit square-integrable defect solutions, so nu < 1 always.
struct DefectBasisElement {
  ModeOrder nu;
  AngularSign sign;
  double radial(double r) const;  // K_nu(r)
};

/// Defect basis of the Laplacian on the N-fold cover: one element for k = 0
/// and a (+,-) pair for k = 1..N-1, hence 2N-1 elements.
std::vector<DefectBasisElement> defect_basis_finite(int N);

struct RadialGrid {
  enum class Spacing { Uniform, Logarithmic };
  double r_min = 0.1;
  double r_max = 10.0;
  int n = 128;
  Spacing spacing = Spacing::Uniform;

  std::vector<double> points() const;  // validates r_min > 0, n >= 16
};

/// Max over interior grid points of the finite-difference residual of
///   (1/r)(r u')' - (nu^2/r^2) u = u   at  u = K_nu,
/// normalized pointwise by the magnitudes of the equation's terms.
/// Second-order small in the grid spacing. Requires grid.r_min >= 0.05.
double radial_defect_residual(double nu, const RadialGrid& grid);

/// Same residual in the W-gauge  u'' - ((nu^2 - 1/4)/r^2) u = u  with
/// u(r) = sqrt(r) K_nu(r), i.e. after the unitary map (Wf)(r) = sqrt(r) f(r)
/// onto L2(dr).
double weight_transform_residual(double nu, const RadialGrid& grid);

enum class EndpointClass { LimitCircle, LimitPoint };

/// Endpoint classification of the order-nu Bessel operator at r = 0, probed
/// numerically: the dyadic increments of int_0^1 r^{1-2 nu} dr (the weighted
/// square of the second Frobenius solution) decay geometrically exactly when
/// the endpoint is limit circle, i.e. nu < 1.
EndpointClass lp_lc_classify(double nu);

/// Deficiency index of the Laplacian on the N-fold cover: counts limit-circle
/// angular modes k with multiplicity (1 for k = 0, else 2). Equals 2N-1.
int defect_dimension(int N);

/// Density g(xi) sampled on the module's Gauss-Legendre grid over
/// (-1 + delta, 1 - delta), delta = 1e-3; admissible g are smooth and
/// compactly supported strictly inside (-1, 1).
class GFunction {
 public:
  static GFunction sample(
      const std::function<std::complex<double>(double)>& g, int n_nodes = 128);
  static GFunction zero(int n_nodes = 128);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::complex<double>>& values() const { return values_; }

  double squared_l2() const;  // sum of w |g|^2 over the grid

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<std::complex<double>> values_;
};

/// Defect-vector synthesis psi(r, theta) =
///   (1/2 pi) int_{-1}^{1} g(xi) K_xi(r) e^{i xi theta} d xi
/// evaluated with the grid carried by g at the given (r, theta) points.
std::vector<std::complex<double>> synthesize_defect(
    const GFunction& g, const std::vector<std::pair<double, double>>& points);

struct ParsevalReport {
  double direct = 0.0;    // double quadrature: radial integrals per node
  double weighted = 0.0;  // closed-form weight (1/2) pi xi / sin(pi xi)
  double rel_err = 0.0;
};

/// Two routes to the defect norm of the synthesized vector; they agree when
/// the K_nu squared-norm identity holds pointwise on the xi-grid.
ParsevalReport defect_norm_parseval(const GFunction& g);

}  // namespace defectlab::spectral
