#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace defectlab::localexp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Boundary1D { Interval, Periodic, DecayWindow };

/// Skew-symmetric generator: either a dense matrix or the central-difference
/// discretization of d/dx on n interior nodes of (0,1) with the chosen
/// boundary closure.
class Generator {
 public:
  static Generator dense_skew(Matrix a);  // requires A + A^T = 0 to 1e-14
  static Generator tridiagonal_1d(int n, Boundary1D boundary);

  const Matrix& matrix() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }

 private:
  explicit Generator(Matrix m) : mat_(std::move(m)) {}
  Matrix mat_;
};

/// Draw of a dense skew-symmetric matrix with N(0,1)-based entries,
/// (R - R^T)/2; used by the seeded verification suites.
Matrix random_skew_matrix(int dim, std::mt19937_64& rng);

/// Local flow phi(t), |t| < epsilon: the generator's propagator evaluated by
/// a truncated power series, which converges rapidly only on the small-time
/// window the flow is restricted to.
class LocalFlow {
 public:
  LocalFlow(Generator generator, double epsilon, double epsilon_prime);
  static LocalFlow for_generator(Generator generator);

  Matrix apply(double t) const;  // requires |t| < epsilon
  Vector apply(double t, const Vector& v) const;

  const Generator& generator() const { return generator_; }
  double epsilon() const { return epsilon_; }
  double epsilon_prime() const { return epsilon_prime_; }

 private:
  Generator generator_;
  double epsilon_;
  double epsilon_prime_;
};

/// Spectral-cutoff family D_eps = span of eigenvectors with |eigenvalue|
/// < 1/eps, realized as real orthonormal bases; monotone decreasing in eps
/// and exhausting the space as eps -> 0.
class NestedDomains {
 public:
  explicit NestedDomains(const Generator& g);

  /// Orthonormal columns spanning D_eps.
  Matrix basis(double epsilon) const;

  /// |eigenvalue| magnitude attached to each basis column, ascending.
  const std::vector<double>& levels() const { return levels_; }

 private:
  std::vector<double> levels_;
  Matrix vectors_;
};

/// Scaling-and-squaring matrix exponential, the in-module oracle the local
/// construction is checked against.
Matrix expm_scaling_squaring(const Matrix& a);

/// U_t = (phi(t/n))^n with the minimal n satisfying |t/n| < epsilon'.
/// Verifies orthogonality and agreement with expm to `tol`; a failure raises
/// ToleranceError listing the achieved residuals. `subdivisions` overrides n
/// (it must still satisfy the smallness constraint).
Matrix exponentiate_local(const LocalFlow& flow, double t, double tol,
                          int subdivisions = 0);

/// || U_{s+t} - U_s U_t ||_F for the flow's construction.
double verify_group_law(const LocalFlow& flow, double s, double t);

/// Max over sampled v in D_eps, |t| < min(eps, epsilon'), of
/// | ||phi(t) v|| - ||v|| |.
double verify_isometry(const LocalFlow& flow, const NestedDomains& domains,
                       int samples, std::uint64_t seed = 0x5eed);

struct DefectIndices1D {
  int n_plus = 0;
  int n_minus = 0;
  std::vector<Vector> witnesses_plus;   // ~ e^{+x} grid samples
  std::vector<Vector> witnesses_minus;  // ~ e^{-x}
  std::vector<double> grid;             // node coordinates in (0,1)
};

/// Deficiency indices of d/dx on compactly supported grid functions over
/// (0,1) (margin-vanishing, m_margin >= 2 nodes per side), or on the
/// boundary-free periodic grid.
///
/// The defect equations <(H +- I) v, f> = 0 are solved through the discrete
/// adjoint model: H* = -d/dx with no boundary condition, discretized by
/// midpoint-sampled one-sided differences, giving a rectangular system whose
/// near-kernel is measured by SVD (threshold 1e-8 x largest singular value,
/// with a forbidden ambiguity band (1e-10, 1e-6) that raises
/// RankAmbiguityError on coarse grids). Each witness is then certified
/// against the margin-domain form of the defect equation for the
/// central-difference skew matrix itself.
DefectIndices1D defect_indices_1d(Boundary1D boundary, int n, int m_margin);

/// Near-kernel counting rule shared by the index probe: number of singular
/// values below 1e-8 x largest; values inside (1e-10, 1e-6) x largest raise
/// RankAmbiguityError.
int count_near_kernel(const std::vector<double>& singular_values);

/// || [ (lambda1 - H1)^{-1}, (lambda2 - H2)^{-1} ] ||_2. Purely imaginary
/// lambda (including 0) is rejected: the resolvent bound needs
/// lambda in C \ iR.
double resolvent_commutation(const Generator& h1, const Generator& h2,
                             std::complex<double> lambda1,
                             std::complex<double> lambda2);

/// || e^{s H1} e^{t H2} - e^{t H2} e^{s H1} ||_2 via the expm oracle.
double group_commutation_residual(const Generator& h1, const Generator& h2,
                                  double s, double t);

/// L = sum H_j^2; symmetric negative semidefinite by construction, validated
/// before returning. An empty list yields the 0 x 0 zero operator.
Matrix nelson_sum_of_squares(const std::vector<Generator>& generators);

}  // namespace defectlab::localexp
