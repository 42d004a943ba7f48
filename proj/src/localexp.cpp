#include "defectlab/localexp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "defectlab/errors.hpp"
#include "detail/gauss_kronrod.hpp"  // format_sci

namespace defectlab::localexp {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

double spectral_norm(const MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<MatrixXcd>(m).singularValues()(0);
}

// Power by binary squaring; the base is orthogonal to rounding, so the
// product stays well conditioned for any subdivision count.
Matrix matrix_power(Matrix base, long n) {
  Matrix acc = Matrix::Identity(base.rows(), base.cols());
  while (n > 0) {
    if (n & 1) acc = acc * base;
    base = base * base;
    n >>= 1;
  }
  return acc;
}

int minimal_subdivisions(double t, double epsilon_prime) {
  return static_cast<int>(std::floor(std::abs(t) / epsilon_prime)) + 1;
}

}  // namespace

Generator Generator::dense_skew(Matrix a) {
  if (a.rows() != a.cols())
    throw DomainError("Generator: matrix must be square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a + a.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale)
    throw DomainError("Generator: A + A^T exceeds the 1e-14 skewness bound");
  return Generator(std::move(a));
}

Generator Generator::tridiagonal_1d(int n, Boundary1D boundary) {
  if (n < 2) throw DomainError("Generator: need n >= 2 grid nodes");
  const double h = 1.0 / (n + 1);
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = 1.0 / (2.0 * h);
    m(i + 1, i) = -1.0 / (2.0 * h);
  }
  if (boundary == Boundary1D::Periodic) {
    m(0, n - 1) = -1.0 / (2.0 * h);
    m(n - 1, 0) = 1.0 / (2.0 * h);
  } else if (boundary == Boundary1D::DecayWindow) {
    // conjugate by a boundary-vanishing window, mirroring entries so the
    // result is skew to the last bit
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) {
      const double x = (i + 1) * h;
      w(i) = std::exp(-0.01 / (x * (1.0 - x)));
    }
    for (int i = 0; i + 1 < n; ++i) {
      const double v = w(i) * (1.0 / (2.0 * h)) * w(i + 1);
      m(i, i + 1) = v;
      m(i + 1, i) = -v;
    }
  }
  return Generator(std::move(m));
}

Matrix random_skew_matrix(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix r(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) r(i, j) = gauss(rng);
  return 0.5 * (r - r.transpose());
}

LocalFlow::LocalFlow(Generator generator, double epsilon, double epsilon_prime)
    : generator_(std::move(generator)),
      epsilon_(epsilon),
      epsilon_prime_(epsilon_prime) {
  if (!(epsilon > 0.0) || !(epsilon_prime > 0.0) || !(epsilon_prime < epsilon))
    throw DomainError("LocalFlow: need 0 < epsilon' < epsilon");
}

LocalFlow LocalFlow::for_generator(Generator generator) {
  const double norm1 = generator.matrix().cwiseAbs().colwise().sum().maxCoeff();
  const double eps_prime = std::min(1.0, 0.5 / std::max(norm1, 1e-12));
  return LocalFlow(std::move(generator), 2.0 * eps_prime, eps_prime);
}

Matrix LocalFlow::apply(double t) const {
  if (!(std::abs(t) < epsilon_))
    throw DomainError("LocalFlow: |t| < epsilon required, got t = " +
                      std::to_string(t));
  const int n = generator_.dim();
  const Matrix& h = generator_.matrix();
  Matrix sum = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k <= 64; ++k) {
    term = (term * h) * (t / k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-18 * sum.cwiseAbs().maxCoeff())
      break;
  }
  return sum;
}

Vector LocalFlow::apply(double t, const Vector& v) const {
  return apply(t) * v;
}

NestedDomains::NestedDomains(const Generator& g) {
  const int n = g.dim();
  // i H is Hermitian; its spectral decomposition delivers the cutoff family.
  MatrixXcd ih = std::complex<double>(0.0, 1.0) * g.matrix();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(ih);

  struct Cand {
    double level;
    Eigen::VectorXd vec;
  };
  std::vector<Cand> cands;
  for (int k = 0; k < n; ++k) {
    const double level = std::abs(es.eigenvalues()(k));
    const VectorXcd z = es.eigenvectors().col(k);
    cands.push_back({level, z.real()});
    cands.push_back({level, z.imag()});
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Cand& a, const Cand& b) { return a.level < b.level; });

  // Gram-Schmidt with rank filtering: +-mu pairs contribute the same real
  // 2-plane twice, so half the candidates drop out.
  vectors_.resize(n, n);
  int cols = 0;
  for (const Cand& c : cands) {
    Eigen::VectorXd v = c.vec;
    for (int j = 0; j < cols; ++j)
      v -= vectors_.col(j).dot(v) * vectors_.col(j);
    const double nv = v.norm();
    if (nv < 1e-8) continue;
    for (int j = 0; j < cols; ++j)  // second orthogonalization pass
      v -= vectors_.col(j).dot(v) * vectors_.col(j);
    v.normalize();
    vectors_.col(cols) = v;
    levels_.push_back(c.level);
    ++cols;
  }
  if (cols != n)
    throw ToleranceError("NestedDomains: eigenbasis did not span the space");
}

Matrix NestedDomains::basis(double epsilon) const {
  if (!(epsilon > 0.0)) throw DomainError("NestedDomains: epsilon > 0");
  const double cut = 1.0 / epsilon;
  int cols = 0;
  while (cols < static_cast<int>(levels_.size()) && levels_[cols] < cut)
    ++cols;
  return vectors_.leftCols(cols);
}

Matrix expm_scaling_squaring(const Matrix& a) {
  if (a.rows() != a.cols())
    throw DomainError("expm: matrix must be square");
  const int n = static_cast<int>(a.rows());
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm1 > 0.5) s = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  Matrix b = a / std::pow(2.0, s);

  Matrix sum = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k <= 64; ++k) {
    term = (term * b) * (1.0 / k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-20 * sum.cwiseAbs().maxCoeff())
      break;
  }
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum;
}

Matrix exponentiate_local(const LocalFlow& flow, double t, double tol,
                          int subdivisions) {
  const int dim = flow.generator().dim();
  if (t == 0.0) return Matrix::Identity(dim, dim);

  const int n_min = minimal_subdivisions(t, flow.epsilon_prime());
  const int n = subdivisions == 0 ? n_min : subdivisions;
  if (n < 1 || !(std::abs(t / n) < flow.epsilon_prime()))
    throw DomainError("exponentiate_local: subdivision violates |t/n| < eps'");

  const Matrix u = matrix_power(flow.apply(t / n), n);

  const double orth =
      (u.transpose() * u - Matrix::Identity(dim, dim)).norm();
  const double against_oracle =
      (u - expm_scaling_squaring(t * flow.generator().matrix())).norm();
  if (orth > tol || against_oracle > tol)
    throw ToleranceError(
        "exponentiate_local: residuals above tolerance (orthogonality " +
        detail::format_sci(orth) + ", vs expm " +
        detail::format_sci(against_oracle) + ")");
  return u;
}

double verify_group_law(const LocalFlow& flow, double s, double t) {
  const double check_tol = 1e-6;  // loose internal gate; the residual is the result
  const Matrix us = exponentiate_local(flow, s, check_tol);
  const Matrix ut = exponentiate_local(flow, t, check_tol);
  const Matrix ust = exponentiate_local(flow, s + t, check_tol);
  return (ust - us * ut).norm();
}

double verify_isometry(const LocalFlow& flow, const NestedDomains& domains,
                       int samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("verify_isometry: samples >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  // Distinct cutoff levels give the ladder of epsilon values to draw from.
  std::vector<double> levels = domains.levels();
  levels.erase(std::unique(levels.begin(), levels.end(),
                           [](double a, double b) {
                             return std::abs(a - b) <= 1e-12 * (1.0 + a);
                           }),
               levels.end());

  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double level = levels[k % levels.size()];
    const double eps = 1.0 / (level + 1e-9 * (1.0 + level));
    const Matrix basis = domains.basis(eps);
    if (basis.cols() == 0) continue;

    Vector coeff(basis.cols());
    for (int i = 0; i < coeff.size(); ++i) coeff(i) = gauss(rng);
    const Vector v = basis * coeff;

    const double t_max = 0.999 * std::min(eps, flow.epsilon());
    const double t = t_max * unif(rng);
    const double deviation = std::abs(flow.apply(t, v).norm() - v.norm());
    worst = std::max(worst, deviation);
  }
  return worst;
}

int count_near_kernel(const std::vector<double>& singular_values) {
  if (singular_values.empty()) return 0;
  const double top = *std::max_element(singular_values.begin(),
                                       singular_values.end());
  if (top == 0.0) return static_cast<int>(singular_values.size());
  int count = 0;
  for (double s : singular_values) {
    if (s > 1e-10 * top && s < 1e-6 * top)
      throw RankAmbiguityError(
          "singular value " + detail::format_sci(s) +
          " falls in the ambiguity band (1e-10, 1e-6) x " +
          detail::format_sci(top) + "; grid too coarse to decide the rank");
    if (s < 1e-8 * top) ++count;
  }
  return count;
}

namespace {

// Defect system for <(H + sign I) v, f> = 0 through the no-boundary-condition
// adjoint model: rows sample -(f_{j+1}-f_j)/h + sign (f_j+f_{j+1})/2 = 0 at
// the n-1 midpoints; the periodic closure adds the wrap-around row.
Matrix defect_system(int n, double h, double sign, bool periodic) {
  const int rows = periodic ? n : n - 1;
  Matrix m = Matrix::Zero(rows, n);
  for (int j = 0; j + 1 < n; ++j) {
    m(j, j) = 1.0 / h + sign * 0.5;
    m(j, j + 1) = -1.0 / h + sign * 0.5;
  }
  if (periodic) {
    m(n - 1, n - 1) = 1.0 / h + sign * 0.5;
    m(n - 1, 0) = -1.0 / h + sign * 0.5;
  }
  return m;
}

struct SideResult {
  int index;
  std::vector<Vector> witnesses;
};

SideResult defect_side(int n, double h, double sign, bool periodic) {
  const Matrix m = defect_system(n, h, sign, periodic);
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  std::vector<double> svals(sv.data(), sv.data() + sv.size());

  const int small = count_near_kernel(svals);
  const int nullity = n - (static_cast<int>(svals.size()) - small);

  SideResult out;
  out.index = nullity;
  for (int c = n - nullity; c < n; ++c) {
    Vector w = svd.matrixV().col(c);
    if (w.sum() < 0.0) w = -w;
    out.witnesses.push_back(w);
  }
  return out;
}

}  // namespace

DefectIndices1D defect_indices_1d(Boundary1D boundary, int n, int m_margin) {
  if (boundary == Boundary1D::DecayWindow)
    throw DomainError(
        "defect_indices_1d: defined for Interval and Periodic closures");
  if (n < 50) throw DomainError("defect_indices_1d: n >= 50 required");
  if (m_margin < 2) throw DomainError("defect_indices_1d: m_margin >= 2");
  if (2 * m_margin >= n / 2)
    throw DomainError("defect_indices_1d: margins swallow the grid");

  const double h = 1.0 / (n + 1);
  const bool periodic = boundary == Boundary1D::Periodic;

  // <(H + I) v, f> = 0  <=>  H* f = -f  (f ~ e^{+x});  the minus side
  // mirrors it.
  SideResult plus = defect_side(n, h, +1.0, periodic);
  SideResult minus = defect_side(n, h, -1.0, periodic);

  // Certify every witness against the margin-domain defect equation for the
  // central-difference skew matrix: rows j with m_margin <= j < n - m_margin
  // probe exactly the inner products <(H +- I) e_j, f>.
  const Matrix hc = Generator::tridiagonal_1d(n, boundary).matrix();
  const auto certify = [&](const Vector& w, double sign) {
    const Vector residual = -hc * w + sign * w;
    double worst = 0.0;
    for (int j = m_margin; j < n - m_margin; ++j)
      worst = std::max(worst, std::abs(residual(j)));
    if (worst > h * h * w.cwiseAbs().maxCoeff())
      throw ToleranceError(
          "defect_indices_1d: witness fails the margin-domain defect "
          "equation, residual " +
          detail::format_sci(worst));
  };
  for (const Vector& w : plus.witnesses) certify(w, +1.0);
  for (const Vector& w : minus.witnesses) certify(w, -1.0);

  DefectIndices1D out;
  out.n_plus = plus.index;
  out.n_minus = minus.index;
  out.witnesses_plus = std::move(plus.witnesses);
  out.witnesses_minus = std::move(minus.witnesses);
  out.grid.resize(n);
  for (int j = 0; j < n; ++j) out.grid[j] = (j + 1) * h;
  return out;
}

double resolvent_commutation(const Generator& h1, const Generator& h2,
                             std::complex<double> lambda1,
                             std::complex<double> lambda2) {
  if (h1.dim() != h2.dim())
    throw DomainError("resolvent_commutation: dimension mismatch");
  if (lambda1.real() == 0.0 || lambda2.real() == 0.0)
    throw DomainError(
        "resolvent_commutation: lambda must lie in C \\ iR");

  const int n = h1.dim();
  const MatrixXcd eye = MatrixXcd::Identity(n, n);
  const MatrixXcd r1 =
      (lambda1 * eye - h1.matrix().cast<std::complex<double>>()).inverse();
  const MatrixXcd r2 =
      (lambda2 * eye - h2.matrix().cast<std::complex<double>>()).inverse();
  return spectral_norm(MatrixXcd(r1 * r2 - r2 * r1));
}

double group_commutation_residual(const Generator& h1, const Generator& h2,
                                  double s, double t) {
  if (h1.dim() != h2.dim())
    throw DomainError("group_commutation_residual: dimension mismatch");
  const Matrix u1 = expm_scaling_squaring(s * h1.matrix());
  const Matrix u2 = expm_scaling_squaring(t * h2.matrix());
  return spectral_norm(Matrix(u1 * u2 - u2 * u1));
}

Matrix nelson_sum_of_squares(const std::vector<Generator>& generators) {
  if (generators.empty()) return Matrix(0, 0);
  const int n = generators.front().dim();
  Matrix l = Matrix::Zero(n, n);
  for (const Generator& g : generators) {
    if (g.dim() != n)
      throw DomainError("nelson_sum_of_squares: dimension mismatch");
    l += g.matrix() * g.matrix();
  }
  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
  if ((l - l.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ToleranceError("nelson_sum_of_squares: result not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(l, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().maxCoeff() > 1e-12 * scale)
    throw ToleranceError(
        "nelson_sum_of_squares: result not negative semidefinite");
  return l;
}

}  // namespace defectlab::localexp
