#include "defectlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "defectlab/errors.hpp"
#include "defectlab/quad.hpp"
#include "defectlab/specfun.hpp"
#include "detail/gauss_kronrod.hpp"
#include "detail/gauss_legendre.hpp"

namespace defectlab::spectral {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kXiGridInset = 1e-3;  // xi-grid lives on (-1+d, 1-d)

// The residual stencils divide K-evaluation noise by h^2; keep the radial
// samples near the rounding floor so second-order convergence stays visible
// down to h ~ 1e-3.
specfun::EvalConfig residual_eval_config() {
  specfun::EvalConfig cfg;
  cfg.rel_tol = 1e-14;
  cfg.max_panels = 2000;
  return cfg;
}

// Admissibility weight (1/2) pi xi / sin(pi xi); even, >= 1/2, -> inf at 1.
double defect_weight(double xi) {
  if (xi == 0.0) return 0.5;
  return 0.5 * kPi * xi / std::sin(kPi * xi);
}

struct Stencil {
  double d1;  // first-derivative estimate
  double d2;  // second-derivative estimate
};

// Three-point finite differences on a possibly nonuniform grid; reduces to
// the standard second-order central stencil when h1 == h2.
Stencil stencil_3pt(double um, double u0, double up, double h1, double h2) {
  Stencil s;
  s.d1 = (-h2 / (h1 * (h1 + h2))) * um + ((h2 - h1) / (h1 * h2)) * u0 +
         (h1 / (h2 * (h1 + h2))) * up;
  s.d2 = 2.0 * (um / (h1 * (h1 + h2)) - u0 / (h1 * h2) +
                up / (h2 * (h1 + h2)));
  return s;
}

double normalized_residual_max(
    const std::vector<double>& r, const std::vector<double>& u,
    const std::function<double(double)>& potential) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    const double h1 = r[i] - r[i - 1];
    const double h2 = r[i + 1] - r[i];
    const Stencil s = stencil_3pt(u[i - 1], u[i], u[i + 1], h1, h2);
    const double pot = potential(r[i]);
    const double residual = s.d2 - pot * u[i];
    const double scale =
        std::abs(s.d2) + std::abs(pot * u[i]) + std::abs(u[i]);
    worst = std::max(worst, std::abs(residual) / scale);
  }
  return worst;
}

}  // namespace

double DefectBasisElement::radial(double r) const {
  return specfun::bessel_k(specfun::Order(nu.nu), r);
}

std::vector<DefectBasisElement> defect_basis_finite(int N) {
  if (N < 1) throw DomainError("defect_basis_finite: N >= 1 required");
  std::vector<DefectBasisElement> out;
  out.reserve(2 * N - 1);
  out.push_back({ModeOrder{0.0}, AngularSign::Zero});
  for (int k = 1; k < N; ++k) {
    const double nu = static_cast<double>(k) / N;
    out.push_back({ModeOrder{nu}, AngularSign::Plus});
    out.push_back({ModeOrder{nu}, AngularSign::Minus});
  }
  return out;
}

std::vector<double> RadialGrid::points() const {
  if (!(r_min > 0.0)) throw DomainError("RadialGrid: r_min > 0 required");
  if (!(r_max > r_min)) throw DomainError("RadialGrid: r_max > r_min required");
  if (n < 16) throw DomainError("RadialGrid: n >= 16 required");
  std::vector<double> r(n);
  if (spacing == Spacing::Uniform) {
    const double h = (r_max - r_min) / (n - 1);
    for (int i = 0; i < n; ++i) r[i] = r_min + h * i;
  } else {
    const double q = std::log(r_max / r_min) / (n - 1);
    for (int i = 0; i < n; ++i) r[i] = r_min * std::exp(q * i);
  }
  r.back() = r_max;
  return r;
}

double radial_defect_residual(double nu, const RadialGrid& grid) {
  if (!(grid.r_min >= 0.05))
    throw DomainError("radial_defect_residual: r_min >= 0.05 required");
  const double s = std::abs(nu);
  const std::vector<double> r = grid.points();
  specfun::Order order(s);
  const specfun::EvalConfig cfg = residual_eval_config();
  std::vector<double> u(r.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    u[i] = specfun::bessel_k(order, r[i], cfg);

  // (1/r)(r u')' - nu^2/r^2 u = u  <=>  u'' + u'/r - (nu^2/r^2 + 1) u = 0.
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    const double h1 = r[i] - r[i - 1];
    const double h2 = r[i + 1] - r[i];
    const Stencil st = stencil_3pt(u[i - 1], u[i], u[i + 1], h1, h2);
    const double coeff = s * s / (r[i] * r[i]) + 1.0;
    const double residual = st.d2 + st.d1 / r[i] - coeff * u[i];
    const double scale =
        std::abs(st.d2) + std::abs(st.d1 / r[i]) + std::abs(coeff * u[i]);
    worst = std::max(worst, std::abs(residual) / scale);
  }
  return worst;
}

double weight_transform_residual(double nu, const RadialGrid& grid) {
  if (!(grid.r_min >= 0.05))
    throw DomainError("weight_transform_residual: r_min >= 0.05 required");
  const double s = std::abs(nu);
  const std::vector<double> r = grid.points();
  specfun::Order order(s);
  const specfun::EvalConfig cfg = residual_eval_config();
  std::vector<double> u(r.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    u[i] = std::sqrt(r[i]) * specfun::bessel_k(order, r[i], cfg);

  return normalized_residual_max(r, u, [s](double rr) {
    return (s * s - 0.25) / (rr * rr) + 1.0;
  });
}

EndpointClass lp_lc_classify(double nu) {
  if (!(nu >= 0.0)) throw DomainError("lp_lc_classify: nu >= 0 required");
  // Dyadic increments of int_0^1 r^{1-2nu} dr: the integral of the weighted
  // square |r^{-nu}|^2 r of the second Frobenius solution. Convergence of
  // the series of increments (geometric ratio < 1) is the limit-circle case.
  const auto integrand = [nu](double r) {
    return std::pow(r, 1.0 - 2.0 * nu);
  };
  double prev =
      detail::integrate_adaptive(integrand, 0.5, 1.0, 1e-12, 0.0, 400).value;
  double ratio = 0.0;
  double hi = 0.5;
  for (int level = 0; level < 12; ++level) {
    const double cur =
        detail::integrate_adaptive(integrand, 0.5 * hi, hi, 1e-12, 0.0, 400)
            .value;
    ratio = cur / prev;
    prev = cur;
    hi *= 0.5;
  }
  return ratio < 1.0 - 1e-6 ? EndpointClass::LimitCircle
                            : EndpointClass::LimitPoint;
}

int defect_dimension(int N) {
  if (N < 1) throw DomainError("defect_dimension: N >= 1 required");
  int count = 0;
  for (int k = 0;; ++k) {
    const double nu = static_cast<double>(k) / N;
    if (lp_lc_classify(nu) == EndpointClass::LimitPoint) break;
    count += (k == 0) ? 1 : 2;
  }
  return count;
}

GFunction GFunction::sample(
    const std::function<std::complex<double>(double)>& g, int n_nodes) {
  if (n_nodes < 8) throw DomainError("GFunction: need at least 8 nodes");
  const auto rule = detail::gauss_legendre(n_nodes);
  GFunction out;
  out.nodes_.resize(n_nodes);
  out.weights_.resize(n_nodes);
  out.values_.resize(n_nodes);
  const double half = 1.0 - kXiGridInset;
  for (int i = 0; i < n_nodes; ++i) {
    out.nodes_[i] = half * rule.nodes[i];
    out.weights_[i] = half * rule.weights[i];
    out.values_[i] = g(out.nodes_[i]);
    if (!std::isfinite(out.values_[i].real()) ||
        !std::isfinite(out.values_[i].imag()))
      throw DomainError("GFunction: sample value not finite");
  }
  return out;
}

GFunction GFunction::zero(int n_nodes) {
  return sample([](double) { return std::complex<double>{0.0, 0.0}; },
                n_nodes);
}

double GFunction::squared_l2() const {
  double out = 0.0;
  for (int i = 0; i < size(); ++i) out += weights_[i] * std::norm(values_[i]);
  return out;
}

std::vector<std::complex<double>> synthesize_defect(
    const GFunction& g, const std::vector<std::pair<double, double>>& points) {
  std::vector<std::complex<double>> out;
  out.reserve(points.size());
  for (const auto& [r, theta] : points) {
    if (!(r > 0.0)) throw DomainError("synthesize_defect: r > 0 required");
    std::complex<double> acc{0.0, 0.0};
    for (int k = 0; k < g.size(); ++k) {
      const double xi = g.nodes()[k];
      const double radial =
          specfun::bessel_k(specfun::Order(std::abs(xi)), r);
      acc += g.weights()[k] * g.values()[k] * radial *
             std::polar(1.0, xi * theta);
    }
    out.push_back(acc / (2.0 * kPi));
  }
  return out;
}

ParsevalReport defect_norm_parseval(const GFunction& g) {
  ParsevalReport rep;
  for (int k = 0; k < g.size(); ++k) {
    const double xi = g.nodes()[k];
    const double gg = std::norm(g.values()[k]);
    if (gg == 0.0) continue;  // radial integral not needed
    const double radial = quad::kv_radial_norm(std::abs(xi), 1e-8).value;
    rep.direct += g.weights()[k] * gg * radial;
    rep.weighted += g.weights()[k] * gg * defect_weight(xi);
  }
  if (rep.direct == 0.0 && rep.weighted == 0.0) {
    rep.rel_err = 0.0;
  } else {
    rep.rel_err = std::abs(rep.direct - rep.weighted) /
                  std::max(std::abs(rep.weighted), 1e-300);
  }
  return rep;
}

}  // namespace defectlab::spectral
