#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "defectlab/errors.hpp"
#include "defectlab/specfun.hpp"
#include "defectlab/spectral.hpp"
#include "oracles.hpp"

using namespace defectlab;
using spectral::EndpointClass;
using spectral::GFunction;
using spectral::RadialGrid;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::complex<double> bump_g(double xi, double half_width) {
  const double u2 = (xi / half_width) * (xi / half_width);
  if (u2 >= 1.0) return {0.0, 0.0};
  return {std::exp(-1.0 / (1.0 - u2)), 0.0};
}

RadialGrid uniform_grid(double r_min, double r_max, int n) {
  RadialGrid g;
  g.r_min = r_min;
  g.r_max = r_max;
  g.n = n;
  g.spacing = RadialGrid::Spacing::Uniform;
  return g;
}

}  // namespace

TEST_CASE("defect_basis_finite: 2N-1 elements") {
  auto b1 = spectral::defect_basis_finite(1);
  REQUIRE(b1.size() == 1);
  CHECK(b1[0].nu.nu == 0.0);
  CHECK(b1[0].sign == spectral::AngularSign::Zero);

  auto b2 = spectral::defect_basis_finite(2);
  CHECK(b2.size() == 3);

  auto b3 = spectral::defect_basis_finite(3);
  REQUIRE(b3.size() == 5);
  CHECK(b3[1].nu.nu == doctest::Approx(1.0 / 3.0));
  CHECK(b3[3].nu.nu == doctest::Approx(2.0 / 3.0));
  for (const auto& e : b3) CHECK(e.nu.nu < 1.0);

  // radial profile is K_nu
  CHECK(b3[1].radial(2.0) ==
        specfun::bessel_k(specfun::Order(1.0 / 3.0), 2.0));

  CHECK_THROWS_AS(spectral::defect_basis_finite(0), DomainError);
}

TEST_CASE("radial_defect_residual: K_nu satisfies the mode equation") {
  // pure discretization error at h = 1e-3 on [0.1, 10], in both gauges
  const auto grid = uniform_grid(0.1, 10.0, 9901);
  CHECK(spectral::radial_defect_residual(0.0, grid) <= 1e-4);
  CHECK(spectral::weight_transform_residual(0.0, grid) <= 1e-4);
}

TEST_CASE("radial residual: second-order convergence in both gauges") {
  // (r_max - r_min)/(n-1) halves exactly between n and 2n-1 points; the
  // spacing must stay well below r_min for the h^2 term to dominate there.
  for (double nu : {0.0, 0.75}) {
    const double c1 =
        spectral::radial_defect_residual(nu, uniform_grid(0.1, 10.0, 1981));
    const double c2 =
        spectral::radial_defect_residual(nu, uniform_grid(0.1, 10.0, 3961));
    CHECK(c1 / c2 == doctest::Approx(4.0).epsilon(0.125));

    const double w1 =
        spectral::weight_transform_residual(nu, uniform_grid(0.1, 10.0, 1981));
    const double w2 =
        spectral::weight_transform_residual(nu, uniform_grid(0.1, 10.0, 3961));
    CHECK(w1 / w2 == doctest::Approx(4.0).epsilon(0.125));
  }
}

TEST_CASE("weight_transform_residual: nu = 1/2 reduces to exp(-r)") {
  // at nu = 1/2 the potential vanishes and u = sqrt(pi/2) e^{-r}; the
  // residual equals the bare stencil error of e^{-r}.
  const auto grid = uniform_grid(0.1, 10.0, 1981);
  const double got = spectral::weight_transform_residual(0.5, grid);

  const auto pts = grid.points();
  const double h = pts[1] - pts[0];
  double expect = 0.0;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double um = std::exp(-pts[i - 1]), u0 = std::exp(-pts[i]),
                 up = std::exp(-pts[i + 1]);
    const double d2 = (up - 2.0 * u0 + um) / (h * h);
    const double res = std::abs(d2 - u0) / (std::abs(d2) + 2.0 * u0);
    expect = std::max(expect, res);
  }
  CHECK(got == doctest::Approx(expect).epsilon(1e-4));
}

TEST_CASE("gauge consistency: both gauges certify the same solutions") {
  // same equation in two gauges: both residuals are discretization-small
  // for every order (the W-gauge at nu = 1/2 is strictly easier since the
  // potential vanishes, so only smallness is compared, not magnitudes).
  for (double nu : {0.0, 0.25, 0.5, 0.75}) {
    const auto grid = uniform_grid(0.1, 10.0, 1981);
    const double a = spectral::radial_defect_residual(nu, grid);
    const double b = spectral::weight_transform_residual(nu, grid);
    CHECK(a < 1e-3);
    CHECK(b < 1e-3);
  }
  CHECK_THROWS_AS(
      spectral::radial_defect_residual(0.5, uniform_grid(0.01, 1.0, 100)),
      DomainError);
}

TEST_CASE("lp_lc_classify: flips exactly at nu = 1") {
  CHECK(spectral::lp_lc_classify(0.0) == EndpointClass::LimitCircle);
  CHECK(spectral::lp_lc_classify(0.5) == EndpointClass::LimitCircle);
  CHECK(spectral::lp_lc_classify(0.999) == EndpointClass::LimitCircle);
  CHECK(spectral::lp_lc_classify(1.0) == EndpointClass::LimitPoint);
  CHECK(spectral::lp_lc_classify(2.0) == EndpointClass::LimitPoint);
  CHECK(spectral::lp_lc_classify(5.0) == EndpointClass::LimitPoint);
  CHECK_THROWS_AS(spectral::lp_lc_classify(-0.5), DomainError);
}

TEST_CASE("defect_dimension: 2N-1, consistent with the emitted basis") {
  CHECK(spectral::defect_dimension(1) == 1);
  CHECK(spectral::defect_dimension(4) == 7);
  CHECK(spectral::defect_dimension(2) == 3);
  CHECK(spectral::defect_dimension(2) ==
        static_cast<int>(spectral::defect_basis_finite(2).size()));
}

TEST_CASE("synthesize_defect: zero density gives zero") {
  auto g = GFunction::zero();
  auto vals = spectral::synthesize_defect(g, {{1.0, 0.0}, {2.0, 1.5}});
  CHECK(vals[0] == std::complex<double>{0.0, 0.0});
  CHECK(vals[1] == std::complex<double>{0.0, 0.0});
}

TEST_CASE("synthesize_defect: real even g gives real values at theta = 0") {
  auto g = GFunction::sample([](double xi) { return bump_g(xi, 0.5); }, 64);
  auto vals = spectral::synthesize_defect(g, {{1.0, 0.0}, {0.5, 0.0}});
  CHECK(vals[0].imag() == 0.0);
  CHECK(vals[0].real() > 0.0);
  CHECK(vals[1].imag() == 0.0);
}

TEST_CASE("synthesize_defect: Richardson refinement of the xi-grid") {
  auto g128 =
      GFunction::sample([](double xi) { return bump_g(xi, 0.5); }, 128);
  auto g256 =
      GFunction::sample([](double xi) { return bump_g(xi, 0.5); }, 256);
  for (auto [r, th] : {std::pair{1.0, 0.0}, std::pair{1.0, 2.0},
                       std::pair{3.0, -1.0}}) {
    const auto coarse = spectral::synthesize_defect(g128, {{r, th}})[0];
    const auto fine = spectral::synthesize_defect(g256, {{r, th}})[0];
    CHECK(std::abs(coarse - fine) <= 1e-6 * std::abs(fine));
  }
}

TEST_CASE("synthesize_defect: decays in r") {
  auto g = GFunction::sample([](double xi) { return bump_g(xi, 0.5); }, 64);
  auto vals =
      spectral::synthesize_defect(g, {{0.5, 0.7}, {2.0, 0.7}, {8.0, 0.7}});
  CHECK(std::abs(vals[0]) > std::abs(vals[1]));
  CHECK(std::abs(vals[1]) > std::abs(vals[2]));
  CHECK_THROWS_AS(spectral::synthesize_defect(g, {{0.0, 0.0}}), DomainError);
}

TEST_CASE("defect_norm_parseval: zero density") {
  auto rep = spectral::defect_norm_parseval(GFunction::zero());
  CHECK(rep.direct == 0.0);
  CHECK(rep.weighted == 0.0);
  CHECK(rep.rel_err == 0.0);
}

TEST_CASE("defect_norm_parseval: two routes agree for a smooth bump") {
  auto g = GFunction::sample([](double xi) { return bump_g(xi, 0.5); }, 64);
  auto rep = spectral::defect_norm_parseval(g);
  CHECK(rep.rel_err <= 1e-6);
  // weight is >= 1/2 everywhere
  CHECK(rep.weighted >= 0.5 * g.squared_l2());
}

TEST_CASE("defect_norm_parseval: tight support near 0 gives ~ half the L2") {
  auto g = GFunction::sample([](double xi) { return bump_g(xi, 0.05); }, 96);
  auto rep = spectral::defect_norm_parseval(g);
  const double half_l2 = 0.5 * g.squared_l2();
  CHECK(std::abs(rep.direct - half_l2) < 0.01 * half_l2);
  CHECK(std::abs(rep.weighted - half_l2) < 0.01 * half_l2);
  CHECK(rep.rel_err <= 1e-6);
}
