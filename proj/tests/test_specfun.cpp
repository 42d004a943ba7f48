#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "defectlab/errors.hpp"
#include "defectlab/specfun.hpp"
#include "oracles.hpp"

using namespace defectlab;
using specfun::Order;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("gamma: fixed values") {
  CHECK(specfun::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(specfun::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-14));
  // Gamma(1/2) = sqrt(pi)
  CHECK(specfun::gamma(0.5) ==
        doctest::Approx(1.7724538509055160273).epsilon(1e-14));
  // mpmath anchors
  CHECK(oracles::rel_diff(specfun::gamma(0.1), 9.51350769866873183629) < 1e-13);
  CHECK(oracles::rel_diff(specfun::gamma(30.0), 8.841761993739701954543616e30) <
        1e-13);
}

TEST_CASE("gamma: agrees with std::tgamma across [0.1, 30]") {
  for (double x = 0.1; x <= 30.0; x += 0.0437) {
    CHECK(oracles::rel_diff(specfun::gamma(x), std::tgamma(x)) < 1e-13);
  }
}

TEST_CASE("gamma: recurrence gamma(x+1) = x gamma(x) on [0.1, 20]") {
  for (double x = 0.1; x <= 20.0; x += 0.1) {
    const double lhs = specfun::gamma(x + 1.0);
    const double rhs = x * specfun::gamma(x);
    CHECK(oracles::rel_diff(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("gamma: poles raise") {
  CHECK_THROWS_AS(specfun::gamma(0.0), PoleError);
  CHECK_THROWS_AS(specfun::gamma(-1.0), PoleError);
  CHECK_THROWS_AS(specfun::gamma(-7.0), PoleError);
  // negative non-integer arguments are fine
  CHECK(oracles::rel_diff(specfun::gamma(-0.5), std::tgamma(-0.5)) < 1e-13);
}

TEST_CASE("gamma_reflection: both sides agree") {
  auto [lhs_half, rhs_half] = specfun::gamma_reflection(0.5);
  CHECK(lhs_half == doctest::Approx(kPi).epsilon(1e-13));
  CHECK(rhs_half == doctest::Approx(kPi).epsilon(1e-15));

  // pi / sin(pi/4) = pi sqrt(2)
  auto [lhs_q, rhs_q] = specfun::gamma_reflection(0.25);
  CHECK(lhs_q == doctest::Approx(4.4428829381583662470).epsilon(1e-12));
  CHECK(rhs_q == doctest::Approx(4.4428829381583662470).epsilon(1e-14));

  auto [lhs_9, rhs_9] = specfun::gamma_reflection(0.9);
  const double expect_9 = kPi / std::sin(0.9 * kPi);
  CHECK(rhs_9 == doctest::Approx(expect_9).epsilon(1e-15));
  CHECK(oracles::rel_diff(lhs_9, rhs_9) < 1e-12);

  for (double nu = 0.05; nu < 1.0; nu += 0.05) {
    auto [lhs, rhs] = specfun::gamma_reflection(nu);
    CHECK(oracles::rel_diff(lhs, rhs) < 1e-12);
  }

  CHECK_THROWS_AS(specfun::gamma_reflection(0.0), DomainError);
  CHECK_THROWS_AS(specfun::gamma_reflection(1.0), DomainError);
  CHECK_THROWS_AS(specfun::gamma_reflection(-0.2), DomainError);
}

TEST_CASE("bessel_k: half-integer closed form") {
  // K_{1/2}(z) = sqrt(pi/(2z)) e^{-z}
  const double v1 = specfun::bessel_k(Order(0.5), 1.0);
  CHECK(v1 == doctest::Approx(0.4610685044478945584).epsilon(1e-11));
  for (double z : {0.01, 0.3, 2.0, 11.0, 45.0}) {
    const double closed = std::sqrt(kPi / (2.0 * z)) * std::exp(-z);
    CHECK(oracles::rel_diff(specfun::bessel_k(Order(0.5), z), closed) < 1e-10);
  }
}

TEST_CASE("bessel_k: even in the order, bit for bit") {
  for (double nu : {0.3, 1.7, 4.9}) {
    for (double z : {0.002, 0.8, 17.0}) {
      CHECK(specfun::bessel_k(Order(-nu), z) ==
            specfun::bessel_k(Order(nu), z));
    }
  }
}

TEST_CASE("bessel_k: independent quadrature oracle at nu=0, z=1") {
  const double mine = specfun::bessel_k(Order(0.0), 1.0);
  CHECK(mine == doctest::Approx(0.4210244382407083333).epsilon(1e-11));
  CHECK(oracles::rel_diff(mine, oracles::bessel_k_reference(0.0, 1.0)) <
        1e-11);
}

TEST_CASE("bessel_k: mpmath anchors") {
  struct Anchor {
    double nu, z, value;
  };
  const Anchor anchors[] = {
      {0.3, 2.0, 0.116036974348119258521532940618},
      {2.5, 7.0, 6.43541154481307574083629892842e-4},
      {5.0, 0.001, 3.83999976000000999999958333336e17},
      {0.9, 0.001, 499.712265562521255844089682617},
      {4.7, 30.0, 3.06131820034218852536945886512e-14},
      {0.0, 50.0, 3.41016774978949551392067551235e-23},
      {1.1, 0.1, 12.6952703491357803224684505996},
      {3.3, 2.718281828459045, 0.247466819021834343700738852931},
  };
  for (const auto& a : anchors) {
    CHECK(oracles::rel_diff(specfun::bessel_k(Order(a.nu), a.z), a.value) <
          1e-10);
  }
}

TEST_CASE("bessel_k: matches std::cyl_bessel_k on the accuracy box") {
  for (double nu : {0.0, 0.25, 0.5, 1.0, 1.9, 3.1, 5.0}) {
    for (double z : {1e-3, 0.05, 0.7, 3.0, 12.0, 50.0}) {
      const double ref = std::cyl_bessel_k(nu, z);
      CHECK(oracles::rel_diff(specfun::bessel_k(Order(nu), z), ref) < 2e-10);
    }
  }
}

TEST_CASE("bessel_k: positive and strictly decreasing in z") {
  std::mt19937_64 rng(7101);
  std::uniform_real_distribution<double> unu(0.0, 5.0);
  std::uniform_real_distribution<double> uz(1e-3, 30.0);
  for (int i = 0; i < 60; ++i) {
    const double nu = unu(rng);
    double z1 = uz(rng), z2 = uz(rng);
    if (z2 < z1) std::swap(z1, z2);
    if (z2 - z1 < 1e-6) z2 += 1e-3;
    const double k1 = specfun::bessel_k(Order(nu), z1);
    const double k2 = specfun::bessel_k(Order(nu), z2);
    CHECK(k1 > 0.0);
    CHECK(k2 > 0.0);
    CHECK(k1 > k2);
  }
}

TEST_CASE("bessel_k: small-z limit z^nu K_nu(z) -> 2^{nu-1} Gamma(nu)") {
  // The subleading term is (z/2)^{2 nu} Gamma(-nu)/Gamma(nu), so the 1%
  // window at z = 1e-4 needs nu >= 0.25; smaller orders approach the limit
  // only at much smaller z.
  for (double nu : {0.25, 0.4, 0.6, 0.9}) {
    const double z = 1e-4;
    const double lim = std::pow(2.0, nu - 1.0) * specfun::gamma(nu);
    const double val = std::pow(z, nu) * specfun::bessel_k(Order(nu), z);
    CHECK(oracles::rel_diff(val, lim) < 0.01);
  }
  {
    const double nu = 0.1, z = 1e-12;
    const double lim = std::pow(2.0, nu - 1.0) * specfun::gamma(nu);
    const double val = std::pow(z, nu) * specfun::bessel_k(Order(nu), z);
    CHECK(oracles::rel_diff(val, lim) < 0.01);
  }
}

TEST_CASE("bessel_k: underflow flagged, domain errors raised") {
  auto r = specfun::bessel_k_eval(Order(1.0), 800.0);
  CHECK(r.underflowed);
  CHECK(r.value == 0.0);

  auto ok = specfun::bessel_k_eval(Order(1.0), 3.0);
  CHECK_FALSE(ok.underflowed);

  CHECK_THROWS_AS(specfun::bessel_k(Order(0.5), 0.0), DomainError);
  CHECK_THROWS_AS(specfun::bessel_k(Order(0.5), -2.0), DomainError);
  CHECK_THROWS_AS(Order(5.5), DomainError);
  CHECK_THROWS_AS(Order(std::nan("")), DomainError);
}

TEST_CASE("bessel_k: EvalConfig validation") {
  specfun::EvalConfig bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(specfun::bessel_k(Order(0.5), 1.0, bad), DomainError);
  bad = {};
  bad.max_panels = 4;
  CHECK_THROWS_AS(specfun::bessel_k(Order(0.5), 1.0, bad), DomainError);
}

TEST_CASE("bessel_k_ode_residual: pure discretization error") {
  // K_nu solves the equation exactly; the residual is stencil error.
  CHECK(specfun::bessel_k_ode_residual(Order(0.3), 2.0, 1e-3) < 1e-6);

  // second-order convergence: residual(h)/residual(h/2) ~ 4
  const double r1 = specfun::bessel_k_ode_residual(Order(0.3), 2.0, 0.05);
  const double r2 = specfun::bessel_k_ode_residual(Order(0.3), 2.0, 0.025);
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.15));

  // h -> 0 limit at the closed-form order
  const double a = specfun::bessel_k_ode_residual(Order(0.5), 1.0, 0.08);
  const double b = specfun::bessel_k_ode_residual(Order(0.5), 1.0, 0.02);
  CHECK(b < a);
  CHECK(b < 1e-3);

  CHECK_THROWS_AS(specfun::bessel_k_ode_residual(Order(0.5), 0.1, 0.05),
                  DomainError);
}
