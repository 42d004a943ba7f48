#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "defectlab/errors.hpp"
#include "defectlab/quad.hpp"
#include "defectlab/specfun.hpp"
#include "oracles.hpp"

using namespace defectlab;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("integrate: exponential tails") {
  quad::QuadOptions opt;
  opt.decay_rate = 1.0;
  auto r1 = quad::integrate([](double z) { return std::exp(-z); }, 0.0, kInf,
                            1e-11, opt);
  CHECK(r1.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(r1.value - 1.0) <= std::max(1e-11, r1.error_estimate));

  opt.decay_rate = 2.0;
  auto r2 = quad::integrate([](double z) { return std::exp(-2.0 * z); }, 0.0,
                            kInf, 1e-11, opt);
  CHECK(r2.value == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("integrate: 1/cosh^2 has antiderivative tanh") {
  quad::QuadOptions opt;
  opt.decay_rate = 2.0;
  auto r = quad::integrate(
      [](double t) {
        const double c = std::cosh(t);
        return 1.0 / (c * c);
      },
      0.0, kInf, 1e-11, opt);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(r.value - 1.0) <= r.error_estimate);
}

TEST_CASE("integrate: error_estimate bounds actual error on validation set") {
  quad::QuadOptions opt;
  opt.decay_rate = 1.0;
  // exp(-z)
  auto r1 = quad::integrate([](double z) { return std::exp(-z); }, 0.0, kInf,
                            1e-9, opt);
  CHECK(std::abs(r1.value - 1.0) <= r1.error_estimate);
  // K_{1/2}(z)^2 z = (pi/2) e^{-2z}, integral pi/4
  opt.decay_rate = 2.0;
  auto r2 = quad::integrate(
      [](double z) { return 0.5 * kPi * std::exp(-2.0 * z); }, 0.0, kInf, 1e-9,
      opt);
  CHECK(std::abs(r2.value - kPi / 4.0) <= r2.error_estimate);
  // finite interval polynomial
  auto r3 = quad::integrate([](double z) { return z * z; }, 0.0, 2.0, 1e-12);
  CHECK(std::abs(r3.value - 8.0 / 3.0) <= std::max(r3.error_estimate, 1e-14));
}

TEST_CASE("integrate: panel budget exhaustion raises ConvergenceError") {
  quad::QuadOptions opt;
  opt.max_panels = 8;
  CHECK_THROWS_AS(quad::integrate([](double z) { return std::sqrt(z) * std::cos(40.0 * z); },
                                  0.0, 20.0, 1e-13, opt),
                  ConvergenceError);
}

TEST_CASE("integrate: argument validation") {
  CHECK_THROWS_AS(quad::integrate([](double) { return 1.0; }, 1.0, 0.0, 1e-9),
                  DomainError);
  CHECK_THROWS_AS(quad::integrate([](double) { return 1.0; }, 0.0, 1.0, 0.0),
                  DomainError);
  quad::QuadOptions opt;
  opt.decay_rate = 0.0;
  CHECK_THROWS_AS(quad::integrate([](double) { return 1.0; }, 0.0, kInf, 1e-9,
                                  opt),
                  DomainError);
  auto degenerate =
      quad::integrate([](double) { return 1.0; }, 2.0, 2.0, 1e-9);
  CHECK(degenerate.value == 0.0);
}

TEST_CASE("verify_kv_identity: nu = 0.5 gives pi/4") {
  auto rep = quad::verify_kv_identity(0.5, 1e-8);
  CHECK(rep.rhs == doctest::Approx(kPi / 4.0).epsilon(1e-14));
  CHECK(rep.rhs == doctest::Approx(0.7853981634).epsilon(1e-10));
  CHECK(rep.rel_err <= 1e-8);
}

TEST_CASE("verify_kv_identity: nu = 0.9") {
  auto rep = quad::verify_kv_identity(0.9, 1e-8);
  // (1/2)(0.9 pi)/sin(0.9 pi), sin(0.9 pi) = sin(0.1 pi)
  const double expect = 0.5 * 0.9 * kPi / std::sin(0.1 * kPi);
  CHECK(rep.rhs == doctest::Approx(expect).epsilon(1e-14));
  CHECK(rep.rhs == doctest::Approx(4.57488332308373383).epsilon(1e-12));
  CHECK(rep.rel_err <= 1e-8);
}

TEST_CASE("verify_kv_identity: nu -> 0 limit of the right-hand side") {
  auto rep = quad::verify_kv_identity(1e-4, 1e-8);
  CHECK(std::abs(rep.rhs - 0.5) < 1e-7);
  CHECK(rep.rel_err <= 1e-8);
}

TEST_CASE("verify_kv_identity: even in nu") {
  auto plus = quad::verify_kv_identity(0.35, 1e-9);
  auto minus = quad::verify_kv_identity(-0.35, 1e-9);
  CHECK(oracles::rel_diff(plus.lhs, minus.lhs) < 1e-9);
  CHECK(plus.rhs == minus.rhs);
}

TEST_CASE("verify_kv_identity: Fubini proof route agrees with direct") {
  auto direct = quad::verify_kv_identity(0.3, 1e-8);
  auto fubini =
      quad::verify_kv_identity(0.3, 1e-8, quad::KvIdentityMode::FubiniProof);
  CHECK(oracles::rel_diff(direct.lhs, fubini.lhs) < 1e-7);
  CHECK(fubini.rel_err <= 1e-7);
  CHECK(direct.lhs == doctest::Approx(0.582483311617639973).epsilon(1e-9));
}

TEST_CASE("verify_kv_identity: domain") {
  CHECK_THROWS_AS(quad::verify_kv_identity(0.0, 1e-8), DomainError);
  CHECK_THROWS_AS(quad::verify_kv_identity(1.0, 1e-8), DomainError);
}

TEST_CASE("verify_nicholson: nu = 0, z = 1") {
  auto rep = quad::verify_nicholson(0.0, 1.0, 1e-6);
  CHECK(rep.rhs == doctest::Approx(0.177261577595904026).epsilon(1e-9));
  CHECK(rep.rel_err <= 1e-6);
}

TEST_CASE("verify_nicholson: nu = 0.5, z = 1 closed form (pi/2) e^{-2}") {
  auto rep = quad::verify_nicholson(0.5, 1.0, 1e-6);
  CHECK(rep.rhs == doctest::Approx(0.5 * kPi * std::exp(-2.0)).epsilon(1e-9));
  CHECK(rep.rel_err <= 1e-6);
}

TEST_CASE("verify_nicholson: nu = 0.25, z = 2") {
  auto rep = quad::verify_nicholson(0.25, 2.0, 1e-6);
  CHECK(rep.rel_err <= 1e-6);
}

TEST_CASE("verify_mellin: beta = 2 grid") {
  auto rep0 = quad::verify_mellin(0.0, 2.0, 1e-8);
  CHECK(rep0.rhs == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(rep0.rel_err <= 1e-8);

  auto rep5 = quad::verify_mellin(0.5, 2.0, 1e-8);
  CHECK(rep5.rhs == doctest::Approx(1.1107207345395915618).epsilon(1e-12));
  CHECK(rep5.rel_err <= 1e-8);

  auto rep3 = quad::verify_mellin(0.3, 2.0, 1e-8);
  CHECK(rep3.rhs == doctest::Approx(1.0379928617643266918).epsilon(1e-12));
  CHECK(rep3.rel_err <= 1e-8);

  CHECK_THROWS_AS(quad::verify_mellin(0.5, 0.4, 1e-8), DomainError);
}

TEST_CASE("verify_mellin: integer order") {
  // integral_0^inf K_1(z) z dz = Gamma(3/2) Gamma(1/2) = pi/2
  auto rep = quad::verify_mellin(1.0, 2.0, 1e-8);
  CHECK(rep.rhs == doctest::Approx(kPi / 2.0).epsilon(1e-13));
  CHECK(rep.rel_err <= 1e-8);
}

TEST_CASE("Mellin chain step at t = 0: scaled argument reproduces the proof") {
  // integral_0^inf K_{2 nu0}(2z) z dz = (1/4) pi nu0 / sin(pi nu0), nu0 = 0.3
  const double nu0 = 0.3;
  specfun::Order order(2.0 * nu0);
  quad::QuadOptions opt;
  opt.decay_rate = 2.0;
  auto r = quad::integrate(
      [&](double z) { return specfun::bessel_k(order, 2.0 * z) * z; }, 1e-10,
      kInf, 1e-10, opt);
  CHECK(r.value ==
        doctest::Approx(0.2912416558088199866).epsilon(1e-8));
}

TEST_CASE("kv_radial_norm matches the closed form across nu") {
  for (double nu : {0.1, 0.45, 0.8}) {
    auto r = quad::kv_radial_norm(nu, 1e-9);
    const double closed = 0.5 * kPi * nu / std::sin(kPi * nu);
    CHECK(oracles::rel_diff(r.value, closed) < 1e-8);
  }
}
