#include "defectlab/acceptance.hpp"

#include <chrono>
#include <functional>
#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "defectlab/cover.hpp"
#include "defectlab/errors.hpp"
#include "defectlab/flows.hpp"
#include "defectlab/localexp.hpp"
#include "defectlab/quad.hpp"
#include "defectlab/specfun.hpp"
#include "defectlab/spectral.hpp"

namespace defectlab::acceptance {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

using report::bound_check;
using report::CheckRecord;
using report::exact_check;
using report::floor_check;
using report::rel_check;
using report::Report;
using report::require_check;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

double cosine(const localexp::Vector& a, const localexp::Vector& b) {
  return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

}  // namespace

Report criterion_1_kv_identity() {
  Timer timer;
  Report rep;
  rep.command = "criterion-1 K_nu squared-norm identity";
  for (double nu : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    auto idr = quad::verify_kv_identity(nu, 1e-8);
    rep.checks.push_back(bound_check(
        "kv rel_err nu=" + std::to_string(nu), idr.rel_err, 1e-8));
    if (nu == 0.5) {
      rep.checks.push_back(
          rel_check("kv rhs(0.5) = pi/4", idr.rhs, kPi / 4.0, 1e-14));
      rep.checks.push_back(
          rel_check("kv rhs(0.5) printed", idr.rhs, 0.7853981634, 1e-9));
    }
  }
  rep.elapsed_ms = timer.ms();
  rep.checks.push_back(
      bound_check("runtime seconds <= 5", rep.elapsed_ms / 1000.0, 5.0));
  return rep;
}

Report criterion_2_nicholson() {
  Timer timer;
  Report rep;
  rep.command = "criterion-2 Nicholson representation";
  for (double nu : {0.0, 0.25, 0.45}) {
    for (double z : {0.5, 1.0, 2.0}) {
      auto idr = quad::verify_nicholson(nu, z, 1e-6);
      rep.checks.push_back(bound_check("nicholson rel_err nu=" +
                                           std::to_string(nu) +
                                           " z=" + std::to_string(z),
                                       idr.rel_err, 1e-6));
    }
  }
  rep.elapsed_ms = timer.ms();
  return rep;
}

Report criterion_3_mellin() {
  Timer timer;
  Report rep;
  rep.command = "criterion-3 Mellin identity at beta = 2";
  for (double nu : {0.0, 0.3, 0.6}) {
    auto idr = quad::verify_mellin(nu, 2.0, 1e-8);
    rep.checks.push_back(
        bound_check("mellin rel_err nu=" + std::to_string(nu), idr.rel_err,
                    1e-8));
    if (nu == 0.0) {
      rep.checks.push_back(rel_check("mellin rhs(0) = 1", idr.rhs, 1.0, 1e-13));
      rep.checks.push_back(rel_check("mellin lhs(0) = 1", idr.lhs, 1.0, 1e-8));
    }
  }
  rep.elapsed_ms = timer.ms();
  return rep;
}

Report criterion_4_index_count() {
  Timer timer;
  Report rep;
  rep.command = "criterion-4 finite-cover deficiency count";
  for (int n : {1, 2, 3, 4}) {
    const int dim = spectral::defect_dimension(n);
    rep.checks.push_back(
        exact_check("defect_dimension(" + std::to_string(n) + ") = 2N-1", dim,
                    2 * n - 1));
    rep.checks.push_back(exact_check(
        "basis length N=" + std::to_string(n),
        static_cast<double>(spectral::defect_basis_finite(n).size()), dim));
  }
  rep.checks.push_back(require_check(
      "lp_lc(0.999) limit circle",
      spectral::lp_lc_classify(0.999) == spectral::EndpointClass::LimitCircle));
  rep.checks.push_back(require_check(
      "lp_lc(1.0) limit point",
      spectral::lp_lc_classify(1.0) == spectral::EndpointClass::LimitPoint));
  rep.elapsed_ms = timer.ms();
  return rep;
}

Report criterion_5_radial_residuals() {
  Timer timer;
  Report rep;
  rep.command = "criterion-5 radial defect residual convergence";

  auto make_grid = [](int n) {
    spectral::RadialGrid g;
    g.r_min = 0.1;
    g.r_max = 10.0;
    g.n = n;
    g.spacing = spectral::RadialGrid::Spacing::Uniform;
    return g;
  };
  const spectral::RadialGrid coarse = make_grid(1981);   // h = 5e-3
  const spectral::RadialGrid fine = make_grid(3961);     // h = 2.5e-3

  for (double nu : {0.0, 0.25, 0.5, 0.75}) {
    const double c1 = spectral::radial_defect_residual(nu, coarse);
    const double c2 = spectral::radial_defect_residual(nu, fine);
    rep.checks.push_back(rel_check(
        "mode-equation gauge ratio nu=" + std::to_string(nu), c1 / c2, 4.0,
        0.125));
    const double w1 = spectral::weight_transform_residual(nu, coarse);
    const double w2 = spectral::weight_transform_residual(nu, fine);
    rep.checks.push_back(rel_check(
        "W-gauge ratio nu=" + std::to_string(nu), w1 / w2, 4.0, 0.125));
  }

  // nu = 1/2 closed-form cross-check: K_{1/2}(r) = sqrt(pi/(2r)) e^{-r}
  double worst = 0.0;
  specfun::Order half(0.5);
  for (double r = 0.1; r <= 10.0; r += 0.37) {
    const double closed = std::sqrt(kPi / (2.0 * r)) * std::exp(-r);
    worst = std::max(worst, std::abs(specfun::bessel_k(half, r) - closed) /
                                closed);
  }
  rep.checks.push_back(
      bound_check("K_{1/2} closed-form agreement", worst, 1e-9));
  rep.elapsed_ms = timer.ms();
  return rep;
}

Report criterion_6_parseval() {
  Timer timer;
  Report rep;
  rep.command = "criterion-6 Parseval defect norm";
  auto g = spectral::GFunction::sample(
      [](double xi) -> std::complex<double> {
        const double u2 = (xi / 0.5) * (xi / 0.5);
        if (u2 >= 1.0) return {0.0, 0.0};
        return {std::exp(-1.0 / (1.0 - u2)), 0.0};
      },
      128);
  auto par = spectral::defect_norm_parseval(g);
  rep.params["direct"] = par.direct;
  rep.params["weighted"] = par.weighted;
  rep.checks.push_back(
      bound_check("two-route rel_err", par.rel_err, 1e-6));
  rep.checks.push_back(require_check("weight >= 1/2 on the support",
                                     par.weighted >= 0.5 * g.squared_l2()));
  rep.elapsed_ms = timer.ms();
  return rep;
}

Report criterion_7_flow_simulator() {
  Timer timer;
  Report rep;
  rep.command = "criterion-7 lifted-flow simulator";
  using cover::CoverSpec;
  using cover::SurfacePoint;
  using cover::Vec2;
  using flows::Bump;
  using flows::StateFn;

  // (a) winding-0 commutator returns the state bit-exactly
  {
    const CoverSpec inf = CoverSpec::infinite();
    StateFn f(inf, {Bump{SurfacePoint(3.0, 0.0, inf), 0.4, {0.8, 0.6}}});
    rep.checks.push_back(require_check(
        "winding-0 commutator is the identity, bit-exact",
        flows::commutator_apply(f, 1.0, 1.0) == f));
  }

  // (b) origin-enclosing commutator shifts the sheet by -winding of the
  // counterclockwise-oriented rectangle (= winding of the traced loop).
  {
    const CoverSpec inf = CoverSpec::infinite();
    const Vec2 c{2.0, 1.2};
    const double s = 3.0, t = 3.0;
    StateFn f(inf, {Bump{SurfacePoint(std::hypot(c.x, c.y),
                                      std::atan2(c.y, c.x), inf),
                         0.3,
                         {1.0, 0.0}}});
    StateFn g = flows::commutator_apply(f, s, t);
    const std::vector<Vec2> traced{
        c, {c.x, c.y - t}, {c.x - s, c.y - t}, {c.x - s, c.y}, c};
    const int w_traced = cover::winding_of_loop(traced, 1e-9);
    const std::vector<Vec2> ccw{
        {c.x - s, c.y - t}, {c.x, c.y - t}, c, {c.x - s, c.y},
        {c.x - s, c.y - t}};
    const int w_ccw = cover::winding_of_loop(ccw, 1e-9);
    const long shift = g.bump(0).center.sheet() - f.bump(0).center.sheet();
    rep.checks.push_back(exact_check("ccw rectangle winds once", w_ccw, 1));
    rep.checks.push_back(exact_check("sheet shift = -winding",
                                     static_cast<double>(shift), -w_ccw));
    rep.checks.push_back(exact_check("sheet shift = traced-loop winding",
                                     static_cast<double>(shift), w_traced));
    rep.checks.push_back(require_check(
        "planar projection unchanged",
        g.bump(0).center.r() == f.bump(0).center.r() &&
            g.bump(0).center.theta_rem() == f.bump(0).center.theta_rem()));
  }

  // (c) the two orders of U1 U2 differ by the loop winding and are exactly
  // orthogonal when the sheets differ
  {
    const CoverSpec inf = CoverSpec::infinite();
    const Vec2 c{-1.5, -1.0};
    const double s = 3.0, t = 3.0;
    StateFn f(inf, {Bump{SurfacePoint(std::hypot(c.x, c.y),
                                      std::atan2(c.y, c.x), inf),
                         0.3,
                         {1.0, 0.0}}});
    auto sep = flows::sheet_separation(f, s, t);
    const std::vector<Vec2> concat{
        c, {c.x, c.y + t}, {c.x + s, c.y + t}, {c.x + s, c.y}, c};
    const int w = cover::winding_of_loop(concat, 1e-9);
    rep.checks.push_back(exact_check(
        "shift_AB - shift_BA = concatenated winding",
        static_cast<double>(sep.shift_ab[0] - sep.shift_ba[0]), w));
    rep.checks.push_back(require_check("orders orthogonal", sep.orthogonal));
    auto a = flows::translate_state(flows::translate_state(f, 2, t), 1, s);
    auto b = flows::translate_state(flows::translate_state(f, 1, s), 2, t);
    rep.checks.push_back(require_check(
        "inner product exactly zero",
        flows::inner_product(a, b) == std::complex<double>(0.0, 0.0)));
  }

  // (d) N winding-1 commutators restore the state on Finite(N)
  {
    const CoverSpec c3 = CoverSpec::finite(3);
    const Vec2 c{2.0, 1.2};
    StateFn f(c3, {Bump{SurfacePoint(std::hypot(c.x, c.y),
                                     std::atan2(c.y, c.x), c3),
                        0.3,
                        {1.0, 0.0}}});
    StateFn g = f;
    bool intermediate_moved = true;
    for (int k = 0; k < 3; ++k) {
      g = flows::commutator_apply(g, 3.0, 3.0);
      if (k < 2 && g == f) intermediate_moved = false;
    }
    rep.checks.push_back(require_check(
        "Finite(3): three winding-1 commutators restore the state",
        intermediate_moved && g == f));
  }

  rep.elapsed_ms = timer.ms();
  rep.checks.push_back(
      bound_check("runtime seconds <= 1", rep.elapsed_ms / 1000.0, 1.0));
  return rep;
}

Report criterion_8_local_exponentiation(const Options& opt) {
  Timer timer;
  Report rep;
  rep.command = "criterion-8 local-flow exponentiation";
  rep.params["seed"] = opt.seed;

  std::mt19937_64 rng(opt.seed);
  double worst_expm = 0.0, worst_group = 0.0, worst_subdiv = 0.0;
  bool all_built = true;
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + trial % 9;
    const localexp::Matrix h = localexp::random_skew_matrix(dim, rng);
    auto flow =
        localexp::LocalFlow::for_generator(localexp::Generator::dense_skew(h));
    for (double t : {0.5, 2.7, -3.1}) {
      try {
        const localexp::Matrix u = localexp::exponentiate_local(flow, t, 1e-10);
        worst_expm = std::max(
            worst_expm,
            (u - localexp::expm_scaling_squaring(t * h)).norm());
      } catch (const ToleranceError&) {
        all_built = false;
      }
    }
    worst_group =
        std::max(worst_group, localexp::verify_group_law(flow, 1.1, -2.3));
    const double t_sub = 2.7;
    const int n_min = static_cast<int>(
                          std::floor(std::abs(t_sub) / flow.epsilon_prime())) +
                      1;
    const localexp::Matrix u1 =
        localexp::exponentiate_local(flow, t_sub, 1e-10, n_min);
    const localexp::Matrix u2 =
        localexp::exponentiate_local(flow, t_sub, 1e-10, 2 * n_min);
    worst_subdiv = std::max(worst_subdiv, (u1 - u2).norm());
  }
  rep.checks.push_back(require_check("all constructions met 1e-10", all_built));
  rep.checks.push_back(
      bound_check("max ||(phi(t/n))^n - expm(tH)||", worst_expm, 1e-10));
  rep.checks.push_back(
      bound_check("max group-law residual", worst_group, 1e-10));
  rep.checks.push_back(
      bound_check("max subdivision sensitivity", worst_subdiv, 1e-12));
  rep.elapsed_ms = timer.ms();
  return rep;
}

Report criterion_9_indices_1d() {
  Timer timer;
  Report rep;
  rep.command = "criterion-9 d/dx deficiency probe";

  for (int n : {100, 200, 400}) {
    auto interval =
        localexp::defect_indices_1d(localexp::Boundary1D::Interval, n, 2);
    rep.checks.push_back(exact_check(
        "interval n=" + std::to_string(n) + " index (+)", interval.n_plus, 1));
    rep.checks.push_back(exact_check(
        "interval n=" + std::to_string(n) + " index (-)", interval.n_minus,
        1));
    auto periodic =
        localexp::defect_indices_1d(localexp::Boundary1D::Periodic, n, 2);
    rep.checks.push_back(exact_check(
        "periodic n=" + std::to_string(n) + " index (+)", periodic.n_plus, 0));
    rep.checks.push_back(exact_check(
        "periodic n=" + std::to_string(n) + " index (-)", periodic.n_minus,
        0));

    if (n == 200) {
      localexp::Vector ex(n), emx(n);
      for (int j = 0; j < n; ++j) {
        ex(j) = std::exp(interval.grid[j]);
        emx(j) = std::exp(-interval.grid[j]);
      }
      const localexp::Vector& wp = interval.witnesses_plus[0];
      const localexp::Vector& wm = interval.witnesses_minus[0];
      const double cos_p = std::max(cosine(wp, ex), cosine(wp, emx));
      const double cos_m = std::max(cosine(wm, ex), cosine(wm, emx));
      rep.checks.push_back(
          rel_check("witness(+) matches {e^x, e^-x}", cos_p, 1.0, 1e-3));
      rep.checks.push_back(
          rel_check("witness(-) matches {e^x, e^-x}", cos_m, 1.0, 1e-3));
      const bool distinct = (cosine(wp, ex) > cosine(wp, emx)) !=
                            (cosine(wm, ex) > cosine(wm, emx));
      rep.checks.push_back(
          require_check("witnesses pick distinct exponentials", distinct));
    }
  }
  rep.elapsed_ms = timer.ms();
  return rep;
}

Report criterion_10_resolvent_commutation() {
  Timer timer;
  Report rep;
  rep.command = "criterion-10 resolvent commutation";
  using localexp::Generator;
  using localexp::Matrix;

  Matrix j2(2, 2);
  j2 << 0.0, 1.0, -1.0, 0.0;
  Matrix h1 = Matrix::Zero(4, 4), h2 = Matrix::Zero(4, 4);
  h1.block(0, 0, 2, 2) = j2;
  h1.block(2, 2, 2, 2) = 2.0 * j2;
  h2.block(0, 0, 2, 2) = 3.0 * j2;
  h2.block(2, 2, 2, 2) = j2;
  rep.checks.push_back(bound_check(
      "commuting pair commutator norm",
      localexp::resolvent_commutation(Generator::dense_skew(h1),
                                      Generator::dense_skew(h2), {1.0, 0.0},
                                      {1.0, 0.0}),
      1e-12));

  Matrix lx = Matrix::Zero(3, 3), ly = Matrix::Zero(3, 3);
  lx(1, 2) = -1.0;
  lx(2, 1) = 1.0;
  ly(0, 2) = 1.0;
  ly(2, 0) = -1.0;
  rep.checks.push_back(floor_check(
      "non-commuting rotation pair obstruction",
      localexp::resolvent_commutation(Generator::dense_skew(lx),
                                      Generator::dense_skew(ly), {1.0, 0.0},
                                      {1.0, 0.0}),
      1e-3));

  bool rejected = false;
  try {
    localexp::resolvent_commutation(Generator::dense_skew(lx),
                                    Generator::dense_skew(ly), {0.0, 1.0},
                                    {1.0, 0.0});
  } catch (const DomainError&) {
    rejected = true;
  }
  rep.checks.push_back(
      require_check("purely imaginary lambda rejected", rejected));
  rep.elapsed_ms = timer.ms();
  return rep;
}

std::vector<Report> run_all(const Options& opt) {
  const std::vector<std::pair<const char*, std::function<Report()>>> items = {
      {"criterion-1 K_nu squared-norm identity", criterion_1_kv_identity},
      {"criterion-2 Nicholson representation", criterion_2_nicholson},
      {"criterion-3 Mellin identity at beta = 2", criterion_3_mellin},
      {"criterion-4 finite-cover deficiency count", criterion_4_index_count},
      {"criterion-5 radial defect residual convergence",
       criterion_5_radial_residuals},
      {"criterion-6 Parseval defect norm", criterion_6_parseval},
      {"criterion-7 lifted-flow simulator", criterion_7_flow_simulator},
      {"criterion-8 local-flow exponentiation",
       [&opt] { return criterion_8_local_exponentiation(opt); }},
      {"criterion-9 d/dx deficiency probe", criterion_9_indices_1d},
      {"criterion-10 resolvent commutation",
       criterion_10_resolvent_commutation},
  };

  std::vector<Report> reports;
  for (const auto& [name, runner] : items) {
    try {
      reports.push_back(runner());
    } catch (const std::exception& e) {
      Report failed;
      failed.command = name;
      failed.params["error"] = e.what();
      failed.checks.push_back(
          require_check(std::string("criterion threw: ") + e.what(), false));
      reports.push_back(std::move(failed));
    }
  }
  return reports;
}

}  // namespace defectlab::acceptance
