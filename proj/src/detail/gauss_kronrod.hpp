#pragma once

// Internal adaptive Gauss-Kronrod 7/15 panel integrator shared by the
// special-function and quadrature modules. Not installed; include only
// from src/.

#include <algorithm>
#include <cmath>
#include <array>
#include <cstddef>
#include <cstdio>
#include <string>
#include <limits>
#include <vector>

#include "defectlab/errors.hpp"

namespace defectlab::detail {

// QUADPACK G7K15 abscissae and weights on [-1, 1].
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
  double value = 0.0;       // Kronrod estimate
  double error = 0.0;       // QUADPACK-style error bound
  double abs_integral = 0.0;
};

// One G7K15 application on [a, b].
template <class F>
PanelResult gk15(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);

  const double fc = f(mid);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);

  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = hw * kXgk[j];
    fv1[j] = f(mid - dx);
    fv2[j] = f(mid + dx);
    const double sum = fv1[j] + fv2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }

  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

  PanelResult r;
  r.value = resk * hw;
  r.abs_integral = resabs * std::abs(hw);
  const double asc = resasc * std::abs(hw);

  double err = std::abs((resk - resg) * hw);
  if (asc != 0.0 && err != 0.0)
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  err = std::max(err, 50.0 * eps * r.abs_integral);
  r.error = err;
  return r;
}

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

inline std::string format_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

// Globally adaptive bisection on [a, b]. Tolerance is met when the summed
// panel error drops below max(abs_tol, rel_tol * |value|), or when the
// estimate has reached the summed roundoff floor of the panel rule.
template <class F>
AdaptiveResult integrate_adaptive(const F& f, double a, double b,
                                  double rel_tol, double abs_tol,
                                  int max_panels) {
  struct Panel {
    double a, b, value, error, absint;
  };
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  std::vector<Panel> panels;
  panels.reserve(64);
  PanelResult first = gk15(f, a, b);
  panels.push_back({a, b, first.value, first.error, first.abs_integral});

  const auto sums = [&panels] {
    double total = 0.0, err = 0.0, absint = 0.0;
    for (const Panel& p : panels) {
      total += p.value;
      err += p.error;
      absint += p.absint;
    }
    return std::array<double, 3>{total, err, absint};
  };
  const auto converged = [&](double total, double err, double absint) {
    return err <= std::max({abs_tol, rel_tol * std::abs(total),
                            100.0 * kEps * absint});
  };

  double total = first.value;
  double total_err = first.error;
  double total_absint = first.abs_integral;

  while (static_cast<int>(panels.size()) < max_panels) {
    if (converged(total, total_err, total_absint)) break;

    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i)
      if (panels[i].error > panels[worst].error) worst = i;

    const Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) break;  // panel width at rounding limit

    PanelResult left = gk15(f, p.a, mid);
    PanelResult right = gk15(f, mid, p.b);
    panels[worst] = {p.a, mid, left.value, left.error, left.abs_integral};
    panels.push_back({mid, p.b, right.value, right.error,
                      right.abs_integral});

    total += left.value + right.value - p.value;
    total_err += left.error + right.error - p.error;
    total_absint += left.abs_integral + right.abs_integral - p.absint;
  }

  // Recompute the sums to shed the incremental-update drift.
  const auto [sum_total, sum_err, sum_absint] = sums();

  AdaptiveResult out;
  out.value = sum_total;
  out.error = sum_err;
  out.panels = static_cast<int>(panels.size());
  if (!converged(sum_total, sum_err, sum_absint))
    throw ConvergenceError(
        "adaptive quadrature: panel budget exhausted with error estimate " +
        format_sci(sum_err) + " above tolerance");
  return out;
}

}  // namespace defectlab::detail
