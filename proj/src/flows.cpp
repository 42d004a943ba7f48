#include "defectlab/flows.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "defectlab/errors.hpp"
#include "detail/gauss_kronrod.hpp"
#include "detail/gauss_legendre.hpp"

namespace defectlab::flows {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;
constexpr int kOverlapOrder = 96;  // tensor rule order; ~1e-12 relative

double norm2d(Vec2 v) { return std::hypot(v.x, v.y); }

double principal_in_2pi(Vec2 p) {
  double a = std::atan2(p.y, p.x);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

// Unnormalized profile as a function of squared distance.
double profile_sq_arg(double d2, double rho) {
  const double u2 = d2 / (rho * rho);
  if (u2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u2));
}

// L2 normalization integral of the unit-radius profile squared:
// 2 pi int_0^1 exp(-2/(1-u^2)) u du.
double profile_norm_integral() {
  static const double value = [] {
    auto r = detail::integrate_adaptive(
        [](double u) {
          const double w = 1.0 - u * u;
          return w > 0.0 ? std::exp(-2.0 / w) * u : 0.0;
        },
        0.0, 1.0, 1e-13, 0.0, 2000);
    return kTwoPi * r.value;
  }();
  return value;
}

const detail::GaussLegendreRule& overlap_rule() {
  static const detail::GaussLegendreRule rule =
      detail::gauss_legendre(kOverlapOrder);
  return rule;
}

// Integral of the two normalized profiles, bump j displaced by e relative to
// bump i, over the intersection of the two support boxes.
double overlap_integral(Vec2 e, double rho_i, double rho_j) {
  const double lo_x = std::max(-rho_i, e.x - rho_j);
  const double hi_x = std::min(rho_i, e.x + rho_j);
  const double lo_y = std::max(-rho_i, e.y - rho_j);
  const double hi_y = std::min(rho_i, e.y + rho_j);
  if (!(lo_x < hi_x && lo_y < hi_y)) return 0.0;

  const auto& rule = overlap_rule();
  const double cx = 0.5 * (lo_x + hi_x), hx = 0.5 * (hi_x - lo_x);
  const double cy = 0.5 * (lo_y + hi_y), hy = 0.5 * (hi_y - lo_y);

  double sum = 0.0;
  for (int a = 0; a < kOverlapOrder; ++a) {
    const double x = cx + hx * rule.nodes[a];
    double row = 0.0;
    for (int b = 0; b < kOverlapOrder; ++b) {
      const double y = cy + hy * rule.nodes[b];
      const double dx = x - e.x, dy = y - e.y;
      row += rule.weights[b] * profile_sq_arg(x * x + y * y, rho_i) *
             profile_sq_arg(dx * dx + dy * dy, rho_j);
    }
    sum += rule.weights[a] * row;
  }
  const double i2 = profile_norm_integral();
  return sum * hx * hy / (rho_i * rho_j * i2);
}

double clearance_margin(Vec2 from, Vec2 to) {
  return 1e-9 * std::max({1.0, norm2d(from), norm2d(to)});
}

long mod_sheets(long sheet, const CoverSpec& cover) {
  if (!cover.is_finite()) return sheet;
  const long n = cover.sheets();
  return ((sheet % n) + n) % n;
}

// Integer deck offset separating bump j from bump i: 0 means the two
// supports live on the same local sheet.
long deck_offset(Vec2 pos_i, long sheet_i, Vec2 pos_j, long sheet_j) {
  const double theta_i = principal_in_2pi(pos_i) + kTwoPi * sheet_i;
  const double theta_j = principal_in_2pi(pos_j) + kTwoPi * sheet_j;
  const auto cont = cover::continue_angle(pos_i, pos_j, 0.0);
  const double raw = (theta_j - theta_i - cont.delta_theta) / kTwoPi;
  const double rounded = std::round(raw);
  if (std::abs(raw - rounded) > 1e-6)
    throw ToleranceError("deck offset did not land on an integer");
  return static_cast<long>(rounded);
}

struct LegResult {
  double delta_theta;
  Vec2 end;
};

// One axis-parallel transport leg of bump i, with the swept-support
// (capsule) clearance test.
LegResult transport_leg(Vec2 from, int axis, double amount, double radius,
                        std::size_t bump_index, const char* op) {
  const Vec2 to = axis == 1 ? Vec2{from.x + amount, from.y}
                            : Vec2{from.x, from.y + amount};
  try {
    const auto cont =
        cover::continue_angle(from, to, radius + clearance_margin(from, to));
    return {cont.delta_theta, to};
  } catch (const PunctureError&) {
    throw PunctureError(std::string(op) + ": bump #" +
                        std::to_string(bump_index) +
                        " swept support violates the puncture clearance");
  }
}

}  // namespace

StateFn::StateFn(CoverSpec cover, const std::vector<Bump>& bumps)
    : cover_(cover) {
  locals_.reserve(bumps.size());
  sheets_.reserve(bumps.size());
  radii_.reserve(bumps.size());
  weights_.reserve(bumps.size());
  for (std::size_t i = 0; i < bumps.size(); ++i) {
    const Bump& b = bumps[i];
    if (!(b.center.cover() == cover))
      throw DomainError("StateFn: bump #" + std::to_string(i) +
                        " lives on a different cover");
    if (!(b.radius > 0.0))
      throw DomainError("StateFn: bump #" + std::to_string(i) +
                        " needs radius > 0");
    if (!(b.center.r() > b.radius))
      throw DomainError("StateFn: bump #" + std::to_string(i) +
                        " support reaches the puncture (center.r <= radius)");
    if (!std::isfinite(b.weight.real()) || !std::isfinite(b.weight.imag()))
      throw DomainError("StateFn: bump weight must be finite");
    locals_.push_back(b.center.planar());
    sheets_.push_back(b.center.sheet());
    radii_.push_back(b.radius);
    weights_.push_back(b.weight);
  }
}

Bump StateFn::bump(std::size_t i) const {
  const Vec2 pos = locals_[i] + offset_;
  return Bump{SurfacePoint::from_parts(norm2d(pos), principal_in_2pi(pos),
                                       sheets_[i], cover_),
              radii_[i], weights_[i]};
}

std::vector<Bump> StateFn::bumps() const {
  std::vector<Bump> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(bump(i));
  return out;
}

StateFn translate_state(const StateFn& f, int axis, double t) {
  if (axis != 1 && axis != 2)
    throw DomainError("translate_state: axis must be 1 or 2");
  StateFn out = f;
  out.offset_ = axis == 1 ? Vec2{f.offset_.x + t, f.offset_.y}
                          : Vec2{f.offset_.x, f.offset_.y + t};
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec2 from = f.locals_[i] + f.offset_;
    const LegResult leg =
        transport_leg(from, axis, t, f.radii_[i], i, "translate_state");
    const double theta_before =
        principal_in_2pi(from) + kTwoPi * static_cast<double>(f.sheets_[i]);
    const double theta_total = theta_before + leg.delta_theta;
    const double rem = principal_in_2pi(leg.end);
    const double sheets_f = std::round((theta_total - rem) / kTwoPi);
    if (std::abs(theta_total - (rem + kTwoPi * sheets_f)) > 1e-9)
      throw ToleranceError("translate_state: inconsistent angle continuation");
    out.sheets_[i] = mod_sheets(static_cast<long>(sheets_f), f.cover_);
  }
  return out;
}

std::complex<double> inner_product(const StateFn& f, const StateFn& g) {
  if (!(f.cover_ == g.cover_))
    throw DomainError("inner_product: states live on different covers");
  const Vec2 frame = g.offset_ - f.offset_;
  std::complex<double> total{0.0, 0.0};
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec2 pos_i = f.locals_[i] + f.offset_;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Vec2 e = (g.locals_[j] - f.locals_[i]) + frame;
      if (norm2d(e) >= f.radii_[i] + g.radii_[j]) continue;
      const Vec2 pos_j = g.locals_[j] + g.offset_;
      const long deck =
          deck_offset(pos_i, f.sheets_[i], pos_j, g.sheets_[j]);
      if (mod_sheets(deck, f.cover_) != 0) continue;
      total += std::conj(f.weights_[i]) * g.weights_[j] *
               overlap_integral(e, f.radii_[i], g.radii_[j]);
    }
  }
  return total;
}

double norm(const StateFn& f) {
  const double n2 = inner_product(f, f).real();
  return std::sqrt(std::max(0.0, n2));
}

StateFn commutator_apply(const StateFn& f, double s, double t) {
  struct Leg {
    int axis;
    double amount;
  };
  const Leg legs[4] = {{2, -t}, {1, -s}, {2, t}, {1, s}};

  StateFn out = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    Vec2 pos = f.locals_[i] + f.offset_;
    double delta = 0.0;
    for (const Leg& leg : legs) {
      const LegResult r = transport_leg(pos, leg.axis, leg.amount,
                                        f.radii_[i], i, "commutator_apply");
      delta += r.delta_theta;
      pos = r.end;
    }
    const double w = delta / kTwoPi;
    const double rounded = std::round(w);
    if (std::abs(w - rounded) > 1e-9)
      throw ToleranceError(
          "commutator_apply: traced loop winding is not an integer");
    out.sheets_[i] =
        mod_sheets(f.sheets_[i] + static_cast<long>(rounded), f.cover_);
  }
  return out;
}

SheetSeparation sheet_separation(const StateFn& f, double s, double t) {
  // A = U1(s) U2(t) f applies the axis-2 translation first.
  const StateFn a = translate_state(translate_state(f, 2, t), 1, s);
  const StateFn b = translate_state(translate_state(f, 1, s), 2, t);

  SheetSeparation out;
  out.shift_ab.resize(f.size());
  out.shift_ba.resize(f.size());

  struct Leg {
    int axis;
    double amount;
  };
  const Leg path_a[2] = {{2, t}, {1, s}};
  const Leg path_b[2] = {{1, s}, {2, t}};

  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec2 start = f.locals_[i] + f.offset_;
    const double theta0 =
        principal_in_2pi(start) + kTwoPi * static_cast<double>(f.sheets_[i]);
    for (int which = 0; which < 2; ++which) {
      const Leg* path = which == 0 ? path_a : path_b;
      Vec2 pos = start;
      double delta = 0.0;
      for (int k = 0; k < 2; ++k) {
        const LegResult r = transport_leg(pos, path[k].axis, path[k].amount,
                                          f.radii_[i], i, "sheet_separation");
        delta += r.delta_theta;
        pos = r.end;
      }
      const double rem = principal_in_2pi(pos);
      const double raw = std::round((theta0 + delta - rem) / kTwoPi);
      const long shift = static_cast<long>(raw) - f.sheets_[i];
      (which == 0 ? out.shift_ab : out.shift_ba)[i] = shift;
    }
  }

  out.orthogonal = inner_product(a, b) == std::complex<double>{0.0, 0.0};
  return out;
}

}  // namespace defectlab::flows
