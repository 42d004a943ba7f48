#include "defectlab/cover.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "defectlab/errors.hpp"

namespace defectlab::cover {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

// Distance from the origin to the segment [a, b].
double segment_clearance(Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double len2 = d.x * d.x + d.y * d.y;
  if (len2 == 0.0) return norm(a);
  const double t = std::clamp(-(a.x * d.x + a.y * d.y) / len2, 0.0, 1.0);
  return norm({a.x + t * d.x, a.y + t * d.y});
}

// Signed angle from u to v, in (-pi, pi].
double signed_angle(Vec2 u, Vec2 v) {
  return std::atan2(u.x * v.y - u.y * v.x, u.x * v.x + u.y * v.y);
}

double principal_in_2pi(Vec2 p) {
  double a = std::atan2(p.y, p.x);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

long sheet_mod(long sheet, const CoverSpec& cover) {
  if (!cover.is_finite()) return sheet;
  const long n = cover.sheets();
  return ((sheet % n) + n) % n;
}

}  // namespace

CoverSpec CoverSpec::finite(int n_sheets) {
  if (n_sheets < 1) throw DomainError("CoverSpec: N >= 1 required");
  return CoverSpec(n_sheets);
}

int CoverSpec::sheets() const {
  if (!is_finite()) throw DomainError("CoverSpec: infinite cover has no N");
  return n_;
}

SurfacePoint::SurfacePoint(double r, double theta_lift, CoverSpec cover)
    : r_(r), theta_rem_(0.0), sheet_(0), cover_(cover) {
  if (!(r > 0.0)) throw DomainError("SurfacePoint: r > 0 required");
  if (!std::isfinite(theta_lift))
    throw DomainError("SurfacePoint: theta_lift must be finite");
  double sheet_f = std::floor(theta_lift / kTwoPi);
  double rem = theta_lift - kTwoPi * sheet_f;
  if (rem < 0.0) {
    rem += kTwoPi;
    sheet_f -= 1.0;
  }
  if (rem >= kTwoPi) {
    rem -= kTwoPi;
    sheet_f += 1.0;
  }
  theta_rem_ = rem;
  sheet_ = sheet_mod(static_cast<long>(sheet_f), cover_);
}

SurfacePoint SurfacePoint::from_parts(double r, double theta_rem, long sheet,
                                      CoverSpec cover) {
  if (!(r > 0.0)) throw DomainError("SurfacePoint: r > 0 required");
  if (!(theta_rem >= 0.0 && theta_rem < kTwoPi))
    throw DomainError("SurfacePoint: theta_rem in [0, 2 pi) required");
  return SurfacePoint(r, theta_rem, sheet_mod(sheet, cover), cover);
}

double SurfacePoint::theta_lift() const {
  return theta_rem_ + kTwoPi * static_cast<double>(sheet_);
}

Vec2 SurfacePoint::planar() const {
  return {r_ * std::cos(theta_rem_), r_ * std::sin(theta_rem_)};
}

AngleContinuation continue_angle(Vec2 from, Vec2 to, double clearance) {
  AngleContinuation out;
  out.min_clearance = segment_clearance(from, to);
  if (out.min_clearance < clearance)
    throw PunctureError("path clearance " + std::to_string(out.min_clearance) +
                        " below required " + std::to_string(clearance));

  // Bisect parameter intervals until each step subtends < pi/2.
  struct Span {
    double t0, t1;
    Vec2 p0, p1;
  };
  const Vec2 d = to - from;
  std::vector<Span> stack{{0.0, 1.0, from, to}};
  double delta = 0.0;
  while (!stack.empty()) {
    const Span s = stack.back();
    stack.pop_back();
    const double step = signed_angle(s.p0, s.p1);
    if (std::abs(step) < kPi / 2.0) {
      delta += step;
      continue;
    }
    const double tm = 0.5 * (s.t0 + s.t1);
    const Vec2 pm{from.x + tm * d.x, from.y + tm * d.y};
    stack.push_back({tm, s.t1, pm, s.p1});
    stack.push_back({s.t0, tm, s.p0, pm});
  }
  out.delta_theta = delta;
  return out;
}

LiftResult lift_translation(const SurfacePoint& p, int axis, double t,
                            double clearance) {
  if (axis != 1 && axis != 2)
    throw DomainError("lift_translation: axis must be 1 or 2");
  if (!(clearance > 0.0))
    throw DomainError("lift_translation: clearance > 0 required");

  const Vec2 from = p.planar();
  const Vec2 to = axis == 1 ? Vec2{from.x + t, from.y} : Vec2{from.x, from.y + t};
  const AngleContinuation cont = continue_angle(from, to, clearance);

  const double theta_total = p.theta_lift() + cont.delta_theta;
  const double rem = principal_in_2pi(to);
  const double sheets_f = std::round((theta_total - rem) / kTwoPi);
  if (std::abs(theta_total - (rem + kTwoPi * sheets_f)) > 1e-9)
    throw ToleranceError("lift_translation: angle continuation inconsistent "
                         "with endpoint angle");
  const long sheet_raw = static_cast<long>(sheets_f);

  LiftResult out{
      SurfacePoint::from_parts(norm(to), rem, sheet_raw, p.cover()),
      (rem + kTwoPi * sheets_f) - p.theta_lift(), cont.min_clearance};
  return out;
}

int winding_of_loop(const std::vector<Vec2>& vertices, double clearance) {
  if (!(clearance > 0.0))
    throw DomainError("winding_of_loop: clearance > 0 required");
  if (vertices.size() < 2)
    throw DomainError("winding_of_loop: need at least two vertices");
  if (!(vertices.front() == vertices.back()))
    throw DomainError("winding_of_loop: open loop, first vertex != last");

  double delta = 0.0;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
    delta += continue_angle(vertices[i], vertices[i + 1], clearance)
                 .delta_theta;

  const double w = delta / kTwoPi;
  const double rounded = std::round(w);
  if (std::abs(w - rounded) >= 1e-9)
    throw ToleranceError("winding_of_loop: accumulated angle " +
                         std::to_string(delta) +
                         " is not an integer multiple of 2 pi");
  return static_cast<int>(rounded);
}

}  // namespace defectlab::cover
