#pragma once

#include <vector>

namespace defectlab::cover {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }

/// N-fold or infinity-fold covering of the punctured plane.
class CoverSpec {
 public:
  static CoverSpec finite(int n_sheets);
  static CoverSpec infinite() { return CoverSpec(0); }
  bool is_finite() const { return n_ > 0; }
  int sheets() const;  // finite covers only
  bool operator==(const CoverSpec&) const = default;

 private:
  explicit CoverSpec(int n) : n_(n) {}
  int n_ = 0;  // 0 encodes the infinite cover
};

/// Point on the cover: radius r > 0 and a lifted angle. Stored internally as
/// (theta_rem in [0, 2 pi), sheet), so that deck transformations are integer
/// arithmetic; theta_lift = theta_rem + 2 pi sheet. On Finite(N) the sheet
/// index is kept canonical in [0, N), i.e. theta_lift is reduced mod 2 pi N.
class SurfacePoint {
 public:
  SurfacePoint(double r, double theta_lift, CoverSpec cover);
  static SurfacePoint from_parts(double r, double theta_rem, long sheet,
                                 CoverSpec cover);

  double r() const { return r_; }
  double theta_lift() const;
  double theta_rem() const { return theta_rem_; }
  long sheet() const { return sheet_; }
  const CoverSpec& cover() const { return cover_; }
  Vec2 planar() const;

  bool operator==(const SurfacePoint&) const = default;

 private:
  SurfacePoint(double r, double theta_rem, long sheet, CoverSpec cover)
      : r_(r), theta_rem_(theta_rem), sheet_(sheet), cover_(cover) {}
  double r_;
  double theta_rem_;  // [0, 2 pi)
  long sheet_;
  CoverSpec cover_;
};

struct AngleContinuation {
  double delta_theta = 0.0;    // continuous angle change along the segment
  double min_clearance = 0.0;  // closest approach of the segment to 0
};

/// Continuous angle continuation along the straight segment from -> to.
/// Subdivides until every step subtends less than pi/2 at the origin.
/// Throws PunctureError when the segment comes within `clearance` of the
/// origin.
AngleContinuation continue_angle(Vec2 from, Vec2 to, double clearance);

struct LiftResult {
  SurfacePoint endpoint;
  double delta_theta;     // endpoint.theta_lift (pre-reduction) - start
  double min_clearance;
};

/// Lift of the planar translation by t along coordinate axis 1 or 2,
/// starting at p. The planar segment must keep `clearance` distance from
/// the puncture.
LiftResult lift_translation(const SurfacePoint& p, int axis, double t,
                            double clearance);

/// Net winding of a closed polygonal loop (first vertex == last) around the
/// origin. The accumulated angle must land on an integer multiple of 2 pi to
/// within 1e-9 x 2 pi.
int winding_of_loop(const std::vector<Vec2>& vertices, double clearance);

}  // namespace defectlab::cover
