#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "defectlab/cover.hpp"

namespace defectlab::flows {

using cover::CoverSpec;
using cover::SurfacePoint;
using cover::Vec2;

/// One smooth compactly supported bump on the surface. The radial profile is
/// the standard mollifier exp(-1/(1 - (d/radius)^2)), scaled so the bump has
/// unit L2 norm at weight 1. Its support disk must avoid the puncture:
/// center.r > radius.
struct Bump {
  SurfacePoint center;
  double radius;
  std::complex<double> weight;
};

struct SheetSeparation;

/// Finite bump list modelling an element of L2 of the cover. Translations
/// act by transporting centers; the bumps' mutual planar geometry is stored
/// relative to a shared frame offset so transport preserves it bit for bit.
class StateFn {
 public:
  StateFn(CoverSpec cover, const std::vector<Bump>& bumps);

  const CoverSpec& cover() const { return cover_; }
  std::size_t size() const { return locals_.size(); }
  Bump bump(std::size_t i) const;
  std::vector<Bump> bumps() const;

  /// Exact representation equality (frame offset, per-bump geometry, sheets,
  /// weights). This is the "bit-exact" comparison used by the commutator
  /// triviality checks.
  bool operator==(const StateFn&) const = default;

 private:
  friend StateFn translate_state(const StateFn&, int, double);
  friend std::complex<double> inner_product(const StateFn&, const StateFn&);
  friend StateFn commutator_apply(const StateFn&, double, double);
  friend SheetSeparation sheet_separation(const StateFn&, double, double);

  CoverSpec cover_;
  Vec2 offset_;                 // shared planar frame offset
  std::vector<Vec2> locals_;    // planar centers relative to the offset
  std::vector<long> sheets_;    // canonical sheet indices
  std::vector<double> radii_;
  std::vector<std::complex<double>> weights_;
};

/// Lifted translation U_axis(t): supports move by +t e_axis. Every bump's
/// swept support (its disk Minkowski-summed with the segment) must clear the
/// puncture; violations raise PunctureError naming the bump.
StateFn translate_state(const StateFn& f, int axis, double t);

/// L2 inner product, antilinear in the first argument. Bump pairs supported
/// on different sheets contribute exactly 0; same-sheet overlapping pairs are
/// integrated with a fixed-order 2D tensor Gauss-Legendre rule.
std::complex<double> inner_product(const StateFn& f, const StateFn& g);

double norm(const StateFn& f);

/// C(s,t) = U1(s) U2(t) U1(-s) U2(-t). The planar projection of every bump
/// returns to its start exactly; the only state change is the deck shift by
/// the winding of the traced rectangle, applied as integer sheet arithmetic.
StateFn commutator_apply(const StateFn& f, double s, double t);

/// Sheet bookkeeping for the two orders A = U1(s) U2(t) f, B = U2(t) U1(s) f.
struct SheetSeparation {
  std::vector<long> shift_ab;  // per-bump sheet displacement under A
  std::vector<long> shift_ba;  // per-bump sheet displacement under B
  bool orthogonal;             // <A f, B f> == 0
};

SheetSeparation sheet_separation(const StateFn& f, double s, double t);

}  // namespace defectlab::flows
