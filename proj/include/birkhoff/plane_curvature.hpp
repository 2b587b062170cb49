#pragma once

#include <vector>

#include "birkhoff/norm_model.hpp"

namespace birkhoff {

/// Point, first and second derivative of a planar curve at one parameter.
struct PlaneCurveJet {
  Vec2 point = Vec2::Zero();
  Vec2 d1 = Vec2::Zero();
  Vec2 d2 = Vec2::Zero();
};

/// The norm restricted to a plane H through the origin. Plane coordinates are
/// taken in the Euclidean-orthonormal basis (b1, b2); the unit circle is
/// parametrized by polar angle, phi(theta) = r(theta) (cos theta, sin theta)
/// with r(theta) = 1 / F(cos theta b1 + sin theta b2).
class PlaneNormModel {
 public:
  PlaneNormModel(NormModel parent, const Vec3& b1, const Vec3& b2)
      : parent_(std::move(parent)), b1_(b1), b2_(b2) {}

  const NormModel& parent() const noexcept { return parent_; }
  const Vec3& b1() const noexcept { return b1_; }
  const Vec3& b2() const noexcept { return b2_; }

  Vec3 embed(const Vec2& x) const { return x.x() * b1_ + x.y() * b2_; }
  double norm(const Vec2& x) const { return parent_.value(embed(x)); }

  double radius(double theta) const;
  PlaneCurveJet phi(double theta) const;

  /// Signed Euclidean curvature of the unit circle (positive: counterclockwise).
  double circle_curvature(double theta) const;

  /// Polar angle theta at which phi'(theta) points along `direction`.
  double theta_for_tangent(const Vec2& direction) const;

  /// Minkowski length of the unit circle between two polar angles (signed).
  double circle_length(double theta0, double theta1) const;

 private:
  NormModel parent_;
  Vec3 b1_;
  Vec3 b2_;
};

/// Restriction to span{a, b}; the basis is Gram-Schmidt of (a, b).
PlaneNormModel restrict_norm(const NormModel& model, const Vec3& a, const Vec3& b);

/// Ordered polyline samples with cumulative Euclidean chord length.
struct PlaneCurveSample {
  std::vector<Vec2> points;
  std::vector<double> arclength;
  std::size_t base_index = 0;
};

/// Builds a sample and its arc-length table; rejects repeated consecutive points.
PlaneCurveSample make_curve_sample(std::vector<Vec2> points, std::size_t base_index);

/// Local polynomial fit at the base point in its tangent-normal frame.
struct LocalCurveFit {
  Vec2 point = Vec2::Zero();
  Vec2 tangent = Vec2::UnitX();  // Euclidean unit, along increasing index
  double curvature = 0.0;        // positive when bending to the left of `tangent`
  std::size_t window = 0;
};

/// Fits over at most `window` points centred on the base index (at least 5).
LocalCurveFit fit_local(const PlaneCurveSample& curve, std::size_t window = 11);

double euclidean_curvature_at(const PlaneCurveSample& curve, std::size_t window = 11);

/// Circular curvature as the ratio of the curve's Euclidean curvature to that
/// of the restricted unit circle where its tangent matches the curve's.
double circular_curvature_ratio(const PlaneNormModel& plane_norm,
                                const PlaneCurveSample& curve, std::size_t window = 11);

/// Circular curvature as dt/ds, where s is Minkowski arc length of the curve and
/// t the Minkowski arc length of the unit circle at the tangent-matching point.
/// The curve is interpolated by a cubic spline and stepped by `h` in Minkowski
/// length on either side of the base point.
double circular_curvature_reparam(const PlaneNormModel& plane_norm,
                                  const PlaneCurveSample& curve, double h = 1e-3);

}  // namespace birkhoff
