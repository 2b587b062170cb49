#pragma once

#include <vector>

#include "birkhoff/curvature.hpp"
#include "birkhoff/plane_curvature.hpp"

namespace birkhoff {

enum class CircularMethod { ratio, reparam };

struct SectionOptions {
  /// Minkowski length traced on each side of the base point.
  double arc_extent = 0.2;
  /// Minkowski length of one predictor step.
  double step = 1e-3;
  double corrector_tol = 1e-14;
  int max_corrector_iter = 30;
  std::size_t fit_window = 11;
  CircularMethod method = CircularMethod::ratio;
  SupportOptions support{};
};

/// The normal section M cap (p + span{eta(p), X}) near p.
///
/// Plane coordinates use e1 = X / |X| and e2 = the unit component of -eta
/// orthogonal to e1, so a Minkowski sphere bends towards +e2.
struct PlaneSectionCurve {
  Vec3 origin = Vec3::Zero();
  Vec3 eta = Vec3::Zero();
  Vec3 direction = Vec3::Zero();
  Vec3 plane_normal = Vec3::Zero();
  Vec3 e1 = Vec3::Zero();
  Vec3 e2 = Vec3::Zero();

  std::vector<Vec3> samples;
  std::vector<Vec2> chart_points;
  std::vector<Vec2> projected;
  std::size_t base_index = 0;

  double max_plane_residual = 0.0;
  double circ_curvature = 0.0;
};

/// Predictor-corrector march in chart space: predictor along the chart direction
/// whose image is tangent to the plane, Newton corrector on the plane equation
/// along the transverse chart direction.
PlaneSectionCurve trace_section(const NormModel& norm, const SurfaceChart& chart,
                                const Vec2& q, const Vec2& X, const SectionOptions& opts = {});

/// Circular curvature of the traced section in the norm restricted to span{eta, X}.
double oracle_normal_curvature(const NormModel& norm, const SurfaceChart& chart,
                               const Vec2& q, const Vec2& X, const SectionOptions& opts = {});

/// Same, on an already traced section (fills circ_curvature).
double oracle_normal_curvature(const NormModel& norm, PlaneSectionCurve& section,
                               const SectionOptions& opts = {});

}  // namespace birkhoff
