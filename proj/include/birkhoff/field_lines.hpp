#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "birkhoff/curvature.hpp"

namespace birkhoff {

enum class FlowKind { principal_1, principal_2, asymptotic_a, asymptotic_b };
enum class StopReason {
  length_reached,
  umbilic_encountered,
  domain_exit,
  direction_undefined,
  definite_region
};

std::string_view to_string(FlowKind kind);
std::string_view to_string(StopReason reason);

struct FlowOptions {
  /// Minkowski length of one RK4 step.
  double step = 1e-3;
  double max_length = 1.0;
  /// Stop once |lambda1 - lambda2| falls below this multiple of the umbilic band.
  double umbilic_stop_factor = 10.0;
  CurvatureOptions curvature{};
};

struct FlowlineTrace {
  FlowKind which = FlowKind::principal_1;
  /// Chart coordinates; periodic coordinates are wrapped into the domain.
  std::vector<Vec2> points;
  /// lambda_which at each point (principal traces only).
  std::vector<double> lambdas;
  /// One entry per step. Principal: |d eta - lambda df| / |df|.
  /// Asymptotic: |k(chord)| at the chord midpoint.
  std::vector<double> residuals;
  StopReason stop_reason = StopReason::length_reached;
  double length = 0.0;

  double max_residual() const;
};

/// RK4 on the Minkowski-unit principal field with sign alignment between stages.
/// Throws UmbilicStart when q0 is umbilic.
FlowlineTrace integrate_curvature_line(const NormModel& norm, const SurfaceChart& chart,
                                       const Vec2& q0, FlowKind which,
                                       const FlowOptions& opts = {});

/// RK4 on one root branch of h(X, X) = 0. Throws DefiniteRegion when h is definite
/// at q0; a trace entering a definite region stops with that reason.
FlowlineTrace integrate_asymptotic_curve(const NormModel& norm, const SurfaceChart& chart,
                                         const Vec2& q0, FlowKind branch,
                                         const FlowOptions& opts = {});

struct CoercivityOptions {
  double tol = 1e-3;
  /// Minkowski half-length of the short traces used for differencing.
  double fd_length = 1e-2;
  /// Substeps per short trace.
  int substeps = 4;
  CurvatureOptions curvature{};
};

struct CoercivityReport {
  /// V1-component of D_{V1} V2 in the frame {V1, V2, eta}.
  double proj = 0.0;
  bool applicable = false;
  /// Derivative of proj along the V2 trajectory (set when applicable).
  std::optional<double> proj_derivative;
  /// Same derivative with halved differencing length.
  std::optional<double> proj_derivative_refined;
};

/// Throws UmbilicPoint when q is umbilic.
CoercivityReport coercivity_diagnostic(const NormModel& norm, const SurfaceChart& chart,
                                       const Vec2& q, const CoercivityOptions& opts = {});

struct ContactReport {
  Vec3 p_star = Vec3::Zero();
  Vec2 q_star = Vec2::Zero();
  std::size_t chart_index = 0;
  double r_star = 0.0;
  double K_at_p = 0.0;
  /// K(p_star) r_star^2; at least 1 for a closed surface.
  double product = 0.0;
};

/// Smallest origin-centered Minkowski ball containing a closed surface, by a grid
/// maximum of F over every atlas chart refined with local Newton steps.
/// Throws OpenSurface for non-closed families.
ContactReport enclosing_ball_contact(const NormModel& norm, const SurfaceChart& chart,
                                     int nu = 40, int nv = 40,
                                     const CurvatureOptions& opts = {});

}  // namespace birkhoff
