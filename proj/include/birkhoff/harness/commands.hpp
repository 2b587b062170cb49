#pragma once

#include <limits>
#include <string>
#include <vector>

#include "birkhoff/harness/config.hpp"
#include "birkhoff/harness/table.hpp"

namespace birkhoff::harness {

/// One grid point of a curvature sweep. Rows that failed carry NaNs and the error text.
struct FieldRecord {
  double u = 0.0, v = 0.0;
  Vec3 p = Vec3::Constant(std::numeric_limits<double>::quiet_NaN());
  Vec3 xi = p, eta = p;
  double lambda1 = std::numeric_limits<double>::quiet_NaN();
  double lambda2 = lambda1, K = lambda1, H_mean = lambda1, K_e = lambda1;
  bool umbilic = false;
  double tau_residual = lambda1;
  int rank_h = 0;
  std::string error;

  /// Column names, in serialization order.
  static const std::vector<std::string>& fields();
  std::vector<Cell> cells() const;
};

/// Throws InadmissibleNorm when the sampled admissibility check fails
/// (skipped when curvature.admissible_tol is 0).
void require_admissible(const NormModel& norm, const RunConfig& cfg);

/// Row-major sweep (u outer); order and values do not depend on the thread count.
std::vector<FieldRecord> run_curvature_field(const RunConfig& cfg);
Table field_table(const std::vector<FieldRecord>& records);

/// k(X(theta)) on [0, 2 pi) with X(theta) = cos(theta) e1 + sin(theta) e2 for a
/// Euclidean-orthonormal tangent basis, plus lambda1, lambda2 and the section oracle.
Table run_normal_profile(const RunConfig& cfg);

/// Traced normal sections for directions theta in [0, pi), one row per sample.
Table run_sections(const RunConfig& cfg);

/// Curvature lines and asymptotic curves from each start point, one row per point.
Table run_lines(const RunConfig& cfg);

/// Default evaluation point: the configured one or the chart domain center.
Vec2 default_point(const SurfaceChart& chart, const std::optional<Vec2>& point);

}  // namespace birkhoff::harness
