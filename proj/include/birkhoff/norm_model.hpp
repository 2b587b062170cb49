#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "birkhoff/types.hpp"

namespace birkhoff {

/// Value, gradient and Hessian of a Minkowski functional at a point.
struct NormJet {
  double value = 0.0;
  Vec3 grad = Vec3::Zero();
  Mat3 hess = Mat3::Zero();
};

enum class NormFamily { euclidean, ellipsoid, quartic };

std::string_view to_string(NormFamily family);

/// A smooth, strictly convex norm on R^3.
///
/// Three families are built in:
///   euclidean   F(x) = |x|
///   ellipsoid   F(x) = |A x|, A invertible
///   quartic     F(x) = (|x|^4 + eps * (x1^4 + x2^4 + x3^4))^(1/4), eps >= 0
///
/// The first two carry a closed-form dual (support function) F*(v) = |A^{-T} v|,
/// which is used for the support map instead of a Newton solve.
/// Instances are immutable.
class NormModel {
 public:
  static NormModel euclidean();
  static NormModel ellipsoid(const Mat3& A);
  static NormModel quartic(double eps);

  NormFamily family() const noexcept { return family_; }
  const Mat3& matrix() const noexcept { return A_; }
  double eps() const noexcept { return eps_; }

  bool has_dual() const noexcept { return family_ != NormFamily::quartic; }

  /// Minkowski functional only; cheaper than jet().
  double value(const Vec3& x) const;
  NormJet jet(const Vec3& x) const;
  /// Support function F*(v) = max_{F(x)<=1} <x, v> with derivatives.
  /// Only available when has_dual().
  std::optional<NormJet> dual_jet(const Vec3& v) const;

 private:
  NormModel() = default;

  NormFamily family_ = NormFamily::euclidean;
  Mat3 A_ = Mat3::Identity();
  Mat3 gram_ = Mat3::Identity();      // A^T A
  Mat3 dual_gram_ = Mat3::Identity(); // A^{-1} A^{-T}
  double eps_ = 0.0;
};

/// Vectors below this Euclidean length are rejected, never normalized.
inline constexpr double kZeroVectorThreshold = 1e-300;

NormJet norm_jet(const NormModel& model, const Vec3& x);

/// Birkhoff orthogonality v -| span{a, b}: the supporting plane of the unit ball
/// at v / F(v) is parallel to span{a, b}.
bool is_birkhoff_orthogonal(const NormModel& model, const Vec3& v, const Vec3& a,
                            const Vec3& b, double tol = 1e-9);

/// Orthonormal basis of v^perp: the coordinate axis least aligned with v,
/// Gram-Schmidt against v, completed by v x b1.
Mat32 tangent_basis(const Vec3& v);

struct SupportOptions {
  int max_iter = 50;
  double residual_tol = 1e-10;
  double unit_tol = 1e-8;
};

/// Support point of the unit sphere with outer Euclidean normal v, together
/// with the differential of v -> u(v) on v^perp (expressed in `basis`).
struct SupportMapResult {
  Vec3 v = Vec3::Zero();
  Vec3 u = Vec3::Zero();
  double mu = 0.0;  // grad F(u) = mu * v
  Mat2 du = Mat2::Zero();
  Mat32 basis = Mat32::Zero();
  int iterations = 0;
  bool has_du = false;
};

/// u(v) with F(u) = 1, grad F(u) = mu v, mu > 0, <u, v> > 0.
SupportMapResult support_point(const NormModel& model, const Vec3& v,
                               const SupportOptions& opts = {});

/// support_point() plus du by implicit differentiation of
/// {grad F(x) = mu v, F(x) = 1}.
SupportMapResult support_differential(const NormModel& model, const Vec3& v,
                                      const SupportOptions& opts = {});

/// Fills du on an already computed support point.
void fill_support_differential(const NormModel& model, SupportMapResult& result);

struct AdmissibilityReport {
  double min_eigen_du = 0.0;
  double max_eigen_du = 0.0;
  /// Smallest Euclidean principal curvature of the unit sphere, 1 / max_eigen_du.
  double min_curvature = 0.0;
  Vec3 worst_v = Vec3::Zero();
  int samples = 0;
  bool pass = false;
};

/// Deterministic Fibonacci-lattice points on the Euclidean unit sphere.
std::vector<Vec3> sphere_samples(int n);

/// Samples du over the sphere. Passes iff both the smallest eigenvalue of du
/// and the smallest principal curvature of the unit sphere exceed tol.
AdmissibilityReport check_admissible(const NormModel& model, int n_samples,
                                     double tol = 1e-3);

}  // namespace birkhoff
