#pragma once

#include <vector>

#include "birkhoff/norm_model.hpp"
#include "birkhoff/surface_chart.hpp"

namespace birkhoff {

/// Tunables for the pointwise curvature pipeline.
struct CurvatureOptions {
  /// Finite-difference step as a fraction of the chart domain diagonal.
  double h_fd_scale = 1e-4;
  /// Relative tolerance for the umbilic classification.
  double umbilic_tol = 1e-6;
  /// Discriminants above -disc_clamp * scale^2 count as a repeated root.
  double disc_clamp = 1e-12;
  /// Relative rank threshold for the affine fundamental form.
  double rank_tol = 1e-8;
  /// Local admissibility floor for du at xi(q); 0 disables the check.
  double admissible_tol = 1e-3;
  SupportOptions support{};
};

/// The tangent plane at a jet with coordinate solve for tangent vectors.
class TangentFrame {
 public:
  explicit TangentFrame(const SurfaceJet& jet);

  const Mat32& basis() const noexcept { return basis_; }
  const Vec3& normal() const noexcept { return xi_; }
  Vec3 ambient(const Vec2& coords) const { return basis_ * coords; }
  /// (a, b) with w = a fu + b fv, for w tangent.
  Vec2 coords(const Vec3& w) const;

 private:
  Mat32 basis_;
  Vec3 xi_;
  Eigen::LDLT<Mat2> gram_;
};

/// Birkhoff normal eta = u(xi): F(eta) = 1, eta -| T_pM, <eta, xi> > 0.
Vec3 birkhoff_normal(const NormModel& norm, const SurfaceJet& jet,
                     const SupportOptions& opts = {});

/// Matrices in the chart frame (fu, fv): column j holds the frame coordinates
/// of the derivative along the j-th chart direction.
struct ShapeDifferential {
  Mat2 d_eta = Mat2::Zero();
  Mat2 d_xi = Mat2::Zero();
  /// d_xi from the second fundamental form (Weingarten), for cross-checking.
  Mat2 d_xi_weingarten = Mat2::Zero();
  /// Transversal component of D eta along fu, fv, per unit tangent length.
  double tau_residual = 0.0;
  double h_fd = 0.0;
};

ShapeDifferential shape_differential(const NormModel& norm, const SurfaceChart& chart,
                                     const Vec2& q, const CurvatureOptions& opts = {});

/// Gauss formula with transversal eta: f_ij = Gamma^k_ij f_k + h_ij eta.
struct GaussDecomposition {
  Mat2 h = Mat2::Zero();
  /// christoffel[k](i, j) = Gamma^k_ij.
  std::array<Mat2, 2> christoffel{Mat2::Zero(), Mat2::Zero()};
};

GaussDecomposition gauss_decomposition(const SurfaceJet& jet, const Vec3& eta);

/// h(X, Y) = -<Y, d xi X> / <eta, xi> in the chart frame.
Mat2 fundamental_form(const NormModel& norm, const SurfaceChart& chart, const Vec2& q,
                      const CurvatureOptions& opts = {});

struct CurvatureReport {
  SurfaceJet jet;
  Vec3 eta = Vec3::Zero();
  /// Support map at xi with du in the orthonormal basis of xi^perp.
  SupportMapResult support;

  Mat2 d_eta = Mat2::Zero();
  Mat2 d_xi = Mat2::Zero();
  Mat2 h_mat = Mat2::Zero();

  double lambda1 = 0.0;
  double lambda2 = 0.0;
  Vec2 E1 = Vec2::UnitX();  // chart coordinates
  Vec2 E2 = Vec2::UnitY();
  Vec3 E1_ambient = Vec3::Zero();
  Vec3 E2_ambient = Vec3::Zero();

  double K = 0.0;
  double H_mean = 0.0;
  double K_e = 0.0;

  double tau_residual = 0.0;
  /// |h d_eta - d_eta^T h| relative to |h| |d_eta|.
  double selfadj_residual = 0.0;
  /// |d_eta - du d_xi| entrywise, both in the basis of xi^perp.
  double chain_residual = 0.0;
  /// |det d_eta - det du det d_xi|.
  double det_residual = 0.0;
  /// |h from d_xi - h from the Gauss formula| entrywise.
  double h_crosscheck = 0.0;
  /// |d_xi by finite differences - d_xi by Weingarten| entrywise.
  double weingarten_residual = 0.0;

  int rank_h = 0;
  bool h_definite = false;
  bool umbilic = false;

  Vec3 ambient(const Vec2& X) const { return jet.fu * X.x() + jet.fv * X.y(); }
};

/// Full pointwise report. Throws DefectiveDifferential for a complex spectrum and
/// InadmissibleNorm when du at xi(q) is below opts.admissible_tol.
CurvatureReport principal_curvatures(const NormModel& norm, const SurfaceChart& chart,
                                     const Vec2& q, const CurvatureOptions& opts = {});

/// Real eigen-decomposition of a 2x2 matrix, eigenvalues descending.
struct Eigen2 {
  double lambda1 = 0.0, lambda2 = 0.0;
  Vec2 v1 = Vec2::UnitX(), v2 = Vec2::UnitY();
  bool repeated = false;
};

Eigen2 eigen_decompose(const Mat2& m, double disc_clamp = 1e-12);

/// Minkowski normal curvature <du^-1 X, d eta X> / <du^-1 X, X>; X in chart coordinates.
double normal_curvature(const CurvatureReport& report, const Vec2& X);
double normal_curvature(const NormModel& norm, const SurfaceChart& chart, const Vec2& q,
                        const Vec2& X, const CurvatureOptions& opts = {});

enum class AsymptoticKind { none, one, two, all };

struct AsymptoticDirections {
  AsymptoticKind kind = AsymptoticKind::none;
  std::vector<Vec2> directions;
};

/// Roots of h(X, X) = 0 as unit coordinate vectors. `rank_tol` is relative to |h|.
AsymptoticDirections asymptotic_directions(const Mat2& h, double rank_tol = 1e-8);
/// Chart version: directions scaled to Minkowski length 1. Throws RankZero when
/// every direction is asymptotic.
AsymptoticDirections asymptotic_directions(const CurvatureReport& report,
                                           double rank_tol = 1e-8);
AsymptoticDirections asymptotic_directions(const NormModel& norm, const SurfaceChart& chart,
                                           const Vec2& q, const CurvatureOptions& opts = {});

/// Unit Y with h(X, Y) = 0.
Vec2 conjugate_direction(const Mat2& h, const Vec2& X);

struct ConjugateResult {
  Vec2 Y = Vec2::Zero();
  /// |<D_X Y, xi>| for the constant-coordinate extension of Y, by finite differences.
  double tangentiality_residual = 0.0;
};

ConjugateResult conjugate_direction(const NormModel& norm, const SurfaceChart& chart,
                                    const Vec2& q, const Vec2& X,
                                    const CurvatureOptions& opts = {});

struct SignReport {
  bool K_pos = false;
  bool Ke_pos = false;
  bool h_definite = false;
  bool indeterminate = false;
  /// True when indeterminate or all three agree.
  bool consistent = true;
};

SignReport sign_equivalences(const CurvatureReport& report, double sign_tol = 1e-6);
SignReport sign_equivalences(const NormModel& norm, const SurfaceChart& chart, const Vec2& q,
                             double sign_tol = 1e-6, const CurvatureOptions& opts = {});

/// 4th-order central difference of a vector-valued function along one chart coordinate.
template <typename Fn>
Vec3 central_difference(Fn&& f, const Vec2& q, int coord, double h) {
  Vec2 e = Vec2::Zero();
  e(coord) = h;
  return (8.0 * (f(q + e) - f(q - e)) - (f(q + 2.0 * e) - f(q - 2.0 * e))) / (12.0 * h);
}

}  // namespace birkhoff
