#include "birkhoff/norm_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "birkhoff/error.hpp"

namespace birkhoff {

namespace {

void require_nonzero(const Vec3& x) {
  if (!(x.norm() >= kZeroVectorThreshold)) {
    throw Error(Errc::zero_vector, "Minkowski functional evaluated at the origin");
  }
}

// F(x) = sqrt(x^T G x) for symmetric positive definite G.
NormJet quadratic_form_jet(const Mat3& G, const Vec3& x) {
  NormJet j;
  const Vec3 Gx = G * x;
  j.value = std::sqrt(x.dot(Gx));
  j.grad = Gx / j.value;
  j.hess = G / j.value - (Gx * Gx.transpose()) / (j.value * j.value * j.value);
  return j;
}

std::string describe(const Vec3& v) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << v.x() << ", " << v.y() << ", " << v.z() << ")";
  return os.str();
}

}  // namespace

std::string_view to_string(NormFamily family) {
  switch (family) {
    case NormFamily::euclidean: return "euclidean";
    case NormFamily::ellipsoid: return "ellipsoid";
    case NormFamily::quartic: return "quartic";
  }
  return "unknown";
}

NormModel NormModel::euclidean() { return NormModel{}; }

NormModel NormModel::ellipsoid(const Mat3& A) {
  Eigen::FullPivLU<Mat3> lu(A);
  if (!lu.isInvertible()) {
    throw Error(Errc::validation_error, "ellipsoid norm matrix must be invertible");
  }
  NormModel m;
  m.family_ = NormFamily::ellipsoid;
  m.A_ = A;
  m.gram_ = A.transpose() * A;
  const Mat3 Ainv = lu.inverse();
  m.dual_gram_ = Ainv * Ainv.transpose();
  return m;
}

NormModel NormModel::quartic(double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw Error(Errc::validation_error, "eps: quartic norm requires eps >= 0");
  }
  NormModel m;
  m.family_ = NormFamily::quartic;
  m.eps_ = eps;
  return m;
}

double NormModel::value(const Vec3& x) const {
  require_nonzero(x);
  switch (family_) {
    case NormFamily::euclidean: return x.norm();
    case NormFamily::ellipsoid: return std::sqrt(x.dot(gram_ * x));
    case NormFamily::quartic: {
      const double s = x.squaredNorm();
      const double q = s * s + eps_ * x.array().pow(4).sum();
      return std::sqrt(std::sqrt(q));
    }
  }
  return 0.0;
}

NormJet NormModel::jet(const Vec3& x) const {
  require_nonzero(x);
  switch (family_) {
    case NormFamily::euclidean: return quadratic_form_jet(Mat3::Identity(), x);
    case NormFamily::ellipsoid: return quadratic_form_jet(gram_, x);
    case NormFamily::quartic: {
      // F = Q^(1/4), Q = s^2 + eps * sum x_i^4, s = |x|^2
      const double s = x.squaredNorm();
      const Vec3 x2 = x.array().square();
      const Vec3 x3 = x.array().cube();
      const double q = s * s + eps_ * x2.squaredNorm();
      const Vec3 dq = 4.0 * s * x + 4.0 * eps_ * x3;
      const Mat3 d2q = 4.0 * s * Mat3::Identity() + 8.0 * x * x.transpose() +
                       Mat3(12.0 * eps_ * x2.asDiagonal());
      const double f = std::sqrt(std::sqrt(q));
      const double q34 = f * f * f;  // q^(3/4)
      NormJet j;
      j.value = f;
      j.grad = dq / (4.0 * q34);
      j.hess = d2q / (4.0 * q34) - (3.0 / 16.0) * (dq * dq.transpose()) / (q34 * q);
      return j;
    }
  }
  return {};
}

std::optional<NormJet> NormModel::dual_jet(const Vec3& v) const {
  if (!has_dual()) return std::nullopt;
  require_nonzero(v);
  return quadratic_form_jet(dual_gram_, v);
}

NormJet norm_jet(const NormModel& model, const Vec3& x) { return model.jet(x); }

bool is_birkhoff_orthogonal(const NormModel& model, const Vec3& v, const Vec3& a,
                            const Vec3& b, double tol) {
  if (a.cross(b).norm() <= 1e-14 * std::max(1.0, a.norm() * b.norm())) {
    throw Error(Errc::degenerate_plane, "spanning vectors are parallel");
  }
  const double f = model.value(v);
  const Vec3 n = model.jet(v / f).grad.normalized();
  return std::abs(n.dot(a.normalized())) <= tol && std::abs(n.dot(b.normalized())) <= tol;
}

Mat32 tangent_basis(const Vec3& v) {
  const Vec3 n = v.normalized();
  Eigen::Index axis = 0;
  n.cwiseAbs().minCoeff(&axis);
  const Vec3 e = Vec3::Unit(axis);
  Mat32 basis;
  basis.col(0) = (e - e.dot(n) * n).normalized();
  basis.col(1) = n.cross(Vec3(basis.col(0)));
  return basis;
}

SupportMapResult support_point(const NormModel& model, const Vec3& v,
                               const SupportOptions& opts) {
  if (std::abs(v.norm() - 1.0) > opts.unit_tol) {
    throw Error(Errc::not_unit, "support_point needs a Euclidean-unit normal, got " +
                                    describe(v));
  }
  SupportMapResult r;
  r.v = v;
  r.basis = tangent_basis(v);

  if (auto dual = model.dual_jet(v)) {
    r.u = dual->grad;
    r.mu = 1.0 / dual->value;
    return r;
  }

  using Vec4 = Eigen::Vector4d;
  using Mat4 = Eigen::Matrix4d;
  auto residual = [&](const Vec3& x, double mu) {
    const NormJet j = model.jet(x);
    Vec4 res;
    res.head<3>() = j.grad - mu * v;
    res(3) = j.value - 1.0;
    return res;
  };

  Vec3 x = v / model.value(v);
  double mu = model.jet(x).grad.dot(v);
  Vec4 res = residual(x, mu);
  double rnorm = res.norm();
  bool converged = rnorm <= opts.residual_tol;
  int it = 0;
  // One extra step after reaching the tolerance brings the iterate to rounding level.
  for (int polish = converged ? 1 : 0; it < opts.max_iter && polish < 2; ++it) {
    const NormJet j = model.jet(x);
    Mat4 J = Mat4::Zero();
    J.topLeftCorner<3, 3>() = j.hess;
    J.topRightCorner<3, 1>() = -v;
    J.bottomLeftCorner<1, 3>() = j.grad.transpose();
    const Vec4 step = J.fullPivLu().solve(-res);
    if (!step.allFinite()) break;

    double t = 1.0;
    Vec3 xn;
    double mun = mu;
    Vec4 resn;
    bool accepted = false;
    for (int k = 0; k < 30; ++k, t *= 0.5) {
      xn = x + t * step.head<3>();
      mun = mu + t * step(3);
      if (xn.norm() < kZeroVectorThreshold) continue;
      resn = residual(xn, mun);
      if (resn.norm() <= (1.0 - 1e-4 * t) * rnorm) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    x = xn;
    mu = mun;
    res = resn;
    rnorm = res.norm();
    if (rnorm <= opts.residual_tol) {
      converged = true;
      ++polish;
    }
  }
  r.iterations = it;
  if (!converged || !(mu > 0.0) || !(x.dot(v) > 0.0)) {
    throw Error(Errc::no_convergence, "support point Newton solve failed at v = " +
                                          describe(v));
  }
  r.u = x;
  r.mu = mu;
  return r;
}

void fill_support_differential(const NormModel& model, SupportMapResult& r) {
  using Mat4 = Eigen::Matrix4d;
  const NormJet j = model.jet(r.u);
  Mat4 J = Mat4::Zero();
  J.topLeftCorner<3, 3>() = j.hess;
  J.topRightCorner<3, 1>() = -r.v;
  J.bottomLeftCorner<1, 3>() = j.grad.transpose();

  Eigen::JacobiSVD<Mat4> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv(3) > 1e-13 * sv(0))) {
    throw Error(Errc::singular_system,
                "implicit differentiation of the support map is rank-deficient at v = " +
                    describe(r.v));
  }
  Eigen::Matrix<double, 4, 2> rhs = Eigen::Matrix<double, 4, 2>::Zero();
  rhs.topRows<3>() = r.mu * r.basis;
  const Eigen::Matrix<double, 4, 2> sol = svd.solve(rhs);
  r.du = r.basis.transpose() * sol.topRows<3>();
  r.has_du = true;
}

SupportMapResult support_differential(const NormModel& model, const Vec3& v,
                                      const SupportOptions& opts) {
  SupportMapResult r = support_point(model, v, opts);
  fill_support_differential(model, r);
  return r;
}

std::vector<Vec3> sphere_samples(int n) {
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    out.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
  }
  return out;
}

AdmissibilityReport check_admissible(const NormModel& model, int n_samples, double tol) {
  if (n_samples < 1) {
    throw Error(Errc::validation_error, "n_samples: must be >= 1");
  }
  AdmissibilityReport rep;
  rep.min_eigen_du = std::numeric_limits<double>::infinity();
  rep.max_eigen_du = 0.0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (const Vec3& v : sphere_samples(n_samples)) {
    SupportMapResult s;
    try {
      s = support_differential(model, v);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " [admissibility sample " + describe(v) +
                                "]");
    }
    const Mat2 sym = 0.5 * (s.du + s.du.transpose());
    const Vec2 ev = Eigen::SelfAdjointEigenSolver<Mat2>(sym, Eigen::EigenvaluesOnly).eigenvalues();
    rep.min_eigen_du = std::min(rep.min_eigen_du, ev(0));
    rep.max_eigen_du = std::max(rep.max_eigen_du, ev(1));
    // margin against both degenerations: du collapsing or the unit sphere flattening
    const double margin = std::min(ev(0), ev(1) > 0.0 ? 1.0 / ev(1) : 0.0);
    if (margin < worst_margin) {
      worst_margin = margin;
      rep.worst_v = v;
    }
    ++rep.samples;
  }
  rep.min_curvature = rep.max_eigen_du > 0.0 ? 1.0 / rep.max_eigen_du : 0.0;
  rep.pass = rep.min_eigen_du > tol && rep.min_curvature > tol;
  return rep;
}

}  // namespace birkhoff
