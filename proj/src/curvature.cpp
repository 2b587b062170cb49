#include "birkhoff/curvature.hpp"

#include <cmath>

#include "birkhoff/error.hpp"

namespace birkhoff {

namespace {

Mat3 frame_with(const SurfaceJet& j, const Vec3& transversal) {
  Mat3 m;
  m << j.fu, j.fv, transversal;
  return m;
}

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

// Canonical sign: the dominant chart component is positive.
Vec2 canonical_sign(const Vec2& v) {
  Eigen::Index i = 0;
  v.cwiseAbs().maxCoeff(&i);
  return v(i) < 0.0 ? Vec2(-v) : v;
}

double fd_step(const SurfaceChart& chart, const Vec2& q, const CurvatureOptions& opts) {
  const double h = opts.h_fd_scale * chart.domain().diagonal();
  if (!(h > 1e-10 * std::max(1.0, q.cwiseAbs().maxCoeff()))) {
    throw Error(Errc::fd_step_underflow, "finite-difference step below resolution");
  }
  return h;
}

void require_admissible_at(const SupportMapResult& s, double tol) {
  if (tol <= 0.0) return;
  const Vec2 ev = Eigen::SelfAdjointEigenSolver<Mat2>(0.5 * (s.du + s.du.transpose()),
                                                      Eigen::EigenvaluesOnly)
                      .eigenvalues();
  if (!(ev(0) > tol) || !(1.0 / ev(1) > tol)) {
    throw Error(Errc::inadmissible_norm,
                "support map differential outside the admissible range at this normal "
                "(min eigenvalue " + std::to_string(ev(0)) + ", max " +
                    std::to_string(ev(1)) + ")");
  }
}

}  // namespace

TangentFrame::TangentFrame(const SurfaceJet& jet) : basis_(jet.frame()), xi_(jet.xi) {
  gram_.compute(basis_.transpose() * basis_);
}

Vec2 TangentFrame::coords(const Vec3& w) const { return gram_.solve(basis_.transpose() * w); }

Vec3 birkhoff_normal(const NormModel& norm, const SurfaceJet& jet, const SupportOptions& opts) {
  return support_point(norm, jet.xi, opts).u;
}

ShapeDifferential shape_differential(const NormModel& norm, const SurfaceChart& chart,
                                     const Vec2& q, const CurvatureOptions& opts) {
  ShapeDifferential out;
  const double h = fd_step(chart, q, opts);
  out.h_fd = h;
  const SurfaceJet j = jet(chart, q);
  const Vec3 eta = birkhoff_normal(norm, j, opts.support);

  auto eta_at = [&](const Vec2& x) {
    return birkhoff_normal(norm, jet_unchecked(chart, x), opts.support);
  };
  auto xi_at = [&](const Vec2& x) { return jet_unchecked(chart, x).xi; };

  const Eigen::PartialPivLU<Mat3> eta_frame(frame_with(j, eta));
  const Eigen::PartialPivLU<Mat3> xi_frame(frame_with(j, j.xi));
  const std::array<Vec3, 2> partials{j.fu, j.fv};
  for (int c = 0; c < 2; ++c) {
    const Vec3 deta = central_difference(eta_at, q, c, h);
    const Vec3 ce = eta_frame.solve(deta);
    out.d_eta.col(c) = ce.head<2>();
    out.tau_residual =
        std::max(out.tau_residual, std::abs(ce(2)) * eta.norm() / partials[c].norm());

    const Vec3 dxi = central_difference(xi_at, q, c, h);
    out.d_xi.col(c) = xi_frame.solve(dxi).head<2>();
  }

  const Mat32 B = j.frame();
  const Mat2 G = B.transpose() * B;
  Mat2 b;
  b << j.fuu.dot(j.xi), j.fuv.dot(j.xi), j.fuv.dot(j.xi), j.fvv.dot(j.xi);
  out.d_xi_weingarten = -G.ldlt().solve(b);
  return out;
}

GaussDecomposition gauss_decomposition(const SurfaceJet& jet, const Vec3& eta) {
  const Eigen::PartialPivLU<Mat3> lu(frame_with(jet, eta));
  const Vec3 cuu = lu.solve(jet.fuu);
  const Vec3 cuv = lu.solve(jet.fuv);
  const Vec3 cvv = lu.solve(jet.fvv);
  GaussDecomposition g;
  g.h << cuu(2), cuv(2), cuv(2), cvv(2);
  for (int k = 0; k < 2; ++k) g.christoffel[k] << cuu(k), cuv(k), cuv(k), cvv(k);
  return g;
}

Mat2 fundamental_form(const NormModel& norm, const SurfaceChart& chart, const Vec2& q,
                      const CurvatureOptions& opts) {
  const SurfaceJet j = jet(chart, q);
  const Vec3 eta = birkhoff_normal(norm, j, opts.support);
  const double ex = eta.dot(j.xi);
  if (!(ex > 1e-12)) {
    throw Error(Errc::near_tangent_normal, "<eta, xi> vanishes");
  }
  const ShapeDifferential sd = shape_differential(norm, chart, q, opts);
  const Mat32 B = j.frame();
  // h_ij = -<f_j, d xi f_i> / <eta, xi>
  return -(B.transpose() * B * sd.d_xi_weingarten).transpose() / ex;
}

Eigen2 eigen_decompose(const Mat2& m, double disc_clamp) {
  const double half = 0.5 * m.trace();
  const double det = m.determinant();
  double disc = half * half - det;
  const double scale = std::max({1.0, half * half, std::abs(det)});
  if (disc < -disc_clamp * scale) {
    throw Error(Errc::defective_differential,
                "differential has a complex eigenvalue pair (discriminant " +
                    std::to_string(disc) + ")");
  }
  disc = std::max(disc, 0.0);
  const double sq = std::sqrt(disc);
  Eigen2 e;
  e.lambda1 = half + sq;
  e.lambda2 = half - sq;
  auto vector_for = [&](double lam, const Vec2& fallback) {
    const Vec2 a(m(0, 1), lam - m(0, 0));
    const Vec2 b(lam - m(1, 1), m(1, 0));
    const Vec2& best = a.squaredNorm() >= b.squaredNorm() ? a : b;
    const double tiny = 1e-14 * std::max(1.0, m.cwiseAbs().maxCoeff());
    if (best.norm() <= tiny) return fallback;
    return Vec2(best.normalized());
  };
  e.v1 = vector_for(e.lambda1, Vec2::UnitX());
  e.v2 = vector_for(e.lambda2, Vec2::UnitY());
  e.repeated = sq <= 1e-14 * std::sqrt(scale);
  return e;
}

CurvatureReport principal_curvatures(const NormModel& norm, const SurfaceChart& chart,
                                     const Vec2& q, const CurvatureOptions& opts) {
  CurvatureReport r;
  r.jet = jet(chart, q);
  r.support = support_differential(norm, r.jet.xi, opts.support);
  require_admissible_at(r.support, opts.admissible_tol);
  r.eta = r.support.u;

  const double ex = r.eta.dot(r.jet.xi);
  if (!(ex > 1e-12)) {
    throw Error(Errc::near_tangent_normal, "<eta, xi> vanishes");
  }

  const ShapeDifferential sd = shape_differential(norm, chart, q, opts);
  r.d_eta = sd.d_eta;
  r.d_xi = sd.d_xi;
  r.tau_residual = sd.tau_residual;
  r.weingarten_residual = max_abs(sd.d_xi - sd.d_xi_weingarten);

  const Mat32 B = r.jet.frame();
  const Mat2 G = B.transpose() * B;
  r.h_mat = -(G * sd.d_xi_weingarten).transpose() / ex;
  const Mat2 h_fd = -(G * sd.d_xi).transpose() / ex;
  const GaussDecomposition gd = gauss_decomposition(r.jet, r.eta);
  r.h_crosscheck = std::max(max_abs(h_fd - r.h_mat), max_abs(gd.h - r.h_mat));

  const Eigen2 eig = eigen_decompose(r.d_eta, opts.disc_clamp);
  r.lambda1 = eig.lambda1;
  r.lambda2 = eig.lambda2;
  r.K = r.lambda1 * r.lambda2;
  r.H_mean = 0.5 * (r.lambda1 + r.lambda2);
  r.umbilic = std::abs(r.lambda1 - r.lambda2) <=
              opts.umbilic_tol * std::max(1.0, std::abs(r.lambda1) + std::abs(r.lambda2));
  Vec2 e1 = eig.v1;
  Vec2 e2 = eig.v2;
  if (r.umbilic || eig.repeated) {
    e1 = Vec2::UnitX();
    e2 = Vec2::UnitY();
  }
  r.E1 = canonical_sign(e1 / r.ambient(e1).norm());
  r.E2 = canonical_sign(e2 / r.ambient(e2).norm());
  r.E1_ambient = r.ambient(r.E1);
  r.E2_ambient = r.ambient(r.E2);

  r.K_e = (r.h_mat * ex).determinant() / G.determinant();

  const double hn = r.h_mat.norm();
  const double dn = r.d_eta.norm();
  r.selfadj_residual =
      hn * dn > 0.0 ? max_abs(r.h_mat * r.d_eta - r.d_eta.transpose() * r.h_mat) / (hn * dn)
                    : 0.0;

  // Chain rule eta = u o xi in the orthonormal basis of xi^perp.
  const Mat2 M = r.support.basis.transpose() * B;
  const Mat2 Minv = M.inverse();
  const Mat2 deta_o = M * r.d_eta * Minv;
  const Mat2 dxi_o = M * r.d_xi * Minv;
  r.chain_residual = max_abs(deta_o - r.support.du * dxi_o);
  r.det_residual =
      std::abs(r.d_eta.determinant() - r.support.du.determinant() * r.d_xi.determinant());

  const Vec2 hev =
      Eigen::SelfAdjointEigenSolver<Mat2>(0.5 * (r.h_mat + r.h_mat.transpose()),
                                          Eigen::EigenvaluesOnly)
          .eigenvalues();
  const double thresh = opts.rank_tol * hn;
  r.rank_h = (std::abs(hev(0)) > thresh ? 1 : 0) + (std::abs(hev(1)) > thresh ? 1 : 0);
  r.h_definite = r.rank_h == 2 && hev(0) * hev(1) > 0.0;
  return r;
}

double normal_curvature(const CurvatureReport& r, const Vec2& X) {
  const Mat32& E = r.support.basis;
  const Vec2 x = E.transpose() * r.ambient(X);
  const Vec2 y = E.transpose() * r.ambient(r.d_eta * X);
  const Vec2 w = r.support.du.lu().solve(x);
  return w.dot(y) / w.dot(x);
}

double normal_curvature(const NormModel& norm, const SurfaceChart& chart, const Vec2& q,
                        const Vec2& X, const CurvatureOptions& opts) {
  return normal_curvature(principal_curvatures(norm, chart, q, opts), X);
}

AsymptoticDirections asymptotic_directions(const Mat2& h, double rank_tol) {
  const Eigen::SelfAdjointEigenSolver<Mat2> es(0.5 * (h + h.transpose()));
  const Vec2 mu = es.eigenvalues();
  const Mat2 Q = es.eigenvectors();
  const double thresh = rank_tol * h.norm();
  const bool z0 = std::abs(mu(0)) <= thresh;
  const bool z1 = std::abs(mu(1)) <= thresh;
  AsymptoticDirections out;
  if (z0 && z1) {
    out.kind = AsymptoticKind::all;
  } else if (z0 || z1) {
    out.kind = AsymptoticKind::one;
    out.directions.push_back(canonical_sign(Q.col(z0 ? 0 : 1)));
  } else if (mu(0) < 0.0 && mu(1) > 0.0) {
    out.kind = AsymptoticKind::two;
    const double a = std::sqrt(mu(1));
    const double b = std::sqrt(-mu(0));
    out.directions.push_back(canonical_sign((a * Q.col(0) + b * Q.col(1)).normalized()));
    out.directions.push_back(canonical_sign((a * Q.col(0) - b * Q.col(1)).normalized()));
  }
  return out;
}

AsymptoticDirections asymptotic_directions(const CurvatureReport& report, double rank_tol) {
  AsymptoticDirections out = asymptotic_directions(report.h_mat, rank_tol);
  if (out.kind == AsymptoticKind::all) {
    throw Error(Errc::rank_zero, "affine fundamental form vanishes; every direction is asymptotic");
  }
  return out;
}

AsymptoticDirections asymptotic_directions(const NormModel& norm, const SurfaceChart& chart,
                                           const Vec2& q, const CurvatureOptions& opts) {
  const CurvatureReport r = principal_curvatures(norm, chart, q, opts);
  AsymptoticDirections out = asymptotic_directions(r, opts.rank_tol);
  for (Vec2& d : out.directions) d /= norm.value(r.ambient(d));
  return out;
}

Vec2 conjugate_direction(const Mat2& h, const Vec2& X) {
  const Mat2 hs = 0.5 * (h + h.transpose());
  const double scale = hs.norm() * X.squaredNorm();
  if (std::abs(X.dot(hs * X)) <= 1e-12 * scale || scale == 0.0) {
    throw Error(Errc::asymptotic_input, "X is asymptotic; its conjugate is X itself");
  }
  const Vec2 hx = hs * X;
  return canonical_sign(Vec2(-hx.y(), hx.x()).normalized());
}

ConjugateResult conjugate_direction(const NormModel& norm, const SurfaceChart& chart,
                                    const Vec2& q, const Vec2& X, const CurvatureOptions& opts) {
  const CurvatureReport r = principal_curvatures(norm, chart, q, opts);
  ConjugateResult out;
  out.Y = conjugate_direction(r.h_mat, X);
  const double h = fd_step(chart, q, opts);
  const Vec2 Xn = X.normalized();
  auto field = [&](const Vec2& x) {
    const ChartPartials c = chart.evaluate(x);
    return Vec3(c.fu * out.Y.x() + c.fv * out.Y.y());
  };
  // derivative along Xn: difference along a line in chart space
  auto along = [&](double t) { return field(q + t * Xn); };
  const Vec3 dxy = (8.0 * (along(h) - along(-h)) - (along(2 * h) - along(-2 * h))) / (12.0 * h);
  out.tangentiality_residual =
      std::abs(dxy.dot(r.jet.xi)) / (r.ambient(Xn).norm() * r.ambient(out.Y).norm());
  return out;
}

SignReport sign_equivalences(const CurvatureReport& r, double sign_tol) {
  SignReport s;
  s.K_pos = r.K > 0.0;
  s.Ke_pos = r.K_e > 0.0;
  s.h_definite = r.h_definite;
  s.indeterminate = std::abs(r.K) <= sign_tol || std::abs(r.K_e) <= sign_tol;
  s.consistent = s.indeterminate || (s.K_pos == s.Ke_pos && s.Ke_pos == s.h_definite);
  return s;
}

SignReport sign_equivalences(const NormModel& norm, const SurfaceChart& chart, const Vec2& q,
                             double sign_tol, const CurvatureOptions& opts) {
  return sign_equivalences(principal_curvatures(norm, chart, q, opts), sign_tol);
}

}  // namespace birkhoff
