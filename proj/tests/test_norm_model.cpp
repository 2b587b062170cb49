#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "birkhoff/error.hpp"
#include "birkhoff/norm_model.hpp"
#include "support.hpp"

using namespace birkhoff;
using namespace testsupport;

namespace {

const Mat3 kDiag112 = Vec3(1, 1, 2).asDiagonal();

std::vector<NormModel> all_norms() {
  Mat3 A;
  A << 1.0, 0.3, 0.0, -0.2, 1.4, 0.1, 0.0, 0.25, 0.8;
  return {NormModel::euclidean(), NormModel::ellipsoid(kDiag112), NormModel::ellipsoid(A),
          NormModel::quartic(0.05), NormModel::quartic(0.1), NormModel::quartic(2.0)};
}

}  // namespace

// ---- norm_jet ---------------------------------------------------------------

TEST_CASE("norm_jet examples") {
  const NormJet e = norm_jet(NormModel::euclidean(), Vec3(3, 4, 0));
  CHECK(e.value == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(max_abs(e.grad - Vec3(0.6, 0.8, 0.0)) < 1e-15);

  const NormJet q = norm_jet(NormModel::quartic(0.1), Vec3(0, 0, 1));
  CHECK(q.value == doctest::Approx(std::pow(1.1, 0.25)).epsilon(1e-14));
  CHECK(q.value == doctest::Approx(1.024114).epsilon(1e-6));
  // 1D check along the axis: F(t e3) = t (1.1)^(1/4)
  for (double t : {0.3, 1.0, 7.0}) {
    CHECK(quartic_value(0.1, Vec3(0, 0, t)) == doctest::Approx(t * q.value).epsilon(1e-14));
  }

  CHECK(norm_jet(NormModel::ellipsoid(kDiag112), Vec3(0, 0, 1)).value ==
        doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("norm_jet rejects the zero vector") {
  for (const NormModel& n : all_norms()) {
    try {
      norm_jet(n, Vec3::Zero());
      FAIL("expected ZeroVector");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::zero_vector);
    }
  }
}

TEST_CASE("quartic value matches the closed form and reduces to euclidean") {
  for (int i = 0; i < 200; ++i) {
    const Vec3 x = uniform(0.1, 3.0) * random_unit();
    CHECK(NormModel::quartic(0.37).value(x) ==
          doctest::Approx(quartic_value(0.37, x)).epsilon(1e-14));
    CHECK(NormModel::quartic(0.0).value(x) == doctest::Approx(x.norm()).epsilon(1e-14));
  }
}

TEST_CASE("jet derivatives match finite differences") {
  const double h = 1e-5;
  for (const NormModel& n : all_norms()) {
    for (int i = 0; i < 30; ++i) {
      const Vec3 x = uniform(0.5, 2.0) * random_unit();
      const NormJet j = n.jet(x);
      Vec3 g;
      Mat3 H;
      for (int k = 0; k < 3; ++k) {
        const Vec3 e = h * Vec3::Unit(k);
        g(k) = (n.value(x + e) - n.value(x - e)) / (2 * h);
        H.col(k) = (n.jet(x + e).grad - n.jet(x - e).grad) / (2 * h);
      }
      CHECK(max_abs(j.grad - g) < 1e-8);
      CHECK(max_abs(j.hess - H) < 1e-7);
    }
  }
}

TEST_CASE("homogeneity and Euler identities") {
  for (const NormModel& n : all_norms()) {
    for (int i = 0; i < 50; ++i) {
      const Vec3 x = uniform(0.2, 3.0) * random_unit();
      const NormJet j = n.jet(x);
      CHECK(std::abs(j.grad.dot(x) - j.value) < 1e-12 * j.value);
      CHECK(max_abs(j.hess * x) < 1e-11 * (1 + j.hess.norm()));
      for (double t : {0.5, 2.0, 10.0}) {
        const NormJet jt = n.jet(t * x);
        CHECK(std::abs(jt.value - t * j.value) <= 1e-9 * t * j.value);
        CHECK(max_abs(jt.grad - j.grad) <= 1e-9);
        CHECK(max_abs(jt.hess - j.hess / t) <= 1e-9 * (1 + j.hess.norm()));
      }
    }
  }
}

TEST_CASE("strict convexity on the unit sphere") {
  for (const NormModel& n : all_norms()) {
    for (int i = 0; i < 50; ++i) {
      Vec3 x = random_unit();
      x /= n.value(x);
      const NormJet j = n.jet(x);
      // Hess(F^2 / 2) = grad grad^T + F Hess F
      const Mat3 Q = j.grad * j.grad.transpose() + j.value * j.hess;
      CHECK(Eigen::SelfAdjointEigenSolver<Mat3>(Q).eigenvalues().minCoeff() > 0.0);
    }
  }
}

// ---- Birkhoff orthogonality -------------------------------------------------

TEST_CASE("is_birkhoff_orthogonal examples") {
  const Vec3 e1 = Vec3::UnitX(), e2 = Vec3::UnitY(), e3 = Vec3::UnitZ();
  CHECK(is_birkhoff_orthogonal(NormModel::euclidean(), e3, e1, e2));
  CHECK_FALSE(is_birkhoff_orthogonal(NormModel::euclidean(), e3, e1, e1 + e3));
  CHECK(is_birkhoff_orthogonal(NormModel::quartic(0.1), e3, e1, e2));
  // grad F at the axis point is parallel to e3 for the quartic family
  const Vec3 g = NormModel::quartic(0.1).jet(e3).grad;
  CHECK(std::hypot(g.x(), g.y()) < 1e-15);
}

TEST_CASE("is_birkhoff_orthogonal rejects a degenerate plane") {
  try {
    is_birkhoff_orthogonal(NormModel::euclidean(), Vec3::UnitZ(), Vec3::UnitX(),
                           2.0 * Vec3::UnitX());
    FAIL("expected DegeneratePlane");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_plane);
  }
}

TEST_CASE("support points are Birkhoff orthogonal to the tangent plane of the normal") {
  for (const NormModel& n : all_norms()) {
    for (int i = 0; i < 20; ++i) {
      const Vec3 v = random_unit();
      const Mat32 B = tangent_basis(v);
      const Vec3 u = support_point(n, v).u;
      CHECK(is_birkhoff_orthogonal(n, u, B.col(0), B.col(1), 1e-8));
      CHECK_FALSE(is_birkhoff_orthogonal(n, u, B.col(0), (B.col(1) + 0.1 * v).eval(), 1e-8));
    }
  }
}

// ---- support map ------------------------------------------------------------

TEST_CASE("tangent_basis is orthonormal and deterministic") {
  for (int i = 0; i < 50; ++i) {
    const Vec3 v = random_unit();
    const Mat32 B = tangent_basis(v);
    CHECK(max_abs(B.transpose() * B - Mat2::Identity()) < 1e-14);
    CHECK(max_abs(B.transpose() * v) < 1e-14);
    CHECK(B.col(0).cross(B.col(1)).dot(v) > 0.0);
    CHECK(max_abs(tangent_basis(v) - B) == 0.0);
  }
}

TEST_CASE("support_point examples") {
  const SupportMapResult e = support_point(NormModel::euclidean(), Vec3::UnitZ());
  CHECK(max_abs(e.u - Vec3::UnitZ()) < 1e-15);
  CHECK(e.mu == doctest::Approx(1.0));

  const NormModel ell = NormModel::ellipsoid(kDiag112);
  const SupportMapResult a = support_point(ell, Vec3::UnitZ());
  CHECK(max_abs(a.u - Vec3(0, 0, 0.5)) < 1e-14);
  CHECK(ell.value(a.u) == doctest::Approx(1.0).epsilon(1e-14));
  // u = grad F*(v) with F*(v) = |A^{-T} v|
  const Vec3 w = kDiag112.inverse().transpose() * Vec3::UnitZ();
  CHECK(max_abs(a.u - kDiag112.inverse() * w / w.norm()) < 1e-14);

  const SupportMapResult q = support_point(NormModel::quartic(0.1), Vec3::UnitZ());
  CHECK(q.u.z() == doctest::Approx(std::pow(1.1, -0.25)).epsilon(1e-12));
  CHECK(q.u.z() == doctest::Approx(0.976454).epsilon(1e-6));
  CHECK(std::hypot(q.u.x(), q.u.y()) < 1e-14);
  // independent maximization of <x, e3> over the unit sphere
  const Vec3 b = brute_support_point([](const Vec3& x) { return quartic_value(0.1, x); },
                                     Vec3::UnitZ());
  CHECK(max_abs(q.u - b) < 1e-9);
}

TEST_CASE("support_point satisfies its defining conditions") {
  for (const NormModel& n : all_norms()) {
    const double tol = n.has_dual() ? 1e-9 : 1e-7;
    for (const Vec3& v : sphere_samples(200)) {
      const SupportMapResult r = support_point(n, v);
      CHECK(std::abs(n.value(r.u) - 1.0) <= tol);
      CHECK(r.mu > 0.0);
      CHECK(r.u.dot(v) > 0.0);
      CHECK((n.jet(r.u).grad - r.mu * v).norm() <= 1e-9 * r.mu);
    }
  }
}

TEST_CASE("quartic support point agrees with brute-force maximization") {
  const double eps = 0.3;
  for (int i = 0; i < 10; ++i) {
    const Vec3 v = random_unit();
    const Vec3 u = support_point(NormModel::quartic(eps), v).u;
    const Vec3 b = brute_support_point([&](const Vec3& x) { return quartic_value(eps, x); }, v);
    CHECK(max_abs(u - b) < 1e-7);
  }
}

TEST_CASE("support_point preconditions") {
  try {
    support_point(NormModel::quartic(0.1), Vec3(0, 0, 1.01));
    FAIL("expected NotUnit");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_unit);
  }
}

TEST_CASE("quartic support point converges to v as eps shrinks") {
  const std::vector<Vec3> vs = sphere_samples(100);
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.1, 0.01, 0.001}) {
    double worst = 0.0;
    for (const Vec3& v : vs) worst = std::max(worst, (support_point(NormModel::quartic(eps), v).u - v).norm());
    CHECK(worst < prev);
    prev = worst;
  }
  CHECK(prev < 1e-3);
}

// ---- support differential ---------------------------------------------------

TEST_CASE("support_differential examples") {
  for (int i = 0; i < 10; ++i) {
    const SupportMapResult e = support_differential(NormModel::euclidean(), random_unit());
    CHECK(max_abs(e.du - Mat2::Identity()) < 1e-12);
  }

  // Hessian of F*(v) = |diag(1, 1, 1/2) v| at e3 restricted to e3^perp is diag(2, 2).
  const NormModel ell = NormModel::ellipsoid(kDiag112);
  const SupportMapResult a = support_differential(ell, Vec3::UnitZ());
  CHECK(max_abs(a.du - 2.0 * Mat2::Identity()) < 1e-12);
  CHECK(max_abs(a.du - fd_support_du(ell, Vec3::UnitZ())) < 1e-4);

  const NormModel q = NormModel::quartic(0.1);
  const SupportMapResult s = support_differential(q, Vec3::UnitZ());
  CHECK(std::abs(s.du(0, 1) - s.du(1, 0)) < 1e-12);
  CHECK(std::abs(s.du(0, 0) - s.du(1, 1)) < 1e-12);
  CHECK(Eigen::SelfAdjointEigenSolver<Mat2>(s.du).eigenvalues().minCoeff() > 0.0);
  CHECK(max_abs(s.du - fd_support_du(q, Vec3::UnitZ())) < 1e-4);
}

TEST_CASE("du matches finite differences and is symmetric") {
  for (const NormModel& n : all_norms()) {
    for (int i = 0; i < 25; ++i) {
      const Vec3 v = random_unit();
      const SupportMapResult r = support_differential(n, v);
      CHECK(r.has_du);
      CHECK(max_abs(r.basis - tangent_basis(v)) == 0.0);
      CHECK(std::abs(r.du(0, 1) - r.du(1, 0)) <= 1e-8);
      CHECK(max_abs(r.du - fd_support_du(n, v)) <= 1e-4);
    }
  }
}

// ---- admissibility ----------------------------------------------------------

TEST_CASE("sphere_samples are deterministic unit vectors") {
  const auto a = sphere_samples(64);
  const auto b = sphere_samples(64);
  REQUIRE(a.size() == 64);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a[i].norm() - 1.0) < 1e-14);
    CHECK(a[i] == b[i]);
  }
}

TEST_CASE("check_admissible examples") {
  const AdmissibilityReport e = check_admissible(NormModel::euclidean(), 200);
  CHECK(e.pass);
  CHECK(e.min_eigen_du == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.samples == 200);

  const AdmissibilityReport q = check_admissible(NormModel::quartic(0.1), 200);
  CHECK(q.pass);
  CHECK(q.min_eigen_du > 0.0);

  // eps = 10: reported, no verdict asserted
  const AdmissibilityReport big = check_admissible(NormModel::quartic(10.0), 200);
  CHECK(big.min_eigen_du > 0.0);
  MESSAGE("quartic eps=10: min eig du " << big.min_eigen_du << ", min curvature "
                                        << big.min_curvature << ", pass " << big.pass);
}

TEST_CASE("check_admissible flags a nearly flat unit sphere") {
  const AdmissibilityReport r = check_admissible(NormModel::quartic(1e5), 500);
  CHECK_FALSE(r.pass);
  CHECK(r.min_curvature < 1e-3);
  CHECK(std::abs(r.worst_v.norm() - 1.0) < 1e-12);
}
