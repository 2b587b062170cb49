#pragma once

// Independent oracles shared by the unit and acceptance tests. Nothing here
// calls the curvature pipeline; charts are only used as point evaluators.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "birkhoff/norm_model.hpp"
#include "birkhoff/surface_chart.hpp"

namespace testsupport {

using birkhoff::Mat2;
using birkhoff::Mat3;
using birkhoff::Mat32;
using birkhoff::Vec2;
using birkhoff::Vec3;

inline constexpr double kPi = std::numbers::pi;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng());
}

inline Vec3 random_unit() {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v(n(rng()), n(rng()), n(rng()));
  return v.normalized();
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

// ---- norm oracles ----------------------------------------------------------

/// Quartic family written out directly.
inline double quartic_value(double eps, const Vec3& x) {
  const double s = x.squaredNorm();
  return std::pow(s * s + eps * x.array().pow(4).sum(), 0.25);
}

/// Support point by direct maximization of <x, v> over the unit sphere,
/// parametrized by the direction d: x = d / F(d). Coarse sampling around v
/// followed by shrinking pattern search.
inline Vec3 brute_support_point(const std::function<double(const Vec3&)>& F, const Vec3& v) {
  const Mat32 B = birkhoff::tangent_basis(v);
  auto point = [&](const Vec2& c) {
    const Vec3 d = (v + B * c).normalized();
    return Vec3(d / F(d));
  };
  auto score = [&](const Vec2& c) { return point(c).dot(v); };
  Vec2 best = Vec2::Zero();
  double best_s = score(best);
  for (double step = 0.5; step > 1e-13; step *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (const Vec2& d : {Vec2(1, 0), Vec2(-1, 0), Vec2(0, 1), Vec2(0, -1), Vec2(1, 1),
                            Vec2(-1, -1), Vec2(1, -1), Vec2(-1, 1)}) {
        const Vec2 c = best + step * d;
        const double s = score(c);
        if (s > best_s) {
          best_s = s;
          best = c;
          moved = true;
        }
      }
    }
  }
  return point(best);
}

/// du by central differences of support_point along the stored basis of v^perp.
inline Mat2 fd_support_du(const birkhoff::NormModel& norm, const Vec3& v, double h = 1e-5) {
  const Mat32 B = birkhoff::tangent_basis(v);
  Mat2 du;
  for (int j = 0; j < 2; ++j) {
    const Vec3 w = B.col(j);
    const Vec3 up = birkhoff::support_point(norm, (v + h * w).normalized()).u;
    const Vec3 um = birkhoff::support_point(norm, (v - h * w).normalized()).u;
    // the normalization is second order, so the chord is the derivative along w
    du.col(j) = B.transpose() * ((up - um) / (2.0 * h));
  }
  return du;
}

// ---- classical surface oracles --------------------------------------------

using PointFn = std::function<Vec3(const Vec2&)>;

/// First and second partials of a point map by fourth-order central differences.
struct FdJet {
  Vec3 p, fu, fv, fuu, fuv, fvv;
};

inline FdJet fd_jet(const PointFn& f, const Vec2& q, double h = 1e-3) {
  auto d1 = [&](const Vec2& e) {
    return Vec3((8.0 * (f(q + e) - f(q - e)) - (f(q + 2.0 * e) - f(q - 2.0 * e))) / (12.0 * h));
  };
  auto d2 = [&](const Vec2& e) {
    return Vec3((-f(q + 2.0 * e) + 16.0 * f(q + e) - 30.0 * f(q) + 16.0 * f(q - e) -
                 f(q - 2.0 * e)) /
                (12.0 * h * h));
  };
  const Vec2 eu(h, 0.0), ev(0.0, h);
  FdJet j;
  j.p = f(q);
  j.fu = d1(eu);
  j.fv = d1(ev);
  j.fuu = d2(eu);
  j.fvv = d2(ev);
  // mixed partial from the polarization of second differences along the diagonals
  const Vec2 ep(h, h), em(h, -h);
  j.fuv = (d2(ep) - d2(em)) / 4.0;
  return j;
}

/// Classical Euclidean principal curvatures with the chart orientation
/// (fu x fv), as eigenvalues of the shape operator -I^{-1} II. For outward
/// oriented convex surfaces they are positive.
struct Classical {
  double k1 = 0.0, k2 = 0.0;
  double K = 0.0, H = 0.0;
  Vec3 normal = Vec3::Zero();
};

inline Classical classical_curvatures(const FdJet& j) {
  Mat2 I, II;
  const Vec3 n = j.fu.cross(j.fv).normalized();
  I << j.fu.dot(j.fu), j.fu.dot(j.fv), j.fu.dot(j.fv), j.fv.dot(j.fv);
  II << j.fuu.dot(n), j.fuv.dot(n), j.fuv.dot(n), j.fvv.dot(n);
  const Mat2 S = -I.inverse() * II;
  const double tr = S.trace(), det = S.determinant();
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  Classical c;
  c.k1 = tr / 2.0 + disc;
  c.k2 = tr / 2.0 - disc;
  c.K = det;
  c.H = tr / 2.0;
  c.normal = n;
  return c;
}

inline Classical classical_curvatures(const PointFn& f, const Vec2& q, double h = 1e-3) {
  return classical_curvatures(fd_jet(f, q, h));
}

inline PointFn point_map(const birkhoff::SurfaceChart& chart) {
  return [chart](const Vec2& q) { return chart.point(q); };
}

// Closed forms, outward normal, as functions of the ambient point.

inline void sphere_KH(double r, double& K, double& H) {
  K = 1.0 / (r * r);
  H = 1.0 / r;
}

inline void cylinder_KH(double r, double& K, double& H) {
  K = 0.0;
  H = 0.5 / r;
}

inline void torus_KH(double R, double r, const Vec3& p, double& K, double& H) {
  const double cv = (std::hypot(p.x(), p.y()) - R) / r;
  const double w = R + r * cv;
  K = cv / (r * w);
  H = (R + 2.0 * r * cv) / (2.0 * r * w);
}

inline void ellipsoid_KH(double a, double b, double c, const Vec3& p, double& K, double& H) {
  const double a2 = a * a, b2 = b * b, c2 = c * c;
  const double s = p.x() * p.x() / (a2 * a2) + p.y() * p.y() / (b2 * b2) +
                   p.z() * p.z() / (c2 * c2);
  K = 1.0 / (a2 * b2 * c2 * s * s);
  H = (a2 + b2 + c2 - p.squaredNorm()) / (2.0 * a2 * b2 * c2 * std::pow(s, 1.5));
}

/// Angle of a tangent vector in a fixed Euclidean-orthonormal basis of the plane.
inline double tangent_angle(const Vec3& X, const Vec3& e1, const Vec3& e2) {
  return std::atan2(X.dot(e2), X.dot(e1));
}

/// Distance between two line directions given by angles, modulo pi.
inline double line_angle_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), kPi);
  return std::min(d, kPi - d);
}

}  // namespace testsupport
