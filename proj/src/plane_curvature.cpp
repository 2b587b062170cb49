#include "birkhoff/plane_curvature.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "birkhoff/error.hpp"

namespace birkhoff {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussNodes = {
    0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640, 0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {
    0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
    0.2369268850561891};

template <typename F>
double gauss_integrate(F&& f, double a, double b, int pieces) {
  double total = 0.0;
  const double w = (b - a) / pieces;
  for (int p = 0; p < pieces; ++p) {
    const double mid = a + (p + 0.5) * w;
    for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
      total += kGaussWeights[i] * f(mid + 0.5 * w * kGaussNodes[i]);
    }
  }
  return 0.5 * w * total;
}

// Natural cubic spline through (t_i, y_i), t strictly increasing.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> t, std::vector<double> y) : t_(std::move(t)), y_(std::move(y)) {
    const std::size_t n = t_.size();
    m_.assign(n, 0.0);
    if (n < 3) return;
    std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0), r(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = t_[i] - t_[i - 1];
      const double h1 = t_[i + 1] - t_[i];
      a[i] = h0 / 6.0;
      b[i] = (h0 + h1) / 3.0;
      c[i] = h1 / 6.0;
      r[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
    }
    for (std::size_t i = 1; i < n; ++i) {
      const double w = a[i] / b[i - 1];
      b[i] -= w * c[i - 1];
      r[i] -= w * r[i - 1];
    }
    m_[n - 1] = r[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) m_[i] = (r[i] - c[i] * m_[i + 1]) / b[i];
  }

  double derivative(double t) const {
    const std::size_t i = segment(t);
    const double h = t_[i + 1] - t_[i];
    const double A = (t_[i + 1] - t) / h;
    const double B = (t - t_[i]) / h;
    return (y_[i + 1] - y_[i]) / h - (3.0 * A * A - 1.0) / 6.0 * h * m_[i] +
           (3.0 * B * B - 1.0) / 6.0 * h * m_[i + 1];
  }

 private:
  std::size_t segment(double t) const {
    std::size_t lo = 0;
    std::size_t hi = t_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (t_[mid] <= t ? lo : hi) = mid;
    }
    return lo;
  }

  std::vector<double> t_, y_, m_;
};

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

}  // namespace

double PlaneNormModel::radius(double theta) const {
  return 1.0 / parent_.value(std::cos(theta) * b1_ + std::sin(theta) * b2_);
}

PlaneCurveJet PlaneNormModel::phi(double theta) const {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Vec3 dir = c * b1_ + s * b2_;
  const Vec3 ddir = -s * b1_ + c * b2_;
  const NormJet j = parent_.jet(dir);
  const double f = j.value;
  const double f1 = j.grad.dot(ddir);
  const double f2 = ddir.dot(j.hess * ddir) - j.grad.dot(dir);
  const double r = 1.0 / f;
  const double r1 = -f1 / (f * f);
  const double r2 = -f2 / (f * f) + 2.0 * f1 * f1 / (f * f * f);
  const Vec2 e(c, s);
  const Vec2 e1(-s, c);
  PlaneCurveJet out;
  out.point = r * e;
  out.d1 = r1 * e + r * e1;
  out.d2 = r2 * e + 2.0 * r1 * e1 - r * e;
  return out;
}

double PlaneNormModel::circle_curvature(double theta) const {
  const PlaneCurveJet j = phi(theta);
  const double speed = j.d1.norm();
  return (j.d1.x() * j.d2.y() - j.d1.y() * j.d2.x()) / (speed * speed * speed);
}

double PlaneNormModel::theta_for_tangent(const Vec2& direction) const {
  if (!(direction.norm() > 0.0)) {
    throw Error(Errc::orientation_ambiguity, "zero tangent direction");
  }
  // Tangent angle of phi'(theta) is theta + atan2(r, r'), increasing for
  // strictly convex circles; ranges over [psi(0), psi(0) + 2 pi].
  auto psi = [&](double theta) {
    const PlaneCurveJet j = phi(theta);
    const Vec2 er(std::cos(theta), std::sin(theta));
    const Vec2 et(-er.y(), er.x());
    return theta + std::atan2(j.d1.dot(et), j.d1.dot(er));
  };
  const double psi0 = psi(0.0);
  const double target = psi0 + wrap_angle(std::atan2(direction.y(), direction.x()) - psi0);
  double lo = 0.0;
  double hi = kTwoPi;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (psi(mid) < target ? lo : hi) = mid;
  }
  const double theta = 0.5 * (lo + hi);
  const Vec2 t = phi(theta).d1.normalized();
  const Vec2 d = direction.normalized();
  if (t.dot(d) < 1.0 - 1e-8) {
    throw Error(Errc::orientation_ambiguity,
                "no unit-circle point with matching tangent orientation");
  }
  return wrap_angle(theta);
}

double PlaneNormModel::circle_length(double theta0, double theta1) const {
  const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(theta1 - theta0) / 0.05)));
  return gauss_integrate([&](double t) { return norm(phi(t).d1); }, theta0, theta1, pieces);
}

PlaneNormModel restrict_norm(const NormModel& model, const Vec3& a, const Vec3& b) {
  const double na = a.norm();
  if (!(na > 0.0) || a.cross(b).norm() <= 1e-14 * std::max(1.0, na * b.norm())) {
    throw Error(Errc::degenerate_plane, "plane spanning vectors are parallel or zero");
  }
  const Vec3 b1 = a / na;
  const Vec3 b2 = (b - b.dot(b1) * b1).normalized();
  return PlaneNormModel(model, b1, b2);
}

PlaneCurveSample make_curve_sample(std::vector<Vec2> points, std::size_t base_index) {
  if (base_index >= points.size()) {
    throw Error(Errc::insufficient_samples, "base index outside the sample");
  }
  PlaneCurveSample s;
  s.arclength.resize(points.size(), 0.0);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double d = (points[i] - points[i - 1]).norm();
    if (!(d > 0.0)) {
      throw Error(Errc::insufficient_samples, "consecutive curve samples coincide");
    }
    s.arclength[i] = s.arclength[i - 1] + d;
  }
  s.points = std::move(points);
  s.base_index = base_index;
  return s;
}

LocalCurveFit fit_local(const PlaneCurveSample& curve, std::size_t window) {
  const std::size_t n = curve.points.size();
  const std::size_t b = curve.base_index;
  const std::size_t half = std::min({window / 2, b, n - 1 - std::min(b, n - 1)});
  if (n < 5 || half < 2) {
    throw Error(Errc::insufficient_samples,
                "curvature fit needs at least two samples on each side of the base point");
  }
  const Vec2 p0 = curve.points[b];
  Vec2 t = curve.points[b + 1] - curve.points[b - 1];
  if (!(t.norm() > 0.0)) throw Error(Errc::collinear_samples, "no tangent at base point");
  t.normalize();
  const Vec2 nrm(-t.y(), t.x());

  const std::size_t m = 2 * half + 1;
  Eigen::VectorXd xi(m), zeta(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Vec2 d = curve.points[b - half + k] - p0;
    xi(static_cast<Eigen::Index>(k)) = d.dot(t);
    zeta(static_cast<Eigen::Index>(k)) = d.dot(nrm);
  }
  const double scale = xi.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw Error(Errc::collinear_samples, "samples have no tangential extent");
  xi /= scale;
  zeta /= scale;

  // Quadratic fit augmented by a cubic term: odd-order terms otherwise leak into
  // the curvature estimate when the samples are not symmetric in xi.
  const Eigen::Index cols = m >= 6 ? 4 : 3;
  Eigen::MatrixXd V(static_cast<Eigen::Index>(m), cols);
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(m); ++k) {
    double p = 1.0;
    for (Eigen::Index c = 0; c < cols; ++c, p *= xi(k)) V(k, c) = p;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
  qr.setThreshold(1e-10);
  if (qr.rank() < cols) {
    throw Error(Errc::collinear_samples, "curvature fit is rank-deficient");
  }
  const Eigen::VectorXd coef = qr.solve(zeta);
  const double slope = coef(1);
  const double denom = std::pow(1.0 + slope * slope, 1.5);

  LocalCurveFit fit;
  fit.point = p0 + coef(0) * scale * nrm;
  fit.tangent = (t + slope * nrm).normalized();
  fit.curvature = 2.0 * coef(2) / scale / denom;
  fit.window = m;
  return fit;
}

double euclidean_curvature_at(const PlaneCurveSample& curve, std::size_t window) {
  return fit_local(curve, window).curvature;
}

double circular_curvature_ratio(const PlaneNormModel& plane_norm,
                                const PlaneCurveSample& curve, std::size_t window) {
  const LocalCurveFit fit = fit_local(curve, window);
  const double theta = plane_norm.theta_for_tangent(fit.tangent);
  return fit.curvature / plane_norm.circle_curvature(theta);
}

double circular_curvature_reparam(const PlaneNormModel& plane_norm,
                                  const PlaneCurveSample& curve, double h) {
  const std::size_t n = curve.points.size();
  const std::size_t b = curve.base_index;
  if (n < 5 || b < 2 || b + 2 >= n) {
    throw Error(Errc::insufficient_samples, "reparametrization needs samples around the base");
  }
  // Spline window: the natural end conditions are wrong for a curved arc, and the
  // error decays by about 0.27 per knot, so keep 12 knots beyond +-h on each side.
  constexpr std::size_t kMargin = 12;
  std::size_t lo = b;
  std::size_t hi = b;
  const auto mink_chord = [&](std::size_t i, std::size_t j) {
    return plane_norm.norm(curve.points[j] - curve.points[i]);
  };
  double back = 0.0;
  double fwd = 0.0;
  std::size_t back_extra = 0;
  std::size_t fwd_extra = 0;
  while (lo > 0 && back_extra < kMargin) {
    back += mink_chord(lo - 1, lo);
    --lo;
    if (back > h) ++back_extra;
  }
  while (hi + 1 < n && fwd_extra < kMargin) {
    fwd += mink_chord(hi, hi + 1);
    ++hi;
    if (fwd > h) ++fwd_extra;
  }
  if (back <= h || fwd <= h || b - lo < 2 || hi - b < 2) {
    throw Error(Errc::insufficient_samples, "curve too short for the Minkowski step");
  }

  std::vector<double> tau, xs, ys;
  for (std::size_t i = lo; i <= hi; ++i) {
    tau.push_back(curve.arclength[i] - curve.arclength[b]);
    xs.push_back(curve.points[i].x());
    ys.push_back(curve.points[i].y());
  }
  const CubicSpline sx(tau, xs);
  const CubicSpline sy(tau, ys);
  auto tangent = [&](double t) { return Vec2(sx.derivative(t), sy.derivative(t)); };
  auto speed = [&](double t) { return plane_norm.norm(tangent(t)); };

  // Spline parameter at signed Minkowski length `target` from the base.
  auto locate = [&](double target) {
    double t = target / speed(0.0);
    for (int it = 0; it < 50; ++it) {
      const double len = gauss_integrate(speed, 0.0, t, 2);
      const double step = (len - target) / speed(t);
      t -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(t))) break;
    }
    if (t <= tau.front() || t >= tau.back()) {
      throw Error(Errc::insufficient_samples, "Minkowski step leaves the sampled window");
    }
    return t;
  };

  const double tp = locate(h);
  const double tm = locate(-h);
  const double theta0 = plane_norm.theta_for_tangent(tangent(0.0));
  auto rel_theta = [&](double t) {
    double d = plane_norm.theta_for_tangent(tangent(t)) - theta0;
    if (d > std::numbers::pi) d -= kTwoPi;
    if (d < -std::numbers::pi) d += kTwoPi;
    return d;
  };
  const double dp = rel_theta(tp);
  const double dm = rel_theta(tm);
  const double t_plus = plane_norm.circle_length(theta0, theta0 + dp);
  const double t_minus = plane_norm.circle_length(theta0, theta0 + dm);
  return (t_plus - t_minus) / (2.0 * h);
}

}  // namespace birkhoff
