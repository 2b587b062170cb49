#include "birkhoff/surface_chart.hpp"

#include <cmath>
#include <numbers>

#include "birkhoff/error.hpp"

namespace birkhoff {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPoleMargin = 0.05;

ChartDomain sphere_domain() {
  return ChartDomain{kPoleMargin, kPi - kPoleMargin, 0.0, 2.0 * kPi, false, true};
}

// Cyclic coordinate permutation taking the z-axis to `polar_axis`.
Mat3 axis_permutation(int polar_axis) {
  Mat3 P = Mat3::Zero();
  for (int i = 0; i < 3; ++i) P((i + polar_axis + 1) % 3, i) = 1.0;
  return P;
}

// Unit direction (sin u cos v, sin u sin v, cos u) and its partials.
struct DirectionJet {
  Vec3 d, du, dv, duu, duv, dvv;
};

DirectionJet spherical_direction(const Vec2& q, const Mat3& P) {
  const double su = std::sin(q.x()), cu = std::cos(q.x());
  const double sv = std::sin(q.y()), cv = std::cos(q.y());
  DirectionJet j;
  j.d = P * Vec3(su * cv, su * sv, cu);
  j.du = P * Vec3(cu * cv, cu * sv, -su);
  j.dv = P * Vec3(-su * sv, su * cv, 0.0);
  j.duu = -j.d;
  j.duv = P * Vec3(-cu * sv, cu * cv, 0.0);
  j.dvv = P * Vec3(-su * cv, -su * sv, 0.0);
  return j;
}

ChartPartials scaled(const DirectionJet& j, const Mat3& S) {
  ChartPartials c;
  c.p = S * j.d;
  c.fu = S * j.du;
  c.fv = S * j.dv;
  c.fuu = S * j.duu;
  c.fuv = S * j.duv;
  c.fvv = S * j.dvv;
  return c;
}

// Radial projection x -> x / F(x) pushed through the chart's direction jet.
ChartPartials radial_projection(const NormModel& norm, double rho, const Vec3& center,
                                const DirectionJet& d) {
  const NormJet n = norm.jet(d.d);
  const double F = n.value;
  const Vec3& g = n.grad;
  auto first = [&](const Vec3& w) { return (w - d.d * g.dot(w) / F) / F; };
  auto second = [&](const Vec3& w1, const Vec3& w2) {
    const double g1 = g.dot(w1);
    const double g2 = g.dot(w2);
    return (-w1 * g2 - w2 * g1 - d.d * w1.dot(n.hess * w2)) / (F * F) +
           2.0 * d.d * g1 * g2 / (F * F * F);
  };
  ChartPartials c;
  c.p = center + rho * d.d / F;
  c.fu = rho * first(d.du);
  c.fv = rho * first(d.dv);
  c.fuu = rho * (second(d.du, d.du) + first(d.duu));
  c.fuv = rho * (second(d.du, d.dv) + first(d.duv));
  c.fvv = rho * (second(d.dv, d.dv) + first(d.dvv));
  return c;
}

double wrap(double x, double lo, double hi) {
  const double span = hi - lo;
  double r = std::fmod(x - lo, span);
  if (r < 0.0) r += span;
  return lo + r;
}

}  // namespace

bool ChartDomain::contains(const Vec2& q, double slack) const {
  const bool in_u = u_periodic || (q.x() >= u_min - slack && q.x() <= u_max + slack);
  const bool in_v = v_periodic || (q.y() >= v_min - slack && q.y() <= v_max + slack);
  return in_u && in_v && q.allFinite();
}

Vec2 ChartDomain::normalize(const Vec2& q) const {
  return Vec2(u_periodic ? wrap(q.x(), u_min, u_max) : q.x(),
              v_periodic ? wrap(q.y(), v_min, v_max) : q.y());
}

HeightFunction HeightFunction::polynomial(std::vector<Term> terms) {
  auto mono = [](double x, int k) { return k < 0 ? 0.0 : std::pow(x, k); };
  HeightFunction h;
  h.g = [terms, mono](double x, double y) {
    double s = 0.0;
    for (const auto& t : terms) s += t.c * mono(x, t.i) * mono(y, t.j);
    return s;
  };
  h.grad = [terms, mono](double x, double y) {
    Vec2 s = Vec2::Zero();
    for (const auto& t : terms) {
      s.x() += t.c * t.i * mono(x, t.i - 1) * mono(y, t.j);
      s.y() += t.c * t.j * mono(x, t.i) * mono(y, t.j - 1);
    }
    return s;
  };
  h.hess = [terms, mono](double x, double y) {
    Mat2 s = Mat2::Zero();
    for (const auto& t : terms) {
      s(0, 0) += t.c * t.i * (t.i - 1) * mono(x, t.i - 2) * mono(y, t.j);
      s(0, 1) += t.c * t.i * t.j * mono(x, t.i - 1) * mono(y, t.j - 1);
      s(1, 1) += t.c * t.j * (t.j - 1) * mono(x, t.i) * mono(y, t.j - 2);
    }
    s(1, 0) = s(0, 1);
    return s;
  };
  return h;
}

std::string_view to_string(ChartFamily family) {
  switch (family) {
    case ChartFamily::graph: return "graph";
    case ChartFamily::euclidean_sphere: return "euclidean_sphere";
    case ChartFamily::minkowski_sphere: return "minkowski_sphere";
    case ChartFamily::ellipsoid: return "ellipsoid";
    case ChartFamily::torus: return "torus";
    case ChartFamily::cylinder: return "cylinder";
    case ChartFamily::linear_image: return "linear_image";
  }
  return "unknown";
}

SurfaceChart SurfaceChart::graph(HeightFunction h, const ChartDomain& domain) {
  SurfaceChart c;
  c.family_ = chart::Graph{std::move(h)};
  c.domain_ = domain;
  return c;
}

SurfaceChart SurfaceChart::plane(const ChartDomain& domain) {
  return graph(HeightFunction::polynomial({}), domain);
}

SurfaceChart SurfaceChart::euclidean_sphere(double r, int polar_axis) {
  if (!(r > 0.0)) throw Error(Errc::validation_error, "r: sphere radius must be positive");
  SurfaceChart c;
  c.family_ = chart::EuclideanSphere{r};
  c.domain_ = sphere_domain();
  c.polar_axis_ = polar_axis;
  return c;
}

SurfaceChart SurfaceChart::minkowski_sphere(const NormModel& norm, double rho,
                                            const Vec3& center, int polar_axis) {
  if (!(rho > 0.0)) throw Error(Errc::validation_error, "rho: sphere radius must be positive");
  SurfaceChart c;
  c.family_ = chart::MinkowskiSphere{norm, rho, center};
  c.domain_ = sphere_domain();
  c.polar_axis_ = polar_axis;
  return c;
}

SurfaceChart SurfaceChart::ellipsoid(double a, double b, double cc, int polar_axis) {
  if (!(a > 0.0 && b > 0.0 && cc > 0.0)) {
    throw Error(Errc::validation_error, "semi_axes: must be positive");
  }
  SurfaceChart c;
  c.family_ = chart::Ellipsoid{a, b, cc};
  c.domain_ = sphere_domain();
  c.polar_axis_ = polar_axis;
  return c;
}

SurfaceChart SurfaceChart::torus(double R, double r) {
  if (!(r > 0.0 && R > r)) throw Error(Errc::validation_error, "R, r: need R > r > 0");
  SurfaceChart c;
  c.family_ = chart::Torus{R, r};
  c.domain_ = ChartDomain{0.0, 2.0 * kPi, 0.0, 2.0 * kPi, true, true};
  return c;
}

SurfaceChart SurfaceChart::cylinder(double r, double z_min, double z_max) {
  if (!(r > 0.0)) throw Error(Errc::validation_error, "r: cylinder radius must be positive");
  SurfaceChart c;
  c.family_ = chart::Cylinder{r};
  c.domain_ = ChartDomain{0.0, 2.0 * kPi, z_min, z_max, true, false};
  return c;
}

SurfaceChart SurfaceChart::linear_image(const Mat3& A, const SurfaceChart& base,
                                        const Vec3& offset) {
  SurfaceChart c = base;
  c.transform_ = A * base.transform_;
  c.offset_ = A * base.offset_ + offset;
  c.is_image_ = true;
  return c;
}

ChartFamily SurfaceChart::family() const noexcept {
  if (is_image_) return ChartFamily::linear_image;
  return static_cast<ChartFamily>(family_.index());
}

SurfaceChart SurfaceChart::with_domain(const ChartDomain& domain) const {
  SurfaceChart c = *this;
  c.domain_ = domain;
  return c;
}

bool SurfaceChart::closed() const noexcept {
  return std::holds_alternative<chart::EuclideanSphere>(family_) ||
         std::holds_alternative<chart::MinkowskiSphere>(family_) ||
         std::holds_alternative<chart::Ellipsoid>(family_) ||
         std::holds_alternative<chart::Torus>(family_);
}

std::vector<SurfaceChart> SurfaceChart::atlas() const {
  std::vector<SurfaceChart> charts{*this};
  const bool sphere_like = std::holds_alternative<chart::EuclideanSphere>(family_) ||
                           std::holds_alternative<chart::MinkowskiSphere>(family_) ||
                           std::holds_alternative<chart::Ellipsoid>(family_);
  if (sphere_like) {
    SurfaceChart pole = *this;
    pole.polar_axis_ = (polar_axis_ + 1) % 3;
    charts.push_back(pole);
  }
  return charts;
}

ChartPartials SurfaceChart::evaluate(const Vec2& q) const {
  const Mat3 P = axis_permutation(polar_axis_);
  ChartPartials c = std::visit(
      [&](const auto& fam) -> ChartPartials {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, chart::Graph>) {
          const double x = q.x(), y = q.y();
          const Vec2 g1 = fam.height.grad(x, y);
          const Mat2 g2 = fam.height.hess(x, y);
          ChartPartials r;
          r.p = Vec3(x, y, fam.height.g(x, y));
          r.fu = Vec3(1.0, 0.0, g1.x());
          r.fv = Vec3(0.0, 1.0, g1.y());
          r.fuu = Vec3(0.0, 0.0, g2(0, 0));
          r.fuv = Vec3(0.0, 0.0, g2(0, 1));
          r.fvv = Vec3(0.0, 0.0, g2(1, 1));
          return r;
        } else if constexpr (std::is_same_v<T, chart::EuclideanSphere>) {
          return scaled(spherical_direction(q, P), fam.r * Mat3::Identity());
        } else if constexpr (std::is_same_v<T, chart::Ellipsoid>) {
          return scaled(spherical_direction(q, P), Vec3(fam.a, fam.b, fam.c).asDiagonal());
        } else if constexpr (std::is_same_v<T, chart::MinkowskiSphere>) {
          return radial_projection(fam.norm, fam.rho, fam.center, spherical_direction(q, P));
        } else if constexpr (std::is_same_v<T, chart::Torus>) {
          // u: angle around the axis, v: angle around the tube
          const double su = std::sin(q.x()), cu = std::cos(q.x());
          const double sv = std::sin(q.y()), cv = std::cos(q.y());
          const double w = fam.R + fam.r * cv;
          ChartPartials r;
          r.p = Vec3(w * cu, w * su, fam.r * sv);
          r.fu = Vec3(-w * su, w * cu, 0.0);
          r.fv = Vec3(-fam.r * sv * cu, -fam.r * sv * su, fam.r * cv);
          r.fuu = Vec3(-w * cu, -w * su, 0.0);
          r.fuv = Vec3(fam.r * sv * su, -fam.r * sv * cu, 0.0);
          r.fvv = Vec3(-fam.r * cv * cu, -fam.r * cv * su, -fam.r * sv);
          return r;
        } else {
          const double s = std::sin(q.x()), co = std::cos(q.x());
          ChartPartials r;
          r.p = Vec3(fam.r * co, fam.r * s, q.y());
          r.fu = Vec3(-fam.r * s, fam.r * co, 0.0);
          r.fv = Vec3(0.0, 0.0, 1.0);
          r.fuu = Vec3(-fam.r * co, -fam.r * s, 0.0);
          return r;
        }
      },
      family_);
  if (is_image_) {
    c.p = transform_ * c.p + offset_;
    c.fu = transform_ * c.fu;
    c.fv = transform_ * c.fv;
    c.fuu = transform_ * c.fuu;
    c.fuv = transform_ * c.fuv;
    c.fvv = transform_ * c.fvv;
  }
  return c;
}

SurfaceJet jet_unchecked(const SurfaceChart& chart, const Vec2& q) {
  const ChartPartials c = chart.evaluate(q);
  SurfaceJet j;
  j.q = q;
  j.p = c.p;
  j.fu = c.fu;
  j.fv = c.fv;
  j.fuu = c.fuu;
  j.fuv = c.fuv;
  j.fvv = c.fvv;
  const Vec3 n = c.fu.cross(c.fv);
  const double len = n.norm();
  if (!(len > kRegularityTol * std::max(1.0, c.fu.norm() * c.fv.norm()))) {
    throw Error(Errc::degenerate_chart, "chart is not an immersion at this point");
  }
  j.xi = n / len;
  return j;
}

SurfaceJet jet(const SurfaceChart& chart, const Vec2& q) {
  if (!chart.domain().contains(q, 1e-12)) {
    throw Error(Errc::out_of_domain, "chart coordinates outside the advertised domain");
  }
  return jet_unchecked(chart, q);
}

SurfaceChart minkowski_sphere_chart(const NormModel& norm, double rho, const Vec3& center) {
  return SurfaceChart::minkowski_sphere(norm, rho, center);
}

std::vector<Vec2> chart_grid(const ChartDomain& d, int nu, int nv) {
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv));
  auto coord = [](double lo, double hi, int n, int i, bool periodic) {
    if (n == 1) return 0.5 * (lo + hi);
    return lo + (hi - lo) * i / (periodic ? n : n - 1);
  };
  for (int i = 0; i < nu; ++i) {
    for (int k = 0; k < nv; ++k) {
      out.emplace_back(coord(d.u_min, d.u_max, nu, i, d.u_periodic),
                       coord(d.v_min, d.v_max, nv, k, d.v_periodic));
    }
  }
  return out;
}

}  // namespace birkhoff
