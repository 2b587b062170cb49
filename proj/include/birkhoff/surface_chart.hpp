#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string_view>
#include <variant>
#include <vector>

#include "birkhoff/norm_model.hpp"

namespace birkhoff {

/// Chart coordinate rectangle. Periodic coordinates wrap instead of exiting.
struct ChartDomain {
  double u_min = 0.0, u_max = 1.0;
  double v_min = 0.0, v_max = 1.0;
  bool u_periodic = false;
  bool v_periodic = false;

  double diagonal() const { return std::hypot(u_max - u_min, v_max - v_min); }
  bool contains(const Vec2& q, double slack = 0.0) const;
  /// Wraps periodic coordinates into range; others are left as they are.
  Vec2 normalize(const Vec2& q) const;
};

/// Ambient point with first and second chart partials.
struct ChartPartials {
  Vec3 p = Vec3::Zero();
  Vec3 fu = Vec3::Zero(), fv = Vec3::Zero();
  Vec3 fuu = Vec3::Zero(), fuv = Vec3::Zero(), fvv = Vec3::Zero();
};

/// Two-jet of an immersion at a chart point, with the Euclidean unit normal
/// xi = (fu x fv) / |fu x fv|.
struct SurfaceJet {
  Vec2 q = Vec2::Zero();
  Vec3 p = Vec3::Zero();
  Vec3 fu = Vec3::Zero(), fv = Vec3::Zero();
  Vec3 fuu = Vec3::Zero(), fuv = Vec3::Zero(), fvv = Vec3::Zero();
  Vec3 xi = Vec3::Zero();

  Mat32 frame() const {
    Mat32 m;
    m << fu, fv;
    return m;
  }
};

/// Height function with analytic derivatives, for graph charts (x, y, g(x, y)).
struct HeightFunction {
  std::function<double(double, double)> g;
  std::function<Vec2(double, double)> grad;
  std::function<Mat2(double, double)> hess;

  /// Sum of c_ij x^i y^j over the listed terms.
  struct Term {
    int i = 0, j = 0;
    double c = 0.0;
  };
  static HeightFunction polynomial(std::vector<Term> terms);
};

namespace chart {
struct Graph {
  HeightFunction height;
};
struct EuclideanSphere {
  double r = 1.0;
};
struct MinkowskiSphere {
  NormModel norm = NormModel::euclidean();
  double rho = 1.0;
  Vec3 center = Vec3::Zero();
};
struct Ellipsoid {
  double a = 1.0, b = 1.0, c = 1.0;
};
struct Torus {
  double R = 2.0, r = 0.5;
};
struct Cylinder {
  double r = 1.0;
};
}  // namespace chart

enum class ChartFamily {
  graph,
  euclidean_sphere,
  minkowski_sphere,
  ellipsoid,
  torus,
  cylinder,
  linear_image,
};

std::string_view to_string(ChartFamily family);

/// A parametric surface immersion. Sphere-like families use polar angle u in
/// [0.05, pi - 0.05] and azimuth v in [0, 2 pi] around `polar_axis`; the pole
/// chart with polar_axis 0 covers the points the z-axis chart leaves out.
/// Built-in families are oriented by the outward normal.
class SurfaceChart {
 public:
  static SurfaceChart graph(HeightFunction h, const ChartDomain& domain);
  static SurfaceChart plane(const ChartDomain& domain);
  static SurfaceChart euclidean_sphere(double r, int polar_axis = 2);
  static SurfaceChart minkowski_sphere(const NormModel& norm, double rho,
                                       const Vec3& center = Vec3::Zero(), int polar_axis = 2);
  static SurfaceChart ellipsoid(double a, double b, double c, int polar_axis = 2);
  static SurfaceChart torus(double R, double r);
  static SurfaceChart cylinder(double r, double z_min = -1.0, double z_max = 1.0);
  /// x -> A x + offset applied to another chart.
  static SurfaceChart linear_image(const Mat3& A, const SurfaceChart& base,
                                   const Vec3& offset = Vec3::Zero());

  ChartFamily family() const noexcept;
  const ChartDomain& domain() const noexcept { return domain_; }
  SurfaceChart with_domain(const ChartDomain& domain) const;
  /// Compact without boundary once pole charts are included.
  bool closed() const noexcept;
  /// Charts covering the surface: this one, plus a pole chart where needed.
  std::vector<SurfaceChart> atlas() const;

  /// Partials without domain checks (finite-difference stencils may step outside).
  ChartPartials evaluate(const Vec2& q) const;
  Vec3 point(const Vec2& q) const { return evaluate(q).p; }

  using Family = std::variant<chart::Graph, chart::EuclideanSphere, chart::MinkowskiSphere,
                              chart::Ellipsoid, chart::Torus, chart::Cylinder>;

 private:
  SurfaceChart() = default;

  Family family_;
  ChartDomain domain_;
  int polar_axis_ = 2;
  // Set for linear images; the family then describes the base surface.
  Mat3 transform_ = Mat3::Identity();
  Vec3 offset_ = Vec3::Zero();
  bool is_image_ = false;
};

/// Regularity floor |fu x fv| below which a chart point is rejected.
inline constexpr double kRegularityTol = 1e-12;

/// Two-jet at q; throws OutOfDomain or DegenerateChart.
SurfaceJet jet(const SurfaceChart& chart, const Vec2& q);
/// Same without the domain check.
SurfaceJet jet_unchecked(const SurfaceChart& chart, const Vec2& q);

SurfaceChart minkowski_sphere_chart(const NormModel& norm, double rho,
                                    const Vec3& center = Vec3::Zero());

/// Regular grid over the chart domain, row-major (u outer, v inner), endpoints
/// of periodic directions excluded.
std::vector<Vec2> chart_grid(const ChartDomain& domain, int nu, int nv);

}  // namespace birkhoff
