#include "birkhoff/section_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "birkhoff/error.hpp"

namespace birkhoff {

namespace {

struct Marcher {
  const NormModel& norm;
  const SurfaceChart& chart;
  const SectionOptions& opts;
  Vec3 origin;
  Vec3 normal;

  double plane_value(const Vec2& q) const { return (chart.point(q) - origin).dot(normal); }

  Vec2 plane_gradient(const Vec2& q) const {
    const ChartPartials c = chart.evaluate(q);
    return Vec2(c.fu.dot(normal), c.fv.dot(normal));
  }

  // Chart tangent of the section at q, oriented along `prev` (ambient).
  Vec2 tangent(const Vec2& q, const Vec3& prev) const {
    const Vec2 g = plane_gradient(q);
    if (!(g.norm() > 0.0)) {
      throw Error(Errc::trace_stall, "section is tangent to the marching direction");
    }
    Vec2 t(-g.y(), g.x());
    t.normalize();
    const ChartPartials c = chart.evaluate(q);
    if ((c.fu * t.x() + c.fv * t.y()).dot(prev) < 0.0) t = -t;
    return t;
  }

  Vec2 correct(Vec2 q, const Vec2& w) const {
    const double scale = std::max(1.0, origin.norm());
    for (int it = 0; it < opts.max_corrector_iter; ++it) {
      const double g = plane_value(q);
      if (std::abs(g) <= opts.corrector_tol * scale) return q;
      const double slope = plane_gradient(q).dot(w);
      if (!(std::abs(slope) > 0.0)) break;
      q -= (g / slope) * w;
    }
    if (std::abs(plane_value(q)) <= 1e3 * opts.corrector_tol * scale) return q;
    throw Error(Errc::trace_stall, "plane corrector did not converge");
  }

  // Marches `steps` steps starting along ambient direction `dir`.
  std::vector<Vec2> march(const Vec2& q0, Vec3 dir, int steps) const {
    std::vector<Vec2> out;
    Vec2 q = q0;
    const double slack = 0.05 * chart.domain().diagonal();
    for (int k = 0; k < steps; ++k) {
      const Vec2 t = tangent(q, dir);
      const ChartPartials c = chart.evaluate(q);
      const Vec3 ta = c.fu * t.x() + c.fv * t.y();
      const double dq = opts.step / norm.value(ta);
      Vec2 w = plane_gradient(q);
      w.normalize();
      const Vec2 next = correct(q + dq * t, w);
      if (!chart.domain().contains(next, slack)) {
        throw Error(Errc::trace_stall, "section leaves the chart domain");
      }
      if ((next - q).norm() > 4.0 * dq) {
        throw Error(Errc::trace_stall, "corrector jumped to another branch");
      }
      dir = chart.point(next) - chart.point(q);
      q = next;
      out.push_back(q);
    }
    return out;
  }
};

}  // namespace

PlaneSectionCurve trace_section(const NormModel& norm, const SurfaceChart& chart,
                                const Vec2& q, const Vec2& X, const SectionOptions& opts) {
  if (!(X.norm() > 0.0)) throw Error(Errc::plane_degenerate, "zero direction");
  if (!(opts.step > 0.0) || !(opts.arc_extent >= opts.step)) {
    throw Error(Errc::validation_error, "step: need 0 < step <= arc_extent");
  }
  const SurfaceJet j = jet(chart, q);
  PlaneSectionCurve s;
  s.origin = j.p;
  s.eta = birkhoff_normal(norm, j, opts.support);
  s.direction = j.fu * X.x() + j.fv * X.y();
  const Vec3 n = s.eta.cross(s.direction);
  if (!(n.norm() > 1e-10 * s.eta.norm() * s.direction.norm())) {
    throw Error(Errc::plane_degenerate, "eta is parallel to the section direction");
  }
  s.plane_normal = n.normalized();
  s.e1 = s.direction.normalized();
  s.e2 = -(s.eta - s.eta.dot(s.e1) * s.e1).normalized();

  const Marcher m{norm, chart, opts, s.origin, s.plane_normal};
  const int steps = static_cast<int>(std::ceil(opts.arc_extent / opts.step - 1e-9));
  std::vector<Vec2> back = m.march(q, -s.direction, steps);
  const std::vector<Vec2> fwd = m.march(q, s.direction, steps);

  std::reverse(back.begin(), back.end());
  s.chart_points = std::move(back);
  s.base_index = s.chart_points.size();
  s.chart_points.push_back(q);
  s.chart_points.insert(s.chart_points.end(), fwd.begin(), fwd.end());

  s.samples.reserve(s.chart_points.size());
  s.projected.reserve(s.chart_points.size());
  for (const Vec2& c : s.chart_points) {
    const Vec3 p = chart.point(c);
    const Vec3 d = p - s.origin;
    s.samples.push_back(p);
    s.projected.emplace_back(d.dot(s.e1), d.dot(s.e2));
    s.max_plane_residual = std::max(s.max_plane_residual, std::abs(d.dot(s.plane_normal)));
  }
  return s;
}

double oracle_normal_curvature(const NormModel& norm, PlaneSectionCurve& section,
                               const SectionOptions& opts) {
  const PlaneNormModel plane(norm, section.e1, section.e2);
  const PlaneCurveSample curve = make_curve_sample(section.projected, section.base_index);
  section.circ_curvature = opts.method == CircularMethod::ratio
                               ? circular_curvature_ratio(plane, curve, opts.fit_window)
                               : circular_curvature_reparam(plane, curve, opts.step);
  return section.circ_curvature;
}

double oracle_normal_curvature(const NormModel& norm, const SurfaceChart& chart,
                               const Vec2& q, const Vec2& X, const SectionOptions& opts) {
  PlaneSectionCurve s = trace_section(norm, chart, q, X, opts);
  return oracle_normal_curvature(norm, s, opts);
}

}  // namespace birkhoff
