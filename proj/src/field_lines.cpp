#include "birkhoff/field_lines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "birkhoff/error.hpp"

namespace birkhoff {

std::string_view to_string(FlowKind kind) {
  switch (kind) {
    case FlowKind::principal_1: return "principal_1";
    case FlowKind::principal_2: return "principal_2";
    case FlowKind::asymptotic_a: return "asymptotic_a";
    case FlowKind::asymptotic_b: return "asymptotic_b";
  }
  return "unknown";
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::length_reached: return "length_reached";
    case StopReason::umbilic_encountered: return "umbilic_encountered";
    case StopReason::domain_exit: return "domain_exit";
    case StopReason::direction_undefined: return "direction_undefined";
    case StopReason::definite_region: return "definite_region";
  }
  return "unknown";
}

double FlowlineTrace::max_residual() const {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

namespace {

bool is_principal(FlowKind k) { return k == FlowKind::principal_1 || k == FlowKind::principal_2; }

// Thrown internally to end a trace with a recorded reason.
struct Stop {
  StopReason reason;
};

struct FieldValue {
  Vec2 dir;  // chart coordinates, Minkowski-unit image
  CurvatureReport report;
};

class DirectionField {
 public:
  DirectionField(const NormModel& norm, const SurfaceChart& chart, FlowKind which,
                 const FlowOptions& opts)
      : norm_(norm), chart_(chart), which_(which), opts_(opts) {}

  CurvatureReport report_at(const Vec2& q) const {
    const ChartDomain& d = chart_.domain();
    if (!d.contains(q)) throw Stop{StopReason::domain_exit};
    try {
      return principal_curvatures(norm_, chart_, d.normalize(q), opts_.curvature);
    } catch (const Error& e) {
      switch (e.code()) {
        case Errc::out_of_domain:
        case Errc::degenerate_chart:
        case Errc::fd_step_underflow:
          throw Stop{StopReason::domain_exit};
        case Errc::defective_differential:
          throw Stop{StopReason::direction_undefined};
        default:
          throw;
      }
    }
  }

  bool near_umbilic(const CurvatureReport& r) const {
    const double band = opts_.umbilic_stop_factor * opts_.curvature.umbilic_tol *
                        std::max(1.0, std::abs(r.lambda1) + std::abs(r.lambda2));
    return r.umbilic || std::abs(r.lambda1 - r.lambda2) < band;
  }

  // Direction at a known report, oriented along `prev` (chart coordinates).
  Vec2 direction(const CurvatureReport& r, const Vec2* prev) const {
    Vec2 d;
    if (is_principal(which_)) {
      if (near_umbilic(r)) throw Stop{StopReason::umbilic_encountered};
      d = which_ == FlowKind::principal_1 ? r.E1 : r.E2;
    } else {
      const AsymptoticDirections a = asymptotic_directions(r.h_mat, opts_.curvature.rank_tol);
      if (a.kind == AsymptoticKind::none) throw Stop{StopReason::definite_region};
      if (a.kind == AsymptoticKind::all) throw Stop{StopReason::direction_undefined};
      if (prev == nullptr || a.directions.size() == 1) {
        const bool second = which_ == FlowKind::asymptotic_b && a.directions.size() > 1;
        d = a.directions[second ? 1 : 0];
      } else {
        // Branch continuity: the root closest in angle to the previous direction.
        const Vec3 pa = r.ambient(*prev).normalized();
        double best = -1.0;
        for (const Vec2& c : a.directions) {
          const double s = std::abs(r.ambient(c).normalized().dot(pa));
          if (s > best) {
            best = s;
            d = c;
          }
        }
      }
    }
    d /= norm_.value(r.ambient(d));
    if (prev != nullptr && d.dot(*prev) < 0.0) d = -d;
    return d;
  }

  FieldValue at(const Vec2& q, const Vec2* prev) const {
    FieldValue v{Vec2::Zero(), report_at(q)};
    v.dir = direction(v.report, prev);
    return v;
  }

  double lambda(const CurvatureReport& r) const {
    return which_ == FlowKind::principal_2 ? r.lambda2 : r.lambda1;
  }

 private:
  const NormModel& norm_;
  const SurfaceChart& chart_;
  FlowKind which_;
  const FlowOptions& opts_;
};

FlowlineTrace integrate(const NormModel& norm, const SurfaceChart& chart, const Vec2& q0,
                        FlowKind which, double orientation, const FlowOptions& opts) {
  if (!(opts.step > 0.0) || !(opts.max_length > 0.0)) {
    throw Error(Errc::validation_error, "step: step and max_length must be positive");
  }
  const DirectionField field(norm, chart, which, opts);
  const ChartDomain& dom = chart.domain();

  FlowlineTrace t;
  t.which = which;
  CurvatureReport cur = principal_curvatures(norm, chart, q0, opts.curvature);
  Vec2 dir;
  try {
    if (is_principal(which) && field.near_umbilic(cur)) {
      if (cur.umbilic) throw Error(Errc::umbilic_start, "trace starts at an umbilic point");
      t.points.push_back(dom.normalize(q0));
      t.lambdas.push_back(field.lambda(cur));
      t.stop_reason = StopReason::umbilic_encountered;
      return t;
    }
    dir = orientation * field.direction(cur, nullptr);
  } catch (const Stop& s) {
    if (s.reason == StopReason::definite_region) {
      throw Error(Errc::definite_region, "affine fundamental form is definite at the start");
    }
    if (s.reason == StopReason::umbilic_encountered) {
      throw Error(Errc::umbilic_start, "trace starts at an umbilic point");
    }
    throw Error(Errc::no_convergence, "direction field undefined at the start");
  }

  Vec2 q = dom.normalize(q0);
  t.points.push_back(q);
  if (is_principal(which)) t.lambdas.push_back(field.lambda(cur));

  try {
    while (t.length < opts.max_length * (1.0 - 1e-12)) {
      const double h = std::min(opts.step, opts.max_length - t.length);
      const Vec2 k1 = dir;
      const Vec2 k2 = field.at(q + 0.5 * h * k1, &k1).dir;
      const Vec2 k3 = field.at(q + 0.5 * h * k2, &k2).dir;
      const Vec2 k4 = field.at(q + h * k3, &k3).dir;
      const Vec2 delta = h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const Vec2 qn = q + delta;

      const CurvatureReport next = field.report_at(qn);
      const Vec2 next_dir = field.direction(next, &k4);

      const Vec3 df = next.jet.p - cur.jet.p;
      double res = 0.0;
      if (is_principal(which)) {
        const double lm = 0.5 * (field.lambda(cur) + field.lambda(next));
        res = (next.eta - cur.eta - lm * df).norm() / df.norm();
      } else {
        const CurvatureReport mid = field.report_at(q + 0.5 * delta);
        res = std::abs(normal_curvature(mid, delta));
      }

      q = dom.normalize(qn);
      cur = next;
      dir = next_dir;
      t.points.push_back(q);
      if (is_principal(which)) t.lambdas.push_back(field.lambda(cur));
      t.residuals.push_back(res);
      t.length += h;
    }
    t.stop_reason = StopReason::length_reached;
  } catch (const Stop& s) {
    t.stop_reason = s.reason;
  }
  return t;
}

Vec3 unit_principal(const NormModel& norm, const CurvatureReport& r, int i) {
  const Vec3 v = i == 1 ? r.E1_ambient : r.E2_ambient;
  return v / norm.value(v);
}

struct CoercivityContext {
  const NormModel& norm;
  const SurfaceChart& chart;
  const CoercivityOptions& opts;

  FlowOptions flow(double length) const {
    FlowOptions f;
    f.step = length / opts.substeps;
    f.max_length = length;
    f.curvature = opts.curvature;
    return f;
  }

  // End point of a principal trace of Minkowski length `length` from q.
  Vec2 walk(const Vec2& q, FlowKind which, double orientation, double length) const {
    const FlowlineTrace t = integrate(norm, chart, q, which, orientation, flow(length));
    if (t.stop_reason != StopReason::length_reached) {
      throw Error(Errc::trace_stall, std::string("short principal trace stopped: ") +
                                         std::string(to_string(t.stop_reason)));
    }
    return t.points.back();
  }

  // Orientation (+-1) of the canonical E2 at q relative to an ambient reference.
  double orientation_at(const Vec2& q, const Vec3& ref) const {
    const CurvatureReport r = principal_curvatures(norm, chart, q, opts.curvature);
    return unit_principal(norm, r, 2).dot(ref) < 0.0 ? -1.0 : 1.0;
  }

  // V1-component of D_{V1} V2 at q with V2 oriented along v2_ref.
  double proj(const Vec2& q, const Vec3& v2_ref, double length) const {
    const CurvatureReport r = principal_curvatures(norm, chart, q, opts.curvature);
    if (r.umbilic) throw Error(Errc::umbilic_point, "principal frame undefined at an umbilic");
    const Vec3 v1 = unit_principal(norm, r, 1);
    Vec3 v2 = unit_principal(norm, r, 2);
    if (v2.dot(v2_ref) < 0.0) v2 = -v2;

    auto v2_at = [&](const Vec2& x) {
      const CurvatureReport rx = principal_curvatures(norm, chart, x, opts.curvature);
      Vec3 w = unit_principal(norm, rx, 2);
      return w.dot(v2) < 0.0 ? Vec3(-w) : w;
    };
    // v1 is the canonical E1 at q, which is where integrate() starts.
    const Vec2 qp = walk(q, FlowKind::principal_1, 1.0, length);
    const Vec2 qm = walk(q, FlowKind::principal_1, -1.0, length);
    const Vec3 d = (v2_at(qp) - v2_at(qm)) / (2.0 * length);

    Mat3 frame;
    frame.col(0) = v1;
    frame.col(1) = v2;
    frame.col(2) = r.eta;
    return frame.colPivHouseholderQr().solve(d)(0);
  }

  double derivative(const Vec2& q, const Vec3& v2, double length) const {
    const double s = orientation_at(q, v2);
    const Vec2 qp = walk(q, FlowKind::principal_2, s, length);
    const Vec2 qm = walk(q, FlowKind::principal_2, -s, length);
    return (proj(qp, v2, length) - proj(qm, v2, length)) / (2.0 * length);
  }
};

}  // namespace

FlowlineTrace integrate_curvature_line(const NormModel& norm, const SurfaceChart& chart,
                                       const Vec2& q0, FlowKind which,
                                       const FlowOptions& opts) {
  if (!is_principal(which)) {
    throw Error(Errc::validation_error, "which: expected principal_1 or principal_2");
  }
  return integrate(norm, chart, q0, which, 1.0, opts);
}

FlowlineTrace integrate_asymptotic_curve(const NormModel& norm, const SurfaceChart& chart,
                                         const Vec2& q0, FlowKind branch,
                                         const FlowOptions& opts) {
  if (is_principal(branch)) {
    throw Error(Errc::validation_error, "branch: expected asymptotic_a or asymptotic_b");
  }
  return integrate(norm, chart, q0, branch, 1.0, opts);
}

CoercivityReport coercivity_diagnostic(const NormModel& norm, const SurfaceChart& chart,
                                       const Vec2& q, const CoercivityOptions& opts) {
  if (!(opts.fd_length > 0.0) || opts.substeps < 1 || !(opts.tol > 0.0)) {
    throw Error(Errc::validation_error, "coercivity: fd_length, substeps and tol must be positive");
  }
  const CurvatureReport r = principal_curvatures(norm, chart, q, opts.curvature);
  if (r.umbilic) throw Error(Errc::umbilic_point, "principal frame undefined at an umbilic");
  const CoercivityContext ctx{norm, chart, opts};
  const Vec3 v2 = unit_principal(norm, r, 2);

  CoercivityReport out;
  out.proj = ctx.proj(q, v2, opts.fd_length);
  out.applicable = std::abs(out.proj) <= opts.tol;
  if (out.applicable) {
    out.proj_derivative = ctx.derivative(q, v2, opts.fd_length);
    out.proj_derivative_refined = ctx.derivative(q, v2, 0.5 * opts.fd_length);
  }
  return out;
}

ContactReport enclosing_ball_contact(const NormModel& norm, const SurfaceChart& chart, int nu,
                                     int nv, const CurvatureOptions& opts) {
  if (!chart.closed()) {
    throw Error(Errc::open_surface, std::string("enclosing ball needs a closed surface, got ") +
                                        std::string(to_string(chart.family())));
  }
  if (nu < 2 || nv < 2) throw Error(Errc::validation_error, "grid: need at least 2x2");
  const std::vector<SurfaceChart> atlas = chart.atlas();

  ContactReport best;
  best.r_star = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < atlas.size(); ++i) {
    const SurfaceChart& c = atlas[i];
    const ChartDomain& d = c.domain();
    auto g = [&](const Vec2& q) { return norm.value(c.point(d.normalize(q))); };

    Vec2 q = Vec2::Zero();
    double gq = -std::numeric_limits<double>::infinity();
    for (const Vec2& x : chart_grid(d, nu, nv)) {
      const double v = g(x);
      if (v > gq) {
        gq = v;
        q = x;
      }
    }

    // Newton ascent with finite-difference derivatives, kept inside the domain.
    const double cell = std::max((d.u_max - d.u_min) / nu, (d.v_max - d.v_min) / nv);
    const double s = 1e-4 * d.diagonal();
    for (int it = 0; it < 40; ++it) {
      const Vec2 eu(s, 0.0), ev(0.0, s);
      const double g0 = g(q);
      Vec2 grad((g(q + eu) - g(q - eu)) / (2 * s), (g(q + ev) - g(q - ev)) / (2 * s));
      Mat2 hess;
      hess(0, 0) = (g(q + eu) - 2 * g0 + g(q - eu)) / (s * s);
      hess(1, 1) = (g(q + ev) - 2 * g0 + g(q - ev)) / (s * s);
      hess(0, 1) = hess(1, 0) =
          (g(q + eu + ev) - g(q + eu - ev) - g(q - eu + ev) + g(q - eu - ev)) / (4 * s * s);
      Vec2 step = grad;
      const Eigen::SelfAdjointEigenSolver<Mat2> es(hess);
      if (es.eigenvalues().maxCoeff() < 0.0) step = -hess.ldlt().solve(grad);
      if (step.norm() > cell) step *= cell / step.norm();
      bool moved = false;
      for (int k = 0; k < 30; ++k) {
        Vec2 cand = q + step;
        cand.x() = d.u_periodic ? cand.x() : std::clamp(cand.x(), d.u_min, d.u_max);
        cand.y() = d.v_periodic ? cand.y() : std::clamp(cand.y(), d.v_min, d.v_max);
        if (g(cand) > g0) {
          q = d.normalize(cand);
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved || step.norm() < 1e-12 * d.diagonal()) break;
    }
    gq = g(q);
    if (gq > best.r_star) {
      best.r_star = gq;
      best.q_star = d.normalize(q);
      best.chart_index = i;
    }
  }

  const SurfaceChart& c = atlas[best.chart_index];
  best.p_star = c.point(best.q_star);
  best.K_at_p = principal_curvatures(norm, c, best.q_star, opts).K;
  best.product = best.K_at_p * best.r_star * best.r_star;
  return best;
}

}  // namespace birkhoff
