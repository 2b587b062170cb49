#include "birkhoff/harness/commands.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "birkhoff/harness/parallel.hpp"

namespace birkhoff::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Table make_table(std::vector<std::string> columns) {
  Table t;
  t.columns = std::move(columns);
  return t;
}

// Euclidean-orthonormal tangent basis in chart coordinates.
std::pair<Vec2, Vec2> orthonormal_chart_basis(const SurfaceJet& j) {
  const Mat32 B = j.frame();
  const Mat2 G = B.transpose() * B;
  const Vec2 a = Vec2::UnitX() / std::sqrt(G(0, 0));
  Vec2 b = Vec2::UnitY() - (a.dot(G * Vec2::UnitY())) * a;
  b /= std::sqrt(b.dot(G * b));
  return {a, b};
}

}  // namespace

const std::vector<std::string>& FieldRecord::fields() {
  static const std::vector<std::string> f = {
      "u",       "v",       "p_x",        "p_y",    "p_z",   "xi_x",  "xi_y",
      "xi_z",    "eta_x",   "eta_y",      "eta_z",  "lambda1", "lambda2", "K",
      "H_mean",  "K_e",     "umbilic",    "tau_residual", "rank_h", "error"};
  return f;
}

std::vector<Cell> FieldRecord::cells() const {
  return {u,        v,       p.x(),   p.y(),   p.z(),        xi.x(),
          xi.y(),   xi.z(),  eta.x(), eta.y(), eta.z(),      lambda1,
          lambda2,  K,       H_mean,  K_e,     umbilic,      tau_residual,
          static_cast<long long>(rank_h), error};
}

void require_admissible(const NormModel& norm, const RunConfig& cfg) {
  if (cfg.curvature.admissible_tol <= 0.0) return;
  const AdmissibilityReport r =
      check_admissible(norm, cfg.check.admissibility_samples, cfg.curvature.admissible_tol);
  if (!r.pass) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "norm fails the admissibility check: min eigenvalue of du " << r.min_eigen_du
        << ", min curvature of the unit sphere " << r.min_curvature << " (tolerance "
        << cfg.curvature.admissible_tol << ") near v = (" << r.worst_v.x() << ", "
        << r.worst_v.y() << ", " << r.worst_v.z() << ")";
    throw Error(Errc::inadmissible_norm, msg.str());
  }
}

Vec2 default_point(const SurfaceChart& chart, const std::optional<Vec2>& point) {
  if (point) return *point;
  const ChartDomain& d = chart.domain();
  return Vec2(0.5 * (d.u_min + d.u_max), 0.5 * (d.v_min + d.v_max));
}

std::vector<FieldRecord> run_curvature_field(const RunConfig& cfg) {
  const NormModel norm = build_norm(cfg.norm);
  require_admissible(norm, cfg);
  const SurfaceChart chart = build_surface(cfg.surface, norm);
  const std::vector<Vec2> grid = chart_grid(chart.domain(), cfg.surface.nu, cfg.surface.nv);

  std::vector<FieldRecord> out(grid.size());
  parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
    FieldRecord& rec = out[i];
    rec.u = grid[i].x();
    rec.v = grid[i].y();
    try {
      const CurvatureReport r = principal_curvatures(norm, chart, grid[i], cfg.curvature);
      rec.p = r.jet.p;
      rec.xi = r.jet.xi;
      rec.eta = r.eta;
      rec.lambda1 = r.lambda1;
      rec.lambda2 = r.lambda2;
      rec.K = r.K;
      rec.H_mean = r.H_mean;
      rec.K_e = r.K_e;
      rec.umbilic = r.umbilic;
      rec.tau_residual = r.tau_residual;
      rec.rank_h = r.rank_h;
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  });
  return out;
}

Table field_table(const std::vector<FieldRecord>& records) {
  Table t = make_table(FieldRecord::fields());
  for (const FieldRecord& r : records) t.rows.push_back(r.cells());
  return t;
}

Table run_normal_profile(const RunConfig& cfg) {
  const NormModel norm = build_norm(cfg.norm);
  require_admissible(norm, cfg);
  const SurfaceChart chart = build_surface(cfg.surface, norm);
  const Vec2 q = default_point(chart, cfg.profile.point);
  const CurvatureReport r = principal_curvatures(norm, chart, q, cfg.curvature);
  const auto [e1, e2] = orthonormal_chart_basis(r.jet);

  const int n = cfg.profile.directions;
  Table t = make_table({"u", "v", "theta", "X_u", "X_v", "k", "k_oracle", "lambda1", "lambda2",
                        "error"});
  t.rows.resize(n);
  parallel_for(static_cast<std::size_t>(n), cfg.threads, [&](std::size_t i) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / n;
    const Vec2 X = std::cos(theta) * e1 + std::sin(theta) * e2;
    const double k = normal_curvature(r, X);
    double ko = kNaN;
    std::string err;
    if (cfg.profile.oracle) {
      try {
        SectionOptions so = cfg.sections.options;
        so.support = cfg.curvature.support;
        ko = oracle_normal_curvature(norm, chart, q, X, so);
      } catch (const std::exception& e) {
        err = e.what();
      }
    }
    t.rows[i] = {q.x(), q.y(), theta, X.x(), X.y(), k, ko, r.lambda1, r.lambda2, err};
  });
  return t;
}

Table run_sections(const RunConfig& cfg) {
  const NormModel norm = build_norm(cfg.norm);
  require_admissible(norm, cfg);
  const SurfaceChart chart = build_surface(cfg.surface, norm);
  const Vec2 q = default_point(chart, cfg.sections.point);
  const CurvatureReport r = principal_curvatures(norm, chart, q, cfg.curvature);
  const auto [e1, e2] = orthonormal_chart_basis(r.jet);

  const int n = cfg.sections.directions;
  std::vector<std::vector<std::vector<Cell>>> blocks(n);
  parallel_for(static_cast<std::size_t>(n), cfg.threads, [&](std::size_t d) {
    const double theta = std::numbers::pi * static_cast<double>(d) / n;
    const Vec2 X = std::cos(theta) * e1 + std::sin(theta) * e2;
    const double k = normal_curvature(r, X);
    try {
      PlaneSectionCurve s = trace_section(norm, chart, q, X, cfg.sections.options);
      const double ko = oracle_normal_curvature(norm, s, cfg.sections.options);
      for (std::size_t i = 0; i < s.samples.size(); ++i) {
        const long long offset = static_cast<long long>(i) - static_cast<long long>(s.base_index);
        blocks[d].push_back({static_cast<long long>(d), theta, offset, s.chart_points[i].x(),
                             s.chart_points[i].y(), s.samples[i].x(), s.samples[i].y(),
                             s.samples[i].z(), s.projected[i].x(), s.projected[i].y(), ko, k,
                             std::string()});
      }
    } catch (const std::exception& e) {
      blocks[d].push_back({static_cast<long long>(d), theta, 0LL, kNaN, kNaN, kNaN, kNaN, kNaN,
                           kNaN, kNaN, kNaN, k, std::string(e.what())});
    }
  });
  Table t = make_table({"direction", "theta", "offset", "u", "v", "x", "y", "z", "plane_x",
                        "plane_y", "k_oracle", "k", "error"});
  for (auto& b : blocks) {
    for (auto& row : b) t.rows.push_back(std::move(row));
  }
  return t;
}

Table run_lines(const RunConfig& cfg) {
  const NormModel norm = build_norm(cfg.norm);
  require_admissible(norm, cfg);
  const SurfaceChart chart = build_surface(cfg.surface, norm);
  std::vector<Vec2> starts = cfg.lines.starts;
  if (starts.empty()) starts.push_back(default_point(chart, std::nullopt));

  FlowOptions opts = cfg.lines.options;
  opts.curvature = cfg.curvature;
  const std::size_t nk = cfg.lines.kinds.size();
  std::vector<std::vector<std::vector<Cell>>> blocks(starts.size() * nk);
  parallel_for(blocks.size(), cfg.threads, [&](std::size_t id) {
    const Vec2& q0 = starts[id / nk];
    const FlowKind kind = cfg.lines.kinds[id % nk];
    const std::string kname(to_string(kind));
    try {
      const bool principal = kind == FlowKind::principal_1 || kind == FlowKind::principal_2;
      const FlowlineTrace tr = principal ? integrate_curvature_line(norm, chart, q0, kind, opts)
                                         : integrate_asymptotic_curve(norm, chart, q0, kind, opts);
      const std::string stop(to_string(tr.stop_reason));
      for (std::size_t i = 0; i < tr.points.size(); ++i) {
        const double lam = i < tr.lambdas.size() ? tr.lambdas[i] : kNaN;
        const double res = i > 0 ? tr.residuals[i - 1] : 0.0;
        blocks[id].push_back({static_cast<long long>(id), kname, q0.x(), q0.y(),
                              static_cast<long long>(i), tr.points[i].x(), tr.points[i].y(), lam,
                              res, stop, std::string()});
      }
    } catch (const std::exception& e) {
      blocks[id].push_back({static_cast<long long>(id), kname, q0.x(), q0.y(), 0LL, kNaN, kNaN,
                            kNaN, kNaN, std::string(), std::string(e.what())});
    }
  });
  Table t = make_table({"trace", "kind", "start_u", "start_v", "index", "u", "v", "lambda",
                        "residual", "stop_reason", "error"});
  for (auto& b : blocks) {
    for (auto& row : b) t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace birkhoff::harness
