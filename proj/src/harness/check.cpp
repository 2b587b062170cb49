#include "birkhoff/harness/check.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "birkhoff/harness/commands.hpp"
#include "birkhoff/harness/parallel.hpp"

namespace birkhoff::harness {

bool CheckReport::pass() const {
  for (const CheckRecord& r : records) {
    if (!r.pass) return false;
  }
  return true;
}

std::vector<const CheckRecord*> CheckReport::find(const std::string& name) const {
  std::vector<const CheckRecord*> out;
  for (const CheckRecord& r : records) {
    if (r.name == name) out.push_back(&r);
  }
  return out;
}

Table check_table(const CheckReport& report) {
  Table t;
  t.columns = {"name", "scope", "witnesses", "worst", "relation", "threshold", "pass", "note"};
  for (const CheckRecord& r : report.records) {
    t.rows.push_back({r.name, r.scope, r.witnesses, r.worst, r.relation, r.threshold, r.pass,
                      r.note});
  }
  return t;
}

namespace {

constexpr double kPi = std::numbers::pi;

struct NamedNorm {
  std::string name;
  NormModel norm;
};

struct Pair {
  std::string name;
  NormModel norm;
  SurfaceChart chart;
};

std::string where(const Vec2& q) {
  std::ostringstream s;
  s.precision(6);
  s << "q = (" << q.x() << ", " << q.y() << ")";
  return s.str();
}

// Accumulates witnesses of one invariant.
class Acc {
 public:
  Acc(std::string name, std::string scope, double threshold, std::string relation = "<=") {
    rec_.name = std::move(name);
    rec_.scope = std::move(scope);
    rec_.threshold = threshold;
    rec_.relation = std::move(relation);
    rec_.worst = rec_.relation == "<=" ? 0.0 : std::numeric_limits<double>::infinity();
  }

  void witness(double value, const std::string& at) {
    ++rec_.witnesses;
    const bool le = rec_.relation == "<=";
    if (std::isnan(value)) {
      fail(at + ": non-finite value");
      return;
    }
    rec_.worst = le ? std::max(rec_.worst, value) : std::min(rec_.worst, value);
    const bool ok = le ? value <= rec_.threshold : value >= rec_.threshold;
    if (!ok) {
      std::ostringstream s;
      s.precision(6);
      s << at << ": " << value;
      fail(s.str());
    }
  }

  void fail(const std::string& note) {
    if (rec_.pass) rec_.note = note;
    rec_.pass = false;
  }

  void error(const std::string& at, const std::exception& e) {
    ++rec_.witnesses;
    fail(at + ": " + e.what());
  }

  CheckRecord done() {
    if (rec_.witnesses == 0 && rec_.pass) rec_.note = "no witnesses";
    if (std::isinf(rec_.worst)) rec_.worst = 0.0;
    return rec_;
  }

 private:
  CheckRecord rec_;
};

// Non-periodic coordinates shrunk so that short traces stay inside the chart.
ChartDomain interior(const ChartDomain& d, double fraction) {
  ChartDomain out = d;
  if (!d.u_periodic) {
    const double m = fraction * (d.u_max - d.u_min);
    out.u_min += m;
    out.u_max -= m;
  }
  if (!d.v_periodic) {
    const double m = fraction * (d.v_max - d.v_min);
    out.v_min += m;
    out.v_max -= m;
  }
  return out;
}

std::pair<Vec2, Vec2> orthonormal_basis(const SurfaceJet& j) {
  const Mat32 B = j.frame();
  const Mat2 G = B.transpose() * B;
  const Vec2 a = Vec2::UnitX() / std::sqrt(G(0, 0));
  Vec2 b = Vec2::UnitY() - (a.dot(G * Vec2::UnitY())) * a;
  b /= std::sqrt(b.dot(G * b));
  return {a, b};
}

double line_angle(const Vec3& a, const Vec3& b) {
  const double c = std::abs(a.normalized().dot(b.normalized()));
  return std::acos(std::min(1.0, c));
}

// Refined extremum of theta -> k(X(theta)) near a sampled one (golden section).
template <typename K>
double refine_extremum(K&& k, double theta, double width, bool maximize) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = theta - width;
  double b = theta + width;
  auto f = [&](double t) { return maximize ? -k(t) : k(t); };
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 80 && b - a > 1e-10; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

struct Context {
  const RunConfig& cfg;
  const CheckSpec& spec;

  std::vector<CheckRecord> pair_checks(const Pair& pr) const {
    const std::string scope = pr.name;
    const CurvatureOptions& co = cfg.curvature;
    Acc tau("equiaffinity", scope, spec.tau_tol);
    Acc selfadj("self_adjointness", scope, spec.selfadj_tol);
    Acc chain("chain_rule", scope, 1e-6);
    Acc hcross("h_crosscheck", scope, 1e-6);
    Acc bounds("profile_bounds", scope, spec.bound_tol);
    Acc extrema("profile_extrema", scope, 1e-2);
    Acc signs("sign_equivalence", scope, 0.0);
    Acc conj("conjugacy", scope, 1e-6);
    Acc oracle("oracle_equivalence", scope, spec.oracle_tol);

    const std::vector<Vec2> grid = chart_grid(pr.chart.domain(), spec.grid, spec.grid);
    for (const Vec2& q : grid) {
      const std::string at = where(q);
      CurvatureReport r;
      try {
        r = principal_curvatures(pr.norm, pr.chart, q, co);
      } catch (const std::exception& e) {
        for (Acc* a : {&tau, &selfadj, &chain, &hcross, &bounds, &signs}) a->error(at, e);
        continue;
      }
      tau.witness(r.tau_residual, at);
      selfadj.witness(r.selfadj_residual, at);
      chain.witness(r.chain_residual, at);
      hcross.witness(r.h_crosscheck, at);

      const auto [e1, e2] = orthonormal_basis(r.jet);
      auto X = [&](double t) { return Vec2(std::cos(t) * e1 + std::sin(t) * e2); };
      auto k = [&](double t) { return normal_curvature(r, X(t)); };
      constexpr int kDirs = 64;
      double worst = 0.0;
      int imax = 0, imin = 0;
      std::vector<double> ks(kDirs);
      for (int i = 0; i < kDirs; ++i) {
        ks[i] = k(2.0 * kPi * i / kDirs);
        worst = std::max({worst, ks[i] - r.lambda1, r.lambda2 - ks[i]});
        if (ks[i] > ks[imax]) imax = i;
        if (ks[i] < ks[imin]) imin = i;
      }
      bounds.witness(worst, at);

      const double sep = std::abs(r.lambda1 - r.lambda2);
      if (sep >= 1e-3 * std::max(1.0, std::abs(r.lambda1) + std::abs(r.lambda2))) {
        const double step = 2.0 * kPi / kDirs;
        const double tmax = refine_extremum(k, step * imax, step, true);
        const double tmin = refine_extremum(k, step * imin, step, false);
        extrema.witness(std::max(line_angle(r.ambient(X(tmax)), r.E1_ambient),
                                 line_angle(r.ambient(X(tmin)), r.E2_ambient)),
                        at);
      }

      const SignReport s = sign_equivalences(r);
      if (std::abs(r.K_e) > 1e-6) signs.witness(s.consistent ? 0.0 : 1.0, at);

      const Vec2 xc = Vec2::UnitX();
      if (std::abs(xc.dot(r.h_mat * xc)) > 1e-6 * std::max(1.0, r.h_mat.norm()) *
                                               r.ambient(xc).squaredNorm()) {
        try {
          conj.witness(conjugate_direction(pr.norm, pr.chart, q, xc, co).tangentiality_residual,
                       at);
        } catch (const std::exception& e) {
          conj.error(at, e);
        }
      }
    }

    SectionOptions so = cfg.sections.options;
    so.support = co.support;
    const int og = std::max(2, spec.grid / 2);
    for (const Vec2& q : chart_grid(interior(pr.chart.domain(), 0.15), og, og)) {
      const std::string at = where(q);
      try {
        const CurvatureReport r = principal_curvatures(pr.norm, pr.chart, q, co);
        const auto [e1, e2] = orthonormal_basis(r.jet);
        for (double t : {0.3, 1.9}) {
          const Vec2 X = std::cos(t) * e1 + std::sin(t) * e2;
          const double ko = oracle_normal_curvature(pr.norm, pr.chart, q, X, so);
          oracle.witness(std::abs(ko - normal_curvature(r, X)), at);
        }
      } catch (const std::exception& e) {
        oracle.error(at, e);
      }
    }
    return {tau.done(),   selfadj.done(), chain.done(), hcross.done(), bounds.done(),
            extrema.done(), signs.done(),   conj.done(),  oracle.done()};
  }
};

std::vector<NamedNorm> builtin_norms() {
  Mat3 A = Mat3::Identity();
  A(2, 2) = 2.0;
  return {{"euclidean", NormModel::euclidean()},
          {"ellipsoid(1,1,2)", NormModel::ellipsoid(A)},
          {"quartic(0.05)", NormModel::quartic(0.05)},
          {"quartic(0.1)", NormModel::quartic(0.1)}};
}

struct NamedChart {
  std::string name;
  SurfaceChart chart;
};

std::vector<NamedChart> builtin_surfaces() {
  const ChartDomain square{-1.0, 1.0, -1.0, 1.0, false, false};
  return {
      {"euclidean_sphere(1)", SurfaceChart::euclidean_sphere(1.0)},
      {"ellipsoid(1,1,2)", SurfaceChart::ellipsoid(1.0, 1.0, 2.0)},
      {"ellipsoid(1,1.5,2)", SurfaceChart::ellipsoid(1.0, 1.5, 2.0)},
      {"torus(2,0.5)", SurfaceChart::torus(2.0, 0.5)},
      {"cylinder(1)", SurfaceChart::cylinder(1.0)},
      {"saddle", SurfaceChart::graph(HeightFunction::polynomial(
                                         {{2, 0, 0.5}, {0, 2, -0.5}, {3, 0, 0.2}, {1, 1, 0.1}}),
                                     square)},
      {"plane", SurfaceChart::plane(square)},
  };
}

std::string norm_label(const NormSpec& n) {
  std::ostringstream s;
  s << "config:" << n.family;
  if (n.family == "quartic") s << "(" << n.eps << ")";
  return s.str();
}

CheckRecord admissibility(const std::vector<NamedNorm>& norms, const RunConfig& cfg) {
  const double tol = cfg.curvature.admissible_tol > 0.0 ? cfg.curvature.admissible_tol : 1e-3;
  Acc acc("admissibility", "global", tol, ">=");
  for (const NamedNorm& n : norms) {
    try {
      const AdmissibilityReport r = check_admissible(n.norm, cfg.check.admissibility_samples, tol);
      const double margin = std::min(r.min_eigen_du, r.min_curvature);
      if (!r.pass) {
        std::ostringstream s;
        s.precision(6);
        s << n.name << ": min eigenvalue of du " << r.min_eigen_du
          << ", min curvature of the unit sphere " << r.min_curvature;
        acc.fail(s.str());
      }
      acc.witness(margin, n.name);
    } catch (const std::exception& e) {
      acc.error(n.name, e);
    }
  }
  return acc.done();
}

std::vector<CheckRecord> global_checks(const std::vector<NamedNorm>& norms, const RunConfig& cfg) {
  const CheckSpec& spec = cfg.check;
  const CurvatureOptions& co = cfg.curvature;
  std::vector<CheckRecord> out;

  // Minkowski spheres: lambda_i = 1 / rho and every point umbilic.
  {
    Acc golden("sphere_golden", "global", spec.golden_tol);
    Acc umb("umbilic_classification", "global", 0.0);
    for (const NamedNorm& n : norms) {
      for (double rho : {0.5, 1.0, 2.0}) {
        const SurfaceChart c = SurfaceChart::minkowski_sphere(n.norm, rho);
        for (const Vec2& q : chart_grid(c.domain(), spec.grid, spec.grid)) {
          const std::string at = n.name + " rho=" + std::to_string(rho) + " " + where(q);
          try {
            const CurvatureReport r = principal_curvatures(n.norm, c, q, co);
            golden.witness(std::max(std::abs(r.lambda1 - 1.0 / rho), std::abs(r.lambda2 - 1.0 / rho)),
                           at);
            umb.witness(r.umbilic ? 0.0 : 1.0, at);
          } catch (const std::exception& e) {
            golden.error(at, e);
            umb.error(at, e);
          }
        }
      }
    }
    out.push_back(golden.done());
    out.push_back(umb.done());
  }

  // Euclidean norm against classical formulas.
  {
    Acc acc("euclidean_reduction", "global", 1e-5);
    const NormModel eu = NormModel::euclidean();
    const double R = 2.0, r = 0.5, a = 1.0, b = 1.5, c = 2.0;
    struct Case {
      std::string name;
      SurfaceChart chart;
      std::function<std::pair<double, double>(const Vec3&)> KH;
    };
    const std::vector<Case> cases = {
        {"sphere", SurfaceChart::euclidean_sphere(1.5),
         [](const Vec3&) { return std::pair{1.0 / 2.25, 1.0 / 1.5}; }},
        {"cylinder", SurfaceChart::cylinder(0.8),
         [](const Vec3&) { return std::pair{0.0, 1.0 / 1.6}; }},
        {"torus", SurfaceChart::torus(R, r),
         [=](const Vec3& p) {
           const double cv = (std::hypot(p.x(), p.y()) - R) / r;
           return std::pair{cv / (r * (R + r * cv)), (R + 2.0 * r * cv) / (2.0 * r * (R + r * cv))};
         }},
        {"ellipsoid", SurfaceChart::ellipsoid(a, b, c),
         [=](const Vec3& p) {
           const double s = p.x() * p.x() / std::pow(a, 4) + p.y() * p.y() / std::pow(b, 4) +
                            p.z() * p.z() / std::pow(c, 4);
           const double abc2 = a * a * b * b * c * c;
           return std::pair{1.0 / (abc2 * s * s),
                            (a * a + b * b + c * c - p.squaredNorm()) / (2.0 * abc2 * std::pow(s, 1.5))};
         }},
    };
    for (const Case& cs : cases) {
      for (const Vec2& q : chart_grid(cs.chart.domain(), spec.grid, spec.grid)) {
        const std::string at = cs.name + " " + where(q);
        try {
          const CurvatureReport rep = principal_curvatures(eu, cs.chart, q, co);
          const auto [K, H] = cs.KH(rep.jet.p);
          acc.witness(std::max(std::abs(rep.K - K), std::abs(rep.H_mean - H)), at);
        } catch (const std::exception& e) {
          acc.error(at, e);
        }
      }
    }
    out.push_back(acc.done());
  }

  // F = |Ax| makes A an isometry onto the Euclidean space.
  {
    Acc acc("ellipsoid_transform", "global", 1e-4);
    Mat3 A = Mat3::Identity();
    A(2, 2) = 2.0;
    const NormModel en = NormModel::ellipsoid(A);
    const NormModel eu = NormModel::euclidean();
    for (const SurfaceChart& c : {SurfaceChart::euclidean_sphere(1.0), SurfaceChart::torus(2.0, 0.5)}) {
      const SurfaceChart image = SurfaceChart::linear_image(A, c);
      for (const Vec2& q : chart_grid(c.domain(), spec.grid, spec.grid)) {
        const std::string at = std::string(to_string(c.family())) + " " + where(q);
        try {
          const CurvatureReport m = principal_curvatures(en, c, q, co);
          const CurvatureReport e = principal_curvatures(eu, image, q, co);
          acc.witness(std::max(std::abs(m.lambda1 - e.lambda1), std::abs(m.lambda2 - e.lambda2)), at);
        } catch (const std::exception& ex) {
          acc.error(at, ex);
        }
      }
    }
    out.push_back(acc.done());
  }

  // Signed permutations are isometries of the quartic norm.
  {
    Acc acc("isometry_invariance", "global", 1e-6);
    const NormModel qn = NormModel::quartic(0.1);
    Mat3 cyc;
    cyc << 0, 1, 0, 0, 0, 1, 1, 0, 0;
    Mat3 refl = Mat3::Identity();
    refl(0, 0) = -1.0;
    Mat3 mixed;
    mixed << 0, -1, 0, 1, 0, 0, 0, 0, -1;
    for (const SurfaceChart& c :
         {SurfaceChart::ellipsoid(1.0, 1.5, 2.0), SurfaceChart::torus(2.0, 0.5)}) {
      for (const Mat3& G : {cyc, refl, mixed}) {
        const SurfaceChart image = SurfaceChart::linear_image(G, c);
        for (const Vec2& q : chart_grid(c.domain(), spec.grid, spec.grid)) {
          const std::string at = std::string(to_string(c.family())) + " " + where(q);
          try {
            const double k0 = principal_curvatures(qn, c, q, co).K;
            const double k1 = principal_curvatures(qn, image, q, co).K;
            acc.witness(std::abs(k0 - k1), at);
          } catch (const std::exception& e) {
            acc.error(at, e);
          }
        }
      }
    }
    out.push_back(acc.done());
  }

  // quartic with eps = 0 is the Euclidean norm.
  {
    Acc acc("family_reduction", "global", 1e-9);
    const NormModel q0 = NormModel::quartic(0.0);
    const NormModel eu = NormModel::euclidean();
    for (const SurfaceChart& c :
         {SurfaceChart::ellipsoid(1.0, 1.5, 2.0), SurfaceChart::torus(2.0, 0.5)}) {
      for (const Vec2& q : chart_grid(c.domain(), spec.grid, spec.grid)) {
        const std::string at = std::string(to_string(c.family())) + " " + where(q);
        try {
          const CurvatureReport a = principal_curvatures(q0, c, q, co);
          const CurvatureReport b = principal_curvatures(eu, c, q, co);
          acc.witness(std::max({std::abs(a.lambda1 - b.lambda1), std::abs(a.lambda2 - b.lambda2),
                                (a.eta - b.eta).norm()}),
                      at);
        } catch (const std::exception& e) {
          acc.error(at, e);
        }
      }
    }
    out.push_back(acc.done());
  }

  // Curvature lines: the defining ODE residual, its decay under step halving, and
  // transversality of the two families.
  {
    Acc res("curvature_line_residual", "global", spec.line_tol);
    Acc conv("curvature_line_convergence", "global", 2.0, ">=");
    Acc cross("principal_transversality", "global", 1e-6, ">=");
    const NormModel qn = NormModel::quartic(0.1);
    const SurfaceChart c = SurfaceChart::ellipsoid(1.0, 1.0, 2.0);
    for (const Vec2& q0 : {Vec2(0.9, 0.3), Vec2(2.0, 4.0)}) {
      const std::string at = where(q0);
      try {
        Vec3 tangents[2];
        for (FlowKind k : {FlowKind::principal_1, FlowKind::principal_2}) {
          FlowOptions fo = cfg.lines.options;
          fo.curvature = co;
          fo.max_length = 0.5;
          const FlowlineTrace t1 = integrate_curvature_line(qn, c, q0, k, fo);
          fo.step *= 0.5;
          const FlowlineTrace t2 = integrate_curvature_line(qn, c, q0, k, fo);
          res.witness(t1.max_residual(), at + " " + std::string(to_string(k)));
          conv.witness(t1.max_residual() / std::max(t2.max_residual(), 1e-300),
                       at + " " + std::string(to_string(k)));
          tangents[k == FlowKind::principal_1 ? 0 : 1] =
              c.point(t1.points[1]) - c.point(t1.points[0]);
        }
        const Vec3 xi = jet(c, q0).xi;
        cross.witness(std::abs(tangents[0].normalized().cross(tangents[1].normalized()).dot(xi)), at);
      } catch (const std::exception& e) {
        res.error(at, e);
      }
    }
    out.push_back(res.done());
    out.push_back(conv.done());
    out.push_back(cross.done());
  }

  // Asymptotic curves have vanishing normal curvature.
  {
    Acc acc("asymptotic_residual", "global", spec.line_tol);
    const ChartDomain square{-1.0, 1.0, -1.0, 1.0, false, false};
    const SurfaceChart saddle =
        SurfaceChart::graph(HeightFunction::polynomial({{2, 0, 0.5}, {0, 2, -0.5}}), square);
    for (const NamedNorm& n : norms) {
      for (FlowKind k : {FlowKind::asymptotic_a, FlowKind::asymptotic_b}) {
        const std::string at = n.name + " " + std::string(to_string(k));
        try {
          FlowOptions fo = cfg.lines.options;
          fo.curvature = co;
          fo.max_length = 0.5;
          acc.witness(integrate_asymptotic_curve(n.norm, saddle, Vec2(0.0, 0.0), k, fo).max_residual(),
                      at);
        } catch (const std::exception& e) {
          acc.error(at, e);
        }
      }
    }
    out.push_back(acc.done());
  }

  // Smallest enclosing ball: K r^2 >= 1, with equality on Minkowski spheres.
  {
    Acc lemma("enclosing_ball", "global", 1.0 - spec.lemma_tol, ">=");
    Acc equality("enclosing_ball_sphere_equality", "global", spec.lemma_tol);
    for (const NamedNorm& n : norms) {
      const std::vector<NamedChart> closed = {
          {"euclidean_sphere(1)", SurfaceChart::euclidean_sphere(1.0)},
          {"ellipsoid(1,1,2)", SurfaceChart::ellipsoid(1.0, 1.0, 2.0)},
          {"torus(2,0.5)", SurfaceChart::torus(2.0, 0.5)},
          {"minkowski_sphere(1.5)", SurfaceChart::minkowski_sphere(n.norm, 1.5)}};
      for (const NamedChart& c : closed) {
        const std::string at = n.name + " " + c.name;
        try {
          const ContactReport rep = enclosing_ball_contact(n.norm, c.chart, 24, 24, co);
          lemma.witness(rep.product, at);
          if (c.chart.family() == ChartFamily::minkowski_sphere) {
            equality.witness(std::abs(rep.product - 1.0), at);
          }
        } catch (const std::exception& e) {
          lemma.error(at, e);
        }
      }
    }
    out.push_back(lemma.done());
    out.push_back(equality.done());
  }

  // Surfaces of revolution: principal frames are parallel along the profiles.
  {
    Acc acc("coercivity_symmetry", "global", 1e-6);
    const NormModel eu = NormModel::euclidean();
    const SurfaceChart torus = SurfaceChart::torus(2.0, 0.5);
    for (const Vec2& q : {Vec2(0.3, 0.7), Vec2(1.0, 2.0), Vec2(4.0, 5.5)}) {
      try {
        acc.witness(std::abs(coercivity_diagnostic(eu, torus, q).proj), where(q));
      } catch (const std::exception& e) {
        acc.error(where(q), e);
      }
    }
    out.push_back(acc.done());
  }
  return out;
}

}  // namespace

CheckReport run_check(const RunConfig& cfg) {
  const bool builtin = cfg.check.suite == "builtin";
  std::vector<NamedNorm> norms;
  if (builtin) norms = builtin_norms();
  if (cfg.has_norm || !builtin) norms.push_back({norm_label(cfg.norm), build_norm(cfg.norm)});

  std::vector<Pair> pairs;
  if (builtin) {
    for (const NamedNorm& n : builtin_norms()) {
      for (const NamedChart& c : builtin_surfaces()) pairs.push_back({c.name + " / " + n.name, n.norm, c.chart});
    }
  }
  if (cfg.has_surface || !builtin) {
    const NormModel n = build_norm(cfg.norm);
    pairs.push_back({"config:" + cfg.surface.family + " / " + norm_label(cfg.norm), n,
                     build_surface(cfg.surface, n)});
  } else if (cfg.has_norm) {
    const NormModel n = build_norm(cfg.norm);
    for (const NamedChart& c : builtin_surfaces()) {
      pairs.push_back({c.name + " / " + norm_label(cfg.norm), n, c.chart});
    }
  }

  CheckReport report;
  report.records.push_back(admissibility(norms, cfg));

  const Context ctx{cfg, cfg.check};
  std::vector<std::vector<CheckRecord>> per_pair(pairs.size());
  std::vector<CheckRecord> globals;
  // Slot 0 runs the global checks; slots 1.. the surface/norm pairs.
  parallel_for(pairs.size() + 1, cfg.threads, [&](std::size_t i) {
    if (i == 0) {
      if (builtin) globals = global_checks(norms, cfg);
    } else {
      per_pair[i - 1] = ctx.pair_checks(pairs[i - 1]);
    }
  });
  for (auto& g : globals) report.records.push_back(std::move(g));
  for (auto& p : per_pair) {
    for (auto& r : p) report.records.push_back(std::move(r));
  }
  return report;
}

}  // namespace birkhoff::harness
