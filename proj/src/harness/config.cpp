#include "birkhoff/harness/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace birkhoff::harness {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw ConfigError(Errc::validation_error, field, 0, field + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Strict view of one JSON object: every key must be consumed.
class Block {
 public:
  Block(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) invalid(path_.empty() ? "config" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string field(const std::string& key) const { return join(path_, key); }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number()) invalid(field(key), "expected a number");
    return v.get<double>();
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) invalid(field(key), "expected an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) invalid(field(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) invalid(field(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::size_t count) {
    const json& v = raw(key);
    if (!v.is_array() || v.size() != count) {
      invalid(field(key), "expected an array of " + std::to_string(count) + " numbers");
    }
    std::vector<double> out;
    for (const json& x : v) {
      if (!x.is_number()) invalid(field(key), "expected numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  Vec2 vec2(const std::string& key) {
    const auto v = numbers(key, 2);
    return Vec2(v[0], v[1]);
  }

  Vec3 vec3(const std::string& key, const Vec3& fallback) {
    if (!has(key)) return fallback;
    const auto v = numbers(key, 3);
    return Vec3(v[0], v[1], v[2]);
  }

  Mat3 mat3(const std::string& key) {
    const auto v = numbers(key, 9);
    Mat3 m;
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < 3; ++k) m(i, k) = v[3 * i + k];
    }
    return m;
  }

  Block child(const std::string& key) { return Block(raw(key), field(key)); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) invalid(field(it.key()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

double positive(Block& b, const std::string& key, double fallback) {
  const double v = b.number(key, fallback);
  if (!(v > 0.0)) invalid(b.field(key), "must be positive");
  return v;
}

double non_negative(Block& b, const std::string& key, double fallback) {
  const double v = b.number(key, fallback);
  if (!(v >= 0.0)) invalid(b.field(key), "must be non-negative");
  return v;
}

NormSpec parse_norm(Block b) {
  NormSpec n;
  n.family = b.string("family", "euclidean");
  if (n.family == "euclidean") {
  } else if (n.family == "ellipsoid") {
    if (!b.has("A")) invalid(b.field("A"), "required for the ellipsoid family");
    n.A = b.mat3("A");
    if (std::abs(n.A.determinant()) <= 1e-14 * std::max(1.0, n.A.norm())) {
      invalid(b.field("A"), "must be invertible");
    }
  } else if (n.family == "quartic") {
    n.eps = b.number("eps", 0.0);
    if (!(n.eps >= 0.0)) invalid(b.field("eps"), "must be non-negative, got " + std::to_string(n.eps));
  } else {
    invalid(b.field("family"), "unknown norm family '" + n.family + "'");
  }
  b.finish();
  return n;
}

int axis(Block& b) {
  const int a = b.integer("polar_axis", 2);
  if (a < 0 || a > 2) invalid(b.field("polar_axis"), "must be 0, 1 or 2");
  return a;
}

SurfaceSpec parse_surface(Block b) {
  SurfaceSpec s;
  s.family = b.string("family", "euclidean_sphere");
  const std::string& f = s.family;
  if (f == "euclidean_sphere") {
    s.r = positive(b, "r", 1.0);
    s.polar_axis = axis(b);
  } else if (f == "minkowski_sphere") {
    s.rho = positive(b, "rho", 1.0);
    s.center = b.vec3("center", Vec3::Zero());
    s.polar_axis = axis(b);
    if (b.has("norm")) s.norm = parse_norm(b.child("norm"));
  } else if (f == "ellipsoid") {
    s.a = positive(b, "a", 1.0);
    s.b = positive(b, "b", 1.0);
    s.c = positive(b, "c", 1.0);
    s.polar_axis = axis(b);
  } else if (f == "torus") {
    s.R = positive(b, "R", 2.0);
    s.r = positive(b, "r", 0.5);
    if (!(s.r < s.R)) invalid(b.field("r"), "tube radius must be below R");
  } else if (f == "cylinder") {
    s.r = positive(b, "r", 1.0);
    s.z_min = b.number("z_min", -1.0);
    s.z_max = b.number("z_max", 1.0);
    if (!(s.z_min < s.z_max)) invalid(b.field("z_max"), "must exceed z_min");
  } else if (f == "graph") {
    if (!b.has("terms")) invalid(b.field("terms"), "required for the graph family");
    const json& t = b.raw("terms");
    if (!t.is_array()) invalid(b.field("terms"), "expected an array of [i, j, c]");
    for (const json& term : t) {
      if (!term.is_array() || term.size() != 3 || !term[0].is_number_integer() ||
          !term[1].is_number_integer() || !term[2].is_number() || term[0].get<int>() < 0 ||
          term[1].get<int>() < 0) {
        invalid(b.field("terms"), "each term is [i, j, c] with integers i, j >= 0");
      }
      s.terms.push_back({term[0].get<int>(), term[1].get<int>(), term[2].get<double>()});
    }
  } else if (f == "plane") {
  } else {
    invalid(b.field("family"), "unknown surface family '" + f + "'");
  }

  if (b.has("domain")) {
    Block d = b.child("domain");
    DomainSpec dom;
    dom.u = d.vec2("u");
    dom.v = d.vec2("v");
    if (d.has("u_periodic")) dom.u_periodic = d.boolean("u_periodic", false);
    if (d.has("v_periodic")) dom.v_periodic = d.boolean("v_periodic", false);
    if (!(dom.u.x() < dom.u.y())) invalid(d.field("u"), "need min < max");
    if (!(dom.v.x() < dom.v.y())) invalid(d.field("v"), "need min < max");
    d.finish();
    s.domain = dom;
  }
  if (b.has("transform")) {
    Block t = b.child("transform");
    if (t.has("A")) s.transform = t.mat3("A");
    s.offset = t.vec3("offset", Vec3::Zero());
    t.finish();
  }
  if (b.has("grid")) {
    const auto g = b.numbers("grid", 2);
    if (g[0] != std::floor(g[0]) || g[1] != std::floor(g[1]) || g[0] < 2 || g[1] < 2) {
      invalid(b.field("grid"), "need integers nu, nv >= 2");
    }
    s.nu = static_cast<int>(g[0]);
    s.nv = static_cast<int>(g[1]);
  }
  b.finish();
  return s;
}

CurvatureOptions parse_curvature(Block b) {
  CurvatureOptions o;
  o.h_fd_scale = positive(b, "h_fd_scale", o.h_fd_scale);
  o.umbilic_tol = non_negative(b, "umbilic_tol", o.umbilic_tol);
  o.disc_clamp = non_negative(b, "disc_clamp", o.disc_clamp);
  o.rank_tol = positive(b, "rank_tol", o.rank_tol);
  o.admissible_tol = non_negative(b, "admissible_tol", o.admissible_tol);
  b.finish();
  return o;
}

FlowKind parse_kind(const std::string& field, const std::string& name) {
  for (FlowKind k : {FlowKind::principal_1, FlowKind::principal_2, FlowKind::asymptotic_a,
                     FlowKind::asymptotic_b}) {
    if (name == to_string(k)) return k;
  }
  invalid(field, "unknown trace kind '" + name + "'");
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

constexpr ChartDomain kUnitSquare{-1.0, 1.0, -1.0, 1.0, false, false};

// A coordinate stays periodic only when it keeps the family's full period.
ChartDomain resolve_domain(const DomainSpec& d, const ChartDomain& base) {
  ChartDomain out{d.u.x(), d.u.y(), d.v.x(), d.v.y(), false, false};
  out.u_periodic = d.u_periodic.value_or(base.u_periodic && d.u.x() == base.u_min &&
                                         d.u.y() == base.u_max);
  out.v_periodic = d.v_periodic.value_or(base.v_periodic && d.v.x() == base.v_min &&
                                         d.v.y() == base.v_max);
  return out;
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::curvatures: return "curvatures";
    case Command::normal_profile: return "normal-profile";
    case Command::sections: return "sections";
    case Command::lines: return "lines";
    case Command::check: return "check";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::curvatures, Command::normal_profile, Command::sections,
                    Command::lines, Command::check}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw ConfigError(Errc::parse_error, "", line,
                      "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                          e.what());
  }

  RunConfig cfg;
  Block top(doc, "");
  if (top.has("command")) {
    const std::string name = top.string("command", "");
    cfg.command = parse_command(name);
    if (!cfg.command) invalid("command", "unknown command '" + name + "'");
  }
  if (top.has("norm")) {
    cfg.has_norm = true;
    cfg.norm = parse_norm(top.child("norm"));
  }
  if (top.has("surface")) {
    cfg.has_surface = true;
    cfg.surface = parse_surface(top.child("surface"));
  }
  if (top.has("curvature")) cfg.curvature = parse_curvature(top.child("curvature"));

  if (top.has("profile")) {
    Block p = top.child("profile");
    if (p.has("point")) cfg.profile.point = p.vec2("point");
    cfg.profile.directions = p.integer("directions", cfg.profile.directions);
    if (cfg.profile.directions < 1) invalid(p.field("directions"), "must be at least 1");
    cfg.profile.oracle = p.boolean("oracle", cfg.profile.oracle);
    p.finish();
  }
  if (top.has("sections")) {
    Block s = top.child("sections");
    SectionOptions& o = cfg.sections.options;
    if (s.has("point")) cfg.sections.point = s.vec2("point");
    cfg.sections.directions = s.integer("directions", cfg.sections.directions);
    if (cfg.sections.directions < 1) invalid(s.field("directions"), "must be at least 1");
    o.arc_extent = positive(s, "arc_extent", o.arc_extent);
    o.step = positive(s, "step", o.step);
    if (o.step > o.arc_extent) invalid(s.field("step"), "must not exceed arc_extent");
    const int window = s.integer("fit_window", static_cast<int>(o.fit_window));
    if (window < 5) invalid(s.field("fit_window"), "must be at least 5");
    o.fit_window = static_cast<std::size_t>(window);
    const std::string method = s.string("method", "ratio");
    if (method == "ratio") {
      o.method = CircularMethod::ratio;
    } else if (method == "reparam") {
      o.method = CircularMethod::reparam;
    } else {
      invalid(s.field("method"), "expected 'ratio' or 'reparam'");
    }
    s.finish();
  }
  if (top.has("lines")) {
    Block l = top.child("lines");
    FlowOptions& o = cfg.lines.options;
    if (l.has("starts")) {
      const json& st = l.raw("starts");
      if (!st.is_array()) invalid(l.field("starts"), "expected an array of [u, v]");
      for (const json& p : st) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
          invalid(l.field("starts"), "each start is [u, v]");
        }
        cfg.lines.starts.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
    }
    if (l.has("kinds")) {
      const json& ks = l.raw("kinds");
      if (!ks.is_array() || ks.empty()) invalid(l.field("kinds"), "expected a non-empty array");
      cfg.lines.kinds.clear();
      for (const json& k : ks) {
        if (!k.is_string()) invalid(l.field("kinds"), "expected strings");
        cfg.lines.kinds.push_back(parse_kind(l.field("kinds"), k.get<std::string>()));
      }
    }
    o.step = positive(l, "step", o.step);
    o.max_length = positive(l, "max_length", o.max_length);
    l.finish();
  }
  if (top.has("check")) {
    Block c = top.child("check");
    CheckSpec& k = cfg.check;
    k.suite = c.string("suite", k.suite);
    if (k.suite != "builtin" && k.suite != "config") {
      invalid(c.field("suite"), "expected 'builtin' or 'config'");
    }
    k.grid = c.integer("grid", k.grid);
    if (k.grid < 2) invalid(c.field("grid"), "must be at least 2");
    k.admissibility_samples = c.integer("admissibility_samples", k.admissibility_samples);
    if (k.admissibility_samples < 10) invalid(c.field("admissibility_samples"), "must be at least 10");
    k.oracle_tol = positive(c, "oracle_tol", k.oracle_tol);
    k.bound_tol = positive(c, "bound_tol", k.bound_tol);
    k.tau_tol = positive(c, "tau_tol", k.tau_tol);
    k.selfadj_tol = positive(c, "selfadj_tol", k.selfadj_tol);
    k.golden_tol = positive(c, "golden_tol", k.golden_tol);
    k.line_tol = positive(c, "line_tol", k.line_tol);
    k.lemma_tol = positive(c, "lemma_tol", k.lemma_tol);
    c.finish();
  }
  cfg.threads = top.integer("threads", 0);
  if (cfg.threads < 0) invalid("threads", "must be non-negative");
  if (top.has("output")) {
    Block o = top.child("output");
    cfg.output_path = o.string("path", "");
    const std::string fmt = o.string("format", "csv");
    if (fmt == "csv") {
      cfg.format = OutputFormat::csv;
    } else if (fmt == "json") {
      cfg.format = OutputFormat::json;
    } else {
      invalid("output.format", "expected 'csv' or 'json'");
    }
    o.finish();
  }
  top.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(Errc::parse_error, "", 0, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

NormModel build_norm(const NormSpec& spec) {
  if (spec.family == "ellipsoid") return NormModel::ellipsoid(spec.A);
  if (spec.family == "quartic") return NormModel::quartic(spec.eps);
  return NormModel::euclidean();
}

SurfaceChart build_surface(const SurfaceSpec& s, const NormModel& run_norm) {
  auto base = [&]() {
    const std::string& f = s.family;
    if (f == "euclidean_sphere") return SurfaceChart::euclidean_sphere(s.r, s.polar_axis);
    if (f == "minkowski_sphere") {
      return SurfaceChart::minkowski_sphere(s.norm ? build_norm(*s.norm) : run_norm, s.rho,
                                            s.center, s.polar_axis);
    }
    if (f == "ellipsoid") return SurfaceChart::ellipsoid(s.a, s.b, s.c, s.polar_axis);
    if (f == "torus") return SurfaceChart::torus(s.R, s.r);
    if (f == "cylinder") return SurfaceChart::cylinder(s.r, s.z_min, s.z_max);
    if (f == "graph") return SurfaceChart::graph(HeightFunction::polynomial(s.terms), kUnitSquare);
    return SurfaceChart::plane(kUnitSquare);
  };
  SurfaceChart c = base();
  if (s.domain) c = c.with_domain(resolve_domain(*s.domain, c.domain()));
  if (s.transform || !s.offset.isZero()) {
    c = SurfaceChart::linear_image(s.transform.value_or(Mat3::Identity()), c, s.offset);
  }
  return c;
}

}  // namespace birkhoff::harness
