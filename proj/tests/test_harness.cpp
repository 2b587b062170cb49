#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "birkhoff/harness/check.hpp"
#include "birkhoff/harness/commands.hpp"
#include "birkhoff/harness/parallel.hpp"
#include "support.hpp"

using namespace birkhoff;
using namespace birkhoff::harness;
using namespace testsupport;

namespace {

std::string csv(const Table& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

ConfigError config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError(Errc::parse_error, "", 0, "unreachable");
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / ("birkhoff_test_" + name);
  std::ofstream(p) << text;
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BIRKHOFF_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSphereConfig = R"({
  "norm": {"family": "quartic", "eps": 0.1},
  "surface": {"family": "minkowski_sphere", "rho": 2, "grid": [20, 20]}
})";

}  // namespace

// ---- configuration ----------------------------------------------------------

TEST_CASE("minimal config fills every default") {
  const RunConfig c = parse_config(R"({"surface": {"family": "euclidean_sphere"}})");
  CHECK_FALSE(c.command);
  CHECK(c.norm.family == "euclidean");
  CHECK(c.surface.r == 1.0);
  CHECK(c.surface.nu == 20);
  CHECK(c.surface.nv == 20);
  CHECK(c.curvature.h_fd_scale == 1e-4);
  CHECK(c.curvature.umbilic_tol == 1e-6);
  CHECK(c.curvature.disc_clamp == 1e-12);
  CHECK(c.curvature.rank_tol == 1e-8);
  CHECK(c.sections.options.step == 1e-3);
  CHECK(c.sections.options.arc_extent == 0.2);
  CHECK(c.sections.options.fit_window == 11);
  CHECK(c.profile.directions == 64);
  CHECK(c.lines.options.step == 1e-3);
  CHECK(c.lines.options.max_length == 1.0);
  CHECK(c.check.oracle_tol == 1e-3);
  CHECK(c.format == OutputFormat::csv);
  CHECK(c.output_path.empty());
}

TEST_CASE("comments are accepted") {
  const RunConfig c = parse_config(kSphereConfig);
  CHECK(c.norm.family == "quartic");
  CHECK(c.norm.eps == 0.1);
  CHECK(parse_config("// leading comment\n{/* inline */ \"threads\": 2}").threads == 2);
}

TEST_CASE("validation errors name the offending field") {
  ConfigError e = config_error(R"({"norm": {"family": "quartic", "eps": -1}})");
  CHECK(e.code() == Errc::validation_error);
  CHECK(e.field() == "norm.eps");

  e = config_error(R"({"norm": {"family": "octahedral"}})");
  CHECK(e.code() == Errc::validation_error);
  CHECK(e.field() == "norm.family");

  e = config_error(R"({"surface": {"family": "klein_bottle"}})");
  CHECK(e.field() == "surface.family");

  e = config_error(R"({"surface": {"family": "torus", "R": 1, "r": 2}})");
  CHECK(e.field() == "surface.r");

  e = config_error(R"({"surface": {"family": "torus", "grid": [1, 5]}})");
  CHECK(e.field() == "surface.grid");

  e = config_error(R"({"norm": {"family": "ellipsoid", "A": [1,0,0, 0,1,0, 0,0,0]}})");
  CHECK(e.field() == "norm.A");

  e = config_error(R"({"check": {"oracle_tol": 0}})");
  CHECK(e.field() == "check.oracle_tol");

  e = config_error(R"({"sections": {"method": "guess"}})");
  CHECK(e.field() == "sections.method");

  e = config_error(R"({"surface": {"family": "plane", "colour": 3}})");
  CHECK(e.field() == "surface.colour");

  e = config_error(R"({"command": "plot"})");
  CHECK(e.field() == "command");
}

TEST_CASE("syntax errors report the line") {
  const ConfigError e = config_error("{\n  \"norm\": {\"family\": quartic}\n}");
  CHECK(e.code() == Errc::parse_error);
  CHECK(e.line() == 2);
}

TEST_CASE("surfaces are built from their blocks") {
  const RunConfig c = parse_config(R"({
    "surface": {"family": "graph", "terms": [[2, 0, 0.5], [0, 2, -0.5]],
                "domain": {"u": [-0.5, 0.5], "v": [-0.25, 0.25]},
                "transform": {"A": [2,0,0, 0,1,0, 0,0,1], "offset": [0, 0, 1]}}
  })");
  const SurfaceChart s = build_surface(c.surface, build_norm(c.norm));
  CHECK(s.family() == ChartFamily::linear_image);
  CHECK(s.domain().u_max == 0.5);
  CHECK(s.domain().v_min == -0.25);
  CHECK(max_abs(s.point(Vec2(0.2, 0.1)) - Vec3(0.4, 0.1, 1.0 + 0.5 * 0.04 - 0.5 * 0.01)) < 1e-15);

  const RunConfig t = parse_config(R"({"surface": {"family": "torus", "domain": {"u": [0, 1], "v": [0, 6.283185307179586]}}})");
  const SurfaceChart ts = build_surface(t.surface, build_norm(t.norm));
  CHECK_FALSE(ts.domain().u_periodic);
  CHECK(ts.domain().v_periodic);
}

// ---- tables -----------------------------------------------------------------

TEST_CASE("CSV uses 17 significant digits and quotes text") {
  Table t;
  t.columns = {"a", "b", "c", "d"};
  t.rows.push_back({1.0 / 3.0, 7LL, true, std::string("x, \"y\"")});
  t.rows.push_back({std::numeric_limits<double>::quiet_NaN(), -2LL, false, std::string()});
  const std::string s = csv(t);
  CHECK(s == "a,b,c,d\n0.33333333333333331,7,1,\"x, \"\"y\"\"\"\nnan,-2,0,\n");
  CHECK(std::stod(split(split(s, '\n')[1])[0]) == 1.0 / 3.0);
}

TEST_CASE("JSON mirrors the column names") {
  Table t;
  t.columns = {"u", "K", "umbilic", "error"};
  t.rows.push_back({0.5, 0.25, true, std::string()});
  t.rows.push_back({std::numeric_limits<double>::infinity(), 1LL, false, std::string("boom")});
  std::ostringstream os;
  write_json(os, t);
  const nlohmann::json j = nlohmann::json::parse(os.str());
  REQUIRE(j.size() == 2);
  CHECK(j[0]["K"].get<double>() == 0.25);
  CHECK(j[0]["umbilic"].get<bool>());
  CHECK(j[1]["u"].is_null());
  CHECK(j[1]["error"] == "boom");
}

// ---- sweeps -----------------------------------------------------------------

TEST_CASE("curvature field header matches FieldRecord") {
  RunConfig c = parse_config(kSphereConfig);
  c.surface.nu = c.surface.nv = 3;
  const std::string s = csv(field_table(run_curvature_field(c)));
  const std::string header = s.substr(0, s.find('\n'));
  std::string expected;
  for (const std::string& f : FieldRecord::fields()) expected += (expected.empty() ? "" : ",") + f;
  CHECK(header == expected);
  CHECK(header ==
        "u,v,p_x,p_y,p_z,xi_x,xi_y,xi_z,eta_x,eta_y,eta_z,lambda1,lambda2,K,H_mean,K_e,umbilic,"
        "tau_residual,rank_h,error");
}

TEST_CASE("curvature field examples") {
  const std::vector<FieldRecord> sphere = run_curvature_field(parse_config(kSphereConfig));
  REQUIRE(sphere.size() == 400);
  for (const FieldRecord& r : sphere) {
    CHECK(r.error.empty());
    CHECK(std::abs(r.K - 0.25) <= 1e-4);
    CHECK(r.umbilic);
  }

  const std::vector<FieldRecord> plane =
      run_curvature_field(parse_config(R"({"norm": {"family": "quartic", "eps": 0.1}, "surface": {"family": "plane"}})"));
  for (const FieldRecord& r : plane) {
    CHECK(std::abs(r.K) <= 1e-6);
    CHECK(std::abs(r.H_mean) <= 1e-6);
  }

  const std::vector<FieldRecord> torus =
      run_curvature_field(parse_config(R"({"surface": {"family": "torus", "R": 2, "r": 0.5}})"));
  for (const FieldRecord& r : torus) {
    const double cv = std::cos(r.v);
    CHECK(std::abs(r.K - cv / (0.5 * (2 + 0.5 * cv))) <= 1e-5);
  }
}

TEST_CASE("sweep errors are recorded per point") {
  // the domain reaches the pole, where the sphere chart is singular
  const std::vector<FieldRecord> recs = run_curvature_field(parse_config(R"({
    "surface": {"family": "euclidean_sphere", "domain": {"u": [0, 1], "v": [0, 1]}, "grid": [3, 3]}})"));
  REQUIRE(recs.size() == 9);
  CHECK_FALSE(recs[0].error.empty());
  CHECK(std::isnan(recs[0].K));
  CHECK(recs[8].error.empty());
}

TEST_CASE("output does not depend on the thread count") {
  RunConfig c = parse_config(R"({"norm": {"family": "quartic", "eps": 0.1},
                                 "surface": {"family": "torus", "grid": [12, 12]}})");
  c.threads = 1;
  const std::string one = csv(field_table(run_curvature_field(c)));
  c.threads = 4;
  const std::string four = csv(field_table(run_curvature_field(c)));
  CHECK(one == four);

  c.profile.directions = 16;
  c.threads = 1;
  const std::string p1 = csv(run_normal_profile(c));
  c.threads = 3;
  CHECK(p1 == csv(run_normal_profile(c)));
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 7) throw std::runtime_error("seven");
                  }),
                  std::runtime_error);
}

TEST_CASE("normal profile stays within the principal curvatures") {
  RunConfig c = parse_config(R"({"norm": {"family": "quartic", "eps": 0.1},
                                 "surface": {"family": "ellipsoid", "a": 1, "b": 1.5, "c": 2},
                                 "profile": {"point": [1.0, 0.6], "directions": 32}})");
  const Table t = run_normal_profile(c);
  REQUIRE(t.rows.size() == 32);
  for (const auto& row : t.rows) {
    const double k = std::get<double>(row[5]);
    const double ko = std::get<double>(row[6]);
    const double l1 = std::get<double>(row[7]);
    const double l2 = std::get<double>(row[8]);
    CHECK(k <= l1 + 1e-5);
    CHECK(k >= l2 - 1e-5);
    CHECK(std::abs(k - ko) <= 1e-3);
  }
}

TEST_CASE("sections and lines tables") {
  RunConfig c = parse_config(R"({"norm": {"family": "quartic", "eps": 0.1},
                                 "surface": {"family": "ellipsoid", "a": 1, "b": 1.5, "c": 2},
                                 "sections": {"point": [1.0, 0.6], "directions": 3},
                                 "lines": {"starts": [[1.0, 0.6]], "max_length": 0.05}})");
  const Table s = run_sections(c);
  CHECK(s.columns[0] == "direction");
  CHECK(s.rows.size() > 3 * 300);
  for (const auto& row : s.rows) {
    CHECK(std::get<std::string>(row.back()).empty());
    CHECK(std::abs(std::get<double>(row[10]) - std::get<double>(row[11])) <= 1e-3);
  }
  const Table l = run_lines(c);
  CHECK(l.columns[1] == "kind");
  CHECK(l.rows.size() == 2 * 51);
  CHECK(std::get<std::string>(l.rows.back()[9]) == "length_reached");
}

TEST_CASE("inadmissible norms stop the pipeline") {
  const RunConfig c = parse_config(R"({"norm": {"family": "quartic", "eps": 1e5}})");
  try {
    run_curvature_field(c);
    FAIL("expected InadmissibleNorm");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::inadmissible_norm);
  }
}

// ---- check suite ------------------------------------------------------------

TEST_CASE("the built-in suite passes") {
  const CheckReport r = run_check(parse_config("{}"));
  for (const CheckRecord& rec : r.records) {
    CAPTURE(rec.name);
    CAPTURE(rec.scope);
    CAPTURE(rec.note);
    CHECK(rec.pass);
  }
  CHECK(r.pass());
  CHECK(r.records.size() > 100);
  for (const char* name : {"admissibility", "sphere_golden", "oracle_equivalence", "profile_bounds",
                           "equiaffinity", "enclosing_ball", "family_reduction",
                           "curvature_line_residual", "isometry_invariance"}) {
    CAPTURE(name);
    CHECK_FALSE(r.find(name).empty());
  }
  const Table t = check_table(r);
  CHECK(t.columns.front() == "name");
  CHECK(t.rows.size() == r.records.size());
}

TEST_CASE("umbilic_tol = 0 fails the umbilic classification") {
  const CheckReport r = run_check(parse_config(R"({"curvature": {"umbilic_tol": 0}})"));
  CHECK_FALSE(r.pass());
  for (const CheckRecord& rec : r.records) {
    CAPTURE(rec.name);
    CHECK(rec.pass == (rec.name != "umbilic_classification"));
  }
}

TEST_CASE("quartic eps = 0 reproduces the euclidean field") {
  RunConfig q = parse_config(R"({"norm": {"family": "quartic", "eps": 0}, "surface": {"family": "torus"}})");
  RunConfig e = parse_config(R"({"surface": {"family": "torus"}})");
  const auto a = run_curvature_field(q), b = run_curvature_field(e);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a[i].K - b[i].K) <= 1e-9);
    CHECK(std::abs(a[i].H_mean - b[i].H_mean) <= 1e-9);
  }
  const CheckReport r = run_check(parse_config(R"({"norm": {"family": "quartic", "eps": 0}, "check": {"suite": "config"}})"));
  CHECK(r.pass());
}

// ---- command line -----------------------------------------------------------

TEST_CASE("CLI exit codes and byte-identical output") {
  const auto good = write_temp("good.json", kSphereConfig);
  const auto bad = write_temp("bad.json", R"({"norm": {"family": "quartic", "eps": -1}})");
  const auto broken = write_temp("broken.json", "{\n  \"norm\": \n");
  const auto flat = write_temp("flat.json", R"({"norm": {"family": "quartic", "eps": 1e5}})");
  const auto umb = write_temp("umb.json", R"({"curvature": {"umbilic_tol": 0}})");
  const auto out1 = std::filesystem::temp_directory_path() / "birkhoff_test_out1.csv";
  const auto out2 = std::filesystem::temp_directory_path() / "birkhoff_test_out2.csv";

  CHECK(run_cli("curvatures --config " + good.string() + " --out " + out1.string()) == 0);
  CHECK(run_cli("curvatures --config " + good.string() + " --out " + out2.string()) == 0);
  CHECK(slurp(out1) == slurp(out2));
  CHECK(slurp(out1).rfind("u,v,p_x", 0) == 0);

  CHECK(run_cli("curvatures --config " + bad.string()) == 2);
  CHECK(run_cli("curvatures --config " + broken.string()) == 2);
  CHECK(run_cli("curvatures --config /nonexistent/config.json") == 2);
  CHECK(run_cli("curvatures --config " + flat.string()) == 2);
  CHECK(run_cli("curvatures") == 2);
  CHECK(run_cli("check --config " + umb.string()) == 1);
  CHECK(run_cli("normal-profile --config " + good.string() + " --format json --out " + out1.string()) == 0);
  CHECK(nlohmann::json::parse(slurp(out1)).size() == 64);
}
