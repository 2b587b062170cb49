#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "birkhoff/curvature.hpp"
#include "birkhoff/error.hpp"
#include "birkhoff/field_lines.hpp"
#include "birkhoff/section_oracle.hpp"

namespace birkhoff::harness {

/// ParseError or ValidationError with the offending field (dotted path) or line.
class ConfigError : public Error {
 public:
  ConfigError(Errc code, std::string field, int line, const std::string& what)
      : Error(code, what), field_(std::move(field)), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  /// 1-based line of a syntax error, 0 otherwise.
  int line() const noexcept { return line_; }

 private:
  std::string field_;
  int line_ = 0;
};

enum class Command { curvatures, normal_profile, sections, lines, check };
enum class OutputFormat { csv, json };

std::string_view to_string(Command c);
std::optional<Command> parse_command(std::string_view name);

struct NormSpec {
  std::string family = "euclidean";
  Mat3 A = Mat3::Identity();
  double eps = 0.0;
};

struct DomainSpec {
  Vec2 u = Vec2(0.0, 1.0);
  Vec2 v = Vec2(0.0, 1.0);
  /// Unset: periodic when the family's coordinate is periodic and the range is unchanged.
  std::optional<bool> u_periodic;
  std::optional<bool> v_periodic;
};

struct SurfaceSpec {
  std::string family = "euclidean_sphere";
  double r = 1.0;
  double rho = 1.0;
  double a = 1.0, b = 1.0, c = 1.0;
  double R = 2.0;
  double z_min = -1.0, z_max = 1.0;
  Vec3 center = Vec3::Zero();
  int polar_axis = 2;
  std::vector<HeightFunction::Term> terms;
  std::optional<DomainSpec> domain;
  std::optional<Mat3> transform;
  Vec3 offset = Vec3::Zero();
  /// Norm of a minkowski_sphere surface; the run norm when absent.
  std::optional<NormSpec> norm;
  int nu = 20, nv = 20;
};

struct ProfileSpec {
  std::optional<Vec2> point;
  int directions = 64;
  bool oracle = true;
};

struct SectionSpec {
  std::optional<Vec2> point;
  int directions = 4;
  SectionOptions options{};
};

struct LinesSpec {
  std::vector<Vec2> starts;
  std::vector<FlowKind> kinds{FlowKind::principal_1, FlowKind::principal_2};
  FlowOptions options{};
};

struct CheckSpec {
  /// "builtin": built-in surfaces and norms plus the configured pair; "config": configured pair only.
  std::string suite = "builtin";
  int grid = 6;
  int admissibility_samples = 500;
  double oracle_tol = 1e-3;
  double bound_tol = 1e-5;
  double tau_tol = 1e-4;
  double selfadj_tol = 1e-6;
  double golden_tol = 1e-4;
  double line_tol = 1e-3;
  double lemma_tol = 1e-3;
};

struct RunConfig {
  std::optional<Command> command;
  NormSpec norm;
  bool has_norm = false;
  bool has_surface = false;
  SurfaceSpec surface;
  CurvatureOptions curvature;
  ProfileSpec profile;
  SectionSpec sections;
  LinesSpec lines;
  CheckSpec check;
  /// Worker threads for sweeps; 0 picks the hardware concurrency.
  int threads = 0;
  std::string output_path;
  OutputFormat format = OutputFormat::csv;
};

/// JSON document (comments allowed). Throws ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

NormModel build_norm(const NormSpec& spec);
SurfaceChart build_surface(const SurfaceSpec& spec, const NormModel& run_norm);

}  // namespace birkhoff::harness
