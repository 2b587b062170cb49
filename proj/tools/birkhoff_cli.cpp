// Command-line driver: birkhoff <command> --config <path> [--out <path>] [--format csv|json]
//
// Exit status: 0 success, 1 check failure (or a run that could not finish),
// 2 configuration error (parse, validation or an inadmissible norm).

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "birkhoff/harness/check.hpp"
#include "birkhoff/harness/commands.hpp"

using namespace birkhoff;
using namespace birkhoff::harness;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kConfigError = 2;

void emit(const Table& t, const RunConfig& cfg) {
  auto write = [&](std::ostream& os) {
    if (cfg.format == OutputFormat::json) {
      write_json(os, t);
    } else {
      write_csv(os, t);
    }
  };
  if (cfg.output_path.empty() || cfg.output_path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(cfg.output_path);
  if (!out) throw std::runtime_error("cannot write '" + cfg.output_path + "'");
  write(out);
}

int run(Command cmd, const RunConfig& cfg) {
  switch (cmd) {
    case Command::curvatures:
      emit(field_table(run_curvature_field(cfg)), cfg);
      return kOk;
    case Command::normal_profile:
      emit(run_normal_profile(cfg), cfg);
      return kOk;
    case Command::sections:
      emit(run_sections(cfg), cfg);
      return kOk;
    case Command::lines:
      emit(run_lines(cfg), cfg);
      return kOk;
    case Command::check: {
      const CheckReport report = run_check(cfg);
      emit(check_table(report), cfg);
      int failed = 0;
      for (const CheckRecord& r : report.records) {
        if (!r.pass) {
          ++failed;
          std::cerr << "FAIL " << r.name << " [" << r.scope << "] " << r.note << '\n';
        }
      }
      std::cerr << report.records.size() - failed << "/" << report.records.size()
                << " checks passed\n";
      return failed ? kCheckFailed : kOk;
    }
  }
  return kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Birkhoff-Gauss curvature of surfaces in 3D normed spaces"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format;
  std::vector<CLI::App*> subs;
  for (Command c : {Command::curvatures, Command::normal_profile, Command::sections,
                    Command::lines, Command::check}) {
    CLI::App* sub = app.add_subcommand(std::string(to_string(c)));
    sub->add_option("--config", config_path, "configuration document (JSON)")->required();
    sub->add_option("--out", out_path, "output file; standard output when omitted");
    sub->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  Command cmd = Command::curvatures;
  for (CLI::App* s : subs) {
    if (s->parsed()) cmd = *parse_command(s->get_name());
  }

  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  }
  if (cfg.command && *cfg.command != cmd) {
    std::cerr << "note: config names command '" << to_string(*cfg.command) << "', running '"
              << to_string(cmd) << "'\n";
  }
  if (!out_path.empty()) cfg.output_path = out_path;
  if (!format.empty()) cfg.format = format == "json" ? OutputFormat::json : OutputFormat::csv;

  try {
    return run(cmd, cfg);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return e.code() == Errc::inadmissible_norm || e.code() == Errc::validation_error
               ? kConfigError
               : kCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kCheckFailed;
  }
}
