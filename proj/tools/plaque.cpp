// plaque: command-line driver for the renewal-equation toolkit.
//
//   plaque <simulate|steady|reduced|vulnerability|sweep> --config FILE [--out DIR] [--jobs N]
//   plaque --config FILE --dump-config
//
// Exit status: 0 success, 2 configuration error, 3 numeric failure.  Failures
// print one line `plaque: <kind>: <reason>` on stderr.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "plaque/commands.hpp"
#include "plaque/scenario.hpp"
#include "plaque/transport.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericFailure = 3;

int fail(int code, const std::string& kind, std::string reason) {
  for (char& c : reason) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  std::cerr << "plaque: " << kind << ": " << reason << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lipid-structured macrophage / LDL plaque model"};
  app.fallthrough();

  std::string config;
  std::string out;
  unsigned jobs = 1;
  bool dump = false;
  app.add_option("--config", config, "Scenario file (key = value lines)");
  app.add_option("--out", out, "Output directory (overrides output.dir)");
  app.add_option("--jobs", jobs, "Concurrent sweep points")->check(CLI::Range(1u, 1024u));
  app.add_flag("--dump-config", dump, "Print the scenario in canonical form and exit");

  auto* simulate = app.add_subcommand("simulate", "Integrate the transport / LDL system");
  auto* steady = app.add_subcommand("steady", "Stationary state and its profile");
  auto* reduced = app.add_subcommand("reduced", "Lotka or injured moment ODE");
  auto* vulnerability = app.add_subcommand("vulnerability", "Healthy / vulnerable classification");
  auto* sweep = app.add_subcommand("sweep", "Run sweep.command over the sweep.* range");
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kConfigError, "config_error", e.what());
  }

  try {
    if (config.empty()) return fail(kConfigError, "config_error", "--config is required");
    plaque::Scenario scenario = plaque::load_scenario(config);
    if (!out.empty()) scenario.output_dir = out;
    if (dump) {
      plaque::dump_scenario(std::cout, scenario);
      return 0;
    }
    if (app.get_subcommands().empty()) return fail(kConfigError, "config_error", "no subcommand given");
    plaque::validate(scenario);

    const std::filesystem::path dir = scenario.output_dir;
    std::vector<std::filesystem::path> written;
    if (simulate->parsed()) {
      written = plaque::cmd_simulate(scenario, dir);
    } else if (steady->parsed()) {
      written = plaque::cmd_steady(scenario, dir);
    } else if (reduced->parsed()) {
      written = plaque::cmd_reduced(scenario, dir);
    } else if (vulnerability->parsed()) {
      written = plaque::cmd_vulnerability(scenario, dir);
    } else if (sweep->parsed()) {
      written = plaque::cmd_sweep(scenario, dir, jobs);
    }
    for (const auto& p : written) std::cout << p.string() << '\n';
    return 0;
  } catch (const plaque::StabilityError& e) {
    return fail(kNumericFailure, "numeric_failure", e.what());
  } catch (const plaque::NumericError& e) {
    return fail(kNumericFailure, "numeric_failure", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(kConfigError, "config_error", e.what());
  } catch (const std::exception& e) {
    return fail(kNumericFailure, "numeric_failure", e.what());
  }
}
