#pragma once

// Scenario files: flat `key = value` lines with dotted section names, `#`
// comments, no duplicates, no unknown keys.  Every key has a default, so a
// scenario only lists what it changes.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plaque/kernels.hpp"
#include "plaque/reduced.hpp"
#include "plaque/vulnerability.hpp"

namespace plaque {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Scenario {
  // velocity.*
  std::string velocity_kind = "constant";  // constant | affine | bump_decay
  double v = 1.0;
  double v1 = 1.0;
  double v2 = 1.0;
  double delta = 1.0;
  double lambda = 1.0;
  // mortality.*
  double mu = 1.0;
  // boundary.*
  std::string boundary_kind = "ldl_linear";  // ldl_linear | macrophage_driven | self_reinforced
  double alpha = 1.0;
  double b = 1.0;
  double sigma_m = 1.0;
  // flux.*
  std::string flux_kind = "logistic";  // logistic | malthus
  double gamma = 1.0;
  double beta = 1.0;
  // ldl.*
  std::string ldl_mode = "dynamic";  // dynamic | quasi_steady

  // initial.*
  std::string initial_profile = "zero";  // zero | exponential | steady | table
  double initial_amplitude = 1.0;
  std::string initial_table;
  double c0 = 1.0;

  // grid.*
  double a_max = 15.0;
  long long n_cells = 300;

  // time.*
  double t_end = 50.0;
  double sample_every = 0.5;
  double cfl = 0.9;

  // steady.*
  long long steady_points = 301;

  // reduced.*
  std::string reduced_system = "lotka";  // lotka | injured
  double reduced_m0 = 2.0;
  double reduced_c0 = 1.0;
  double reduced_dt = 1e-3;
  double reduced_t_end = 10.0;

  // output.*
  std::string output_dir = "out";

  // sweep.*
  std::string sweep_command;  // empty: no sweep
  std::string sweep_param;
  double sweep_from = 0.0;
  double sweep_to = 0.0;
  long long sweep_count = 0;
  std::string sweep_scale = "linear";  // linear | log

  /// Directory relative paths in the file are resolved against; not part of
  /// the scenario's identity.
  std::filesystem::path base_dir;

  bool operator==(const Scenario& o) const;

  KernelSet kernels() const;
  SimplifiedParams simplified() const;
  LotkaParams lotka() const;
  InjuredParams injured() const;
  bool has_sweep() const { return !sweep_command.empty(); }
  /// Values of the swept key, evenly spaced (or geometrically, for log scale)
  /// and inclusive of both ends.
  std::vector<double> sweep_values() const;
  /// Copy with the swept key set to `value`.
  Scenario with_value(const std::string& key, double value) const;
  std::filesystem::path table_path() const;
};

Scenario parse_scenario(std::istream& in);
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical form: every key, fixed order, 17 significant digits.
void dump_scenario(std::ostream& os, const Scenario& s);
std::string dump_scenario(const Scenario& s);

/// All dotted keys in canonical order.
const std::vector<std::string>& scenario_keys();

/// Checks everything that does not depend on the subcommand: kernel
/// preconditions, grid, time stepping, sweep range.
void validate(const Scenario& s);

}  // namespace plaque
