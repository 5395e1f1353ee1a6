#pragma once

// Subcommand bodies shared by the command-line tool and the tests.  Each one
// validates the scenario before computing and writes its tables into `out`.

#include <filesystem>
#include <string>
#include <vector>

#include "plaque/equilibrium.hpp"
#include "plaque/scenario.hpp"
#include "plaque/transport.hpp"

namespace plaque {

/// Steady state selected by boundary.kind (LDL-linear or macrophage-driven).
SteadyState steady_state_for(const Scenario& s);

/// Initial cell averages selected by initial.profile.
std::vector<double> initial_profile_for(const Scenario& s, const AgeGrid& grid);

/// Runs the transport solver; returns the record written to trajectory.csv.
TrajectoryRecord simulate(const Scenario& s);

std::vector<std::filesystem::path> cmd_simulate(const Scenario& s, const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_steady(const Scenario& s, const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_reduced(const Scenario& s, const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_vulnerability(const Scenario& s, const std::filesystem::path& out);
/// Runs sweep.command at every point of the sweep, `jobs` points at a time;
/// rows come out in sweep order regardless of scheduling.
std::vector<std::filesystem::path> cmd_sweep(const Scenario& s, const std::filesystem::path& out, unsigned jobs);

}  // namespace plaque
