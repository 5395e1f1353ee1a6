#include "plaque/commands.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "plaque/csv.hpp"
#include "plaque/reduced.hpp"
#include "plaque/vulnerability.hpp"

namespace plaque {
namespace fs = std::filesystem;

namespace {

std::ofstream open_table(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

void prepare(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out.string() + ": " + ec.message());
}

void write_final_profile(std::ostream& os, const AgeGrid& grid, const PopulationState& state) {
  csv::write_header(os, {"a", "m"});
  for (std::size_t i = 0; i < grid.n_cells; ++i) csv::write_row(os, {grid.center(i), state.m[i]});
}

void write_steady_summary(std::ostream& os, const SteadyState& st) {
  csv::write_header(os, {"c_star", "m0_star", "mass", "first_moment", "weighted_moment", "ldl_residual"});
  csv::write_row(os, {st.c_star(), st.m0_star(), st.mass(), st.first_moment(), st.weighted_moment(),
                      st.ldl_residual()});
}

void write_simplified_profile(std::ostream& os, const Scenario& s, const SimplifiedParams& p, double delta_moment) {
  csv::write_header(os, {"a", "m_star"});
  const auto n = static_cast<std::size_t>(s.steady_points);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = s.a_max * static_cast<double>(i) / static_cast<double>(n - 1);
    csv::write_row(os, {a, simplified_steady_profile(p, delta_moment, a)});
  }
}

ReducedTrajectory reduced_for(const Scenario& s) {
  ReducedParams params;
  if (s.reduced_system == "lotka") {
    params = s.lotka();
  } else {
    params = s.injured();
  }
  return integrate(params, {s.reduced_m0, s.reduced_c0}, s.reduced_t_end, s.reduced_dt);
}

void require_vulnerability_kernels(const Scenario& s) {
  if (s.velocity_kind != "bump_decay") throw ConfigError("vulnerability needs velocity.kind = bump_decay");
}

}  // namespace

SteadyState steady_state_for(const Scenario& s) {
  const KernelSet k = s.kernels();
  if (s.boundary_kind == "ldl_linear") return solve_steady_ldl_linear(k);
  if (s.boundary_kind == "macrophage_driven") return solve_steady_macrophage_driven(k);
  throw ConfigError("steady: boundary.kind = self_reinforced is handled by the vulnerability command");
}

std::vector<double> initial_profile_for(const Scenario& s, const AgeGrid& grid) {
  if (s.initial_profile == "zero") return zero_profile(grid);
  if (s.initial_profile == "exponential") return exponential_profile(grid, s.initial_amplitude);
  if (s.initial_profile == "steady") {
    if (s.boundary_kind == "self_reinforced") {
      require_vulnerability_kernels(s);
      const SimplifiedParams p = s.simplified();
      const double d = solve_delta(p);
      return cell_average(grid, [&](double a) { return simplified_steady_profile(p, d, a); });
    }
    const SteadyState st = steady_state_for(s);
    return cell_average(grid, [&](double a) { return st.profile(a); });
  }
  std::ifstream in(s.table_path());
  if (!in) throw ConfigError("initial.table: cannot open " + s.table_path().string());
  std::vector<double> a;
  std::vector<double> m;
  try {
    read_profile_table(in, a, m);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("initial.table: ") + e.what());
  }
  return resample_table(grid, a, m);
}

TrajectoryRecord simulate(const Scenario& s) {
  validate(s);
  const AgeGrid grid(s.a_max, static_cast<std::size_t>(s.n_cells));
  const TransportSolver solver(s.kernels(), grid, SolverOptions{s.cfl});
  const PopulationState init = solver.make_state(initial_profile_for(s, grid), s.c0);
  return solver.run(init, s.t_end, s.sample_every);
}

std::vector<fs::path> cmd_simulate(const Scenario& s, const fs::path& out) {
  const TrajectoryRecord rec = simulate(s);
  prepare(out);
  const AgeGrid grid(s.a_max, static_cast<std::size_t>(s.n_cells));
  const fs::path traj = out / "trajectory.csv";
  const fs::path prof = out / "profile.csv";
  {
    auto os = open_table(traj);
    rec.write_csv(os);
  }
  {
    auto os = open_table(prof);
    write_final_profile(os, grid, rec.final_state);
  }
  return {traj, prof};
}

std::vector<fs::path> cmd_steady(const Scenario& s, const fs::path& out) {
  validate(s);
  const SteadyState st = steady_state_for(s);
  prepare(out);
  const fs::path summary = out / "steady.csv";
  const fs::path prof = out / "profile.csv";
  {
    auto os = open_table(summary);
    write_steady_summary(os, st);
  }
  {
    auto os = open_table(prof);
    write_profile_csv(os, st, s.a_max, static_cast<std::size_t>(s.steady_points));
  }
  return {summary, prof};
}

std::vector<fs::path> cmd_reduced(const Scenario& s, const fs::path& out) {
  validate(s);
  const ReducedTrajectory traj = reduced_for(s);
  prepare(out);
  const fs::path path = out / "reduced.csv";
  auto os = open_table(path);
  traj.write_csv(os);
  return {path};
}

std::vector<fs::path> cmd_vulnerability(const Scenario& s, const fs::path& out) {
  validate(s);
  require_vulnerability_kernels(s);
  const SimplifiedParams p = s.simplified();
  const VulnerabilityReport r = classify(p);
  prepare(out);
  const fs::path table = out / "vulnerability.csv";
  const fs::path detail = out / "report.csv";
  const fs::path prof = out / "profile.csv";
  {
    auto os = open_table(table);
    write_sweep_header(os);
    write_sweep_row(os, p, r);
  }
  {
    auto os = open_table(detail);
    csv::write_header(os, {"delta_moment", "verdict", "argmin_a", "phi_min", "branch", "healthy_cert",
                           "healthy_cert_partial", "vulnerable_cert", "short_narrow_condition", "lower_bound",
                           "upper_bound"});
    os << csv::format(r.delta_moment) << ',' << to_string(r.verdict) << ',' << csv::format(r.argmin_a) << ','
       << csv::format(r.phi_min) << ',' << to_string(r.branch) << ',' << r.healthy_condition_fired << ','
       << r.healthy_condition_partial << ',' << r.vulnerable_condition_fired << ',' << r.short_narrow_condition
       << ',' << csv::format(r.lower_bound) << ',' << csv::format(r.upper_bound) << '\n';
  }
  {
    auto os = open_table(prof);
    write_simplified_profile(os, s, p, r.delta_moment);
  }
  return {table, detail, prof};
}

std::vector<fs::path> cmd_sweep(const Scenario& s, const fs::path& out, unsigned jobs) {
  validate(s);
  if (!s.has_sweep()) throw ConfigError("sweep: sweep.command is not set");
  if (s.sweep_command == "vulnerability") require_vulnerability_kernels(s);
  const std::vector<double> values = s.sweep_values();
  const std::size_t n = values.size();
  std::vector<std::string> rows(n);
  std::vector<std::string> profiles(n);
  std::vector<std::exception_ptr> errors(n);

  auto run_point = [&](std::size_t i) {
    Scenario point = s.with_value(s.sweep_param, values[i]);
    point.sweep_command.clear();
    std::ostringstream row;
    std::ostringstream prof;
    const std::string x = csv::format(values[i]);
    if (s.sweep_command == "vulnerability") {
      const SimplifiedParams p = point.simplified();
      write_sweep_row(row, p, classify(p));
    } else if (s.sweep_command == "steady") {
      const SteadyState st = steady_state_for(point);
      row << x << ',' << csv::format(st.c_star()) << ',' << csv::format(st.m0_star()) << ','
          << csv::format(st.first_moment()) << '\n';
      write_profile_csv(prof, st, point.a_max, static_cast<std::size_t>(point.steady_points));
    } else if (s.sweep_command == "simulate") {
      const TrajectoryRecord rec = simulate(point);
      const auto& last = rec.samples.back();
      row << x << ',' << csv::format(last.t) << ',' << csv::format(last.mass) << ','
          << csv::format(last.first_moment) << ',' << csv::format(last.weighted_moment) << ','
          << csv::format(last.boundary) << ',' << csv::format(last.c) << '\n';
    } else {
      const ReducedTrajectory traj = reduced_for(point);
      const auto& last = traj.samples.back();
      row << x << ',' << csv::format(last.t) << ',' << csv::format(last.m) << ',' << csv::format(last.c) << ','
          << csv::format(last.diagnostic) << '\n';
    }
    rows[i] = row.str();
    profiles[i] = prof.str();
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        run_point(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);  // first failing point in sweep order
  }

  prepare(out);
  std::vector<fs::path> written;
  const fs::path table = out / "sweep.csv";
  {
    auto os = open_table(table);
    if (s.sweep_command == "vulnerability") {
      write_sweep_header(os);
    } else if (s.sweep_command == "steady") {
      csv::write_header(os, {"param", "c_star", "m0_star", "first_moment"});
    } else if (s.sweep_command == "simulate") {
      csv::write_header(os, {"param", "t", "mass", "first_moment", "weighted_moment", "boundary", "c"});
    } else {
      csv::write_header(os, {"param", "t", "m", "c", "diagnostic"});
    }
    for (const auto& r : rows) os << r;
  }
  written.push_back(table);
  for (std::size_t i = 0; i < n; ++i) {
    if (profiles[i].empty()) continue;
    char name[32];
    std::snprintf(name, sizeof name, "profile_%03zu.csv", i);
    const fs::path p = out / name;
    auto os = open_table(p);
    os << profiles[i];
    written.push_back(p);
  }
  return written;
}

}  // namespace plaque
