#pragma once

// Finite-volume integration of the coupled macrophage / LDL system
//
//   dM/dt + C d(V M)/da + mu M = 0,      M(t, 0) = f(C, int B M)
//   dC/dt = R(C) - C int V M
//
// on a truncated lipid-load axis [0, a_max].  First-order upwind in a (the
// wind C V is never negative), two-stage SSP Runge-Kutta in time for the
// (M, C) pair, pure outflow at a_max.

#include <functional>
#include <iosfwd>
#include <vector>

#include "plaque/kernels.hpp"

namespace plaque {

class StabilityError : public NumericError {
 public:
  using NumericError::NumericError;
};

struct AgeGrid {
  double a_max;
  std::size_t n_cells;

  AgeGrid(double a_max, std::size_t n_cells);

  double da() const { return a_max / static_cast<double>(n_cells); }
  double center(std::size_t i) const { return (static_cast<double>(i) + 0.5) * da(); }
  double edge(std::size_t i) const { return static_cast<double>(i) * da(); }
  std::vector<double> centers() const;
};

struct PopulationState {
  std::vector<double> m;  // cell averages of M
  double c = 0.0;
  double t = 0.0;
};

struct Moments {
  double mass = 0.0;             // int M
  double first_moment = 0.0;     // int a M
  double weighted_moment = 0.0;  // int V M
};

struct TrajectorySample {
  double t;
  double mass;
  double first_moment;
  double weighted_moment;
  double boundary;  // M(t, 0)
  double c;
  double budget_residual;
};

struct TrajectoryRecord {
  std::vector<TrajectorySample> samples;
  PopulationState final_state;

  void write_csv(std::ostream& os) const;
};

/// Midpoint-rule moments on cell centers.
Moments moments(const PopulationState& state, const KernelSet& kernels, const AgeGrid& grid);

/// Rates entering the discrete mass law of one forward-Euler stage:
///   d/dt sum(m) da = influx - death - outflow
struct MassBalance {
  double influx = 0.0;   // C V(0) M(t, 0)
  double death = 0.0;    // mu sum(m) da
  double outflow = 0.0;  // C V(a_max) m[n-1]
};

struct SolverOptions {
  double cfl = 0.9;
};

class TransportSolver {
 public:
  TransportSolver(KernelSet kernels, AgeGrid grid, SolverOptions options = {});

  const KernelSet& kernels() const { return kernels_; }
  const AgeGrid& grid() const { return grid_; }
  const SolverOptions& options() const { return options_; }

  /// Validates the density and, under the quasi-steady closure, replaces c by
  /// its algebraic value.
  PopulationState make_state(std::vector<double> m, double c, double t = 0.0) const;

  Moments moments(const PopulationState& state) const;
  /// M(t, 0) given by the influx law at this state.
  double boundary_value(const PopulationState& state) const;
  /// Largest dt for which both Runge-Kutta stages keep m and c nonnegative.
  double stable_dt(const PopulationState& state) const;

  /// Throws StabilityError if dt exceeds stable_dt(state), NumericError if the
  /// result is negative or non-finite.
  PopulationState step(const PopulationState& state, double dt) const;

  /// One forward-Euler stage, the building block of step (no stability check).
  PopulationState euler(const PopulationState& state, double dt) const;
  MassBalance mass_balance(const PopulationState& state) const;

  /// Steps with cfl * stable_dt, landing exactly on every sampling time.
  TrajectoryRecord run(const PopulationState& initial, double t_end, double sample_every) const;

 private:
  struct Stage {
    double weighted;
    double c;
    double ghost;
  };

  Stage evaluate(const std::vector<double>& m, double c) const;
  void euler_stage(const std::vector<double>& m, double c, double dt, std::vector<double>& m_out,
                   double& c_out) const;
  double closure_c(double weighted) const;
  void check_state(const PopulationState& s, const char* where) const;

  KernelSet kernels_;
  AgeGrid grid_;
  SolverOptions options_;
  std::vector<double> v_center_;
  std::vector<double> v_edge_;
  std::vector<double> a_center_;
  double v_edge_max_ = 0.0;
};

// Initial profiles, as cell averages on the grid.

std::vector<double> zero_profile(const AgeGrid& grid);
/// amplitude * exp(-a), averaged exactly over each cell.
std::vector<double> exponential_profile(const AgeGrid& grid, double amplitude = 1.0);
/// Cell averages of an arbitrary profile by per-cell Gauss-Kronrod quadrature.
std::vector<double> cell_average(const AgeGrid& grid, const std::function<double(double)>& f);
/// Exact cell averages of the piecewise-linear interpolant through (a, m);
/// zero outside the tabulated range.
std::vector<double> resample_table(const AgeGrid& grid, const std::vector<double>& a, const std::vector<double>& m);
/// Reads a two-column `a,m` table (header line required).
void read_profile_table(std::istream& in, std::vector<double>& a, std::vector<double>& m);

}  // namespace plaque
