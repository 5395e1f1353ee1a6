#pragma once

// Moment reductions of the renewal system for constant V and mu.
//
// Lotka:   M' = B V C M - mu M,          C' = alpha C - V C M
// Injured: M' = alpha V C^2 - mu M,      C' = gamma - beta C - V C M
//
// M is the total macrophage mass int M(t,a) da.

#include <iosfwd>
#include <variant>
#include <vector>

namespace plaque {

struct LotkaParams {
  double b = 1.0;
  double v = 1.0;
  double mu = 1.0;
  double alpha = 1.0;
};

struct InjuredParams {
  double alpha = 1.0;
  double v = 1.0;
  double mu = 1.0;
  double gamma = 1.0;
  double beta = 1.0;
};

struct ReducedState {
  double m = 0.0;
  double c = 0.0;
};

struct Rates {
  double dm = 0.0;
  double dc = 0.0;
};

void validate(const LotkaParams& p);
void validate(const InjuredParams& p);

Rates lotka_rhs(const LotkaParams& p, ReducedState s);
/// alpha log M - V M + mu log C - B V C; throws for M <= 0 or C <= 0.
double hamiltonian(const LotkaParams& p, ReducedState s);
/// (alpha / V, mu / (B V))
ReducedState lotka_center(const LotkaParams& p);

Rates injured_rhs(const InjuredParams& p, ReducedState s);
/// C* is the positive root of alpha V^2 x^3 / mu + beta x - gamma, M* = alpha V C*^2 / mu.
ReducedState injured_equilibrium(const InjuredParams& p);

/// (M - M*)^2 + 2 alpha (C - C*)^2
double lyapunov(const InjuredParams& p, ReducedState s, ReducedState star);
/// d/dt of lyapunov along the injured flow, in closed form:
///   -2 [ mu dM^2 + 2 alpha beta dC^2 + alpha V dC^2 (M + M*) ]
double lyapunov_derivative(const InjuredParams& p, ReducedState s, ReducedState star);

using ReducedParams = std::variant<LotkaParams, InjuredParams>;

struct ReducedSample {
  double t;
  double m;
  double c;
  double diagnostic;  // H for Lotka, L_c for the injured system
};

struct ReducedTrajectory {
  std::vector<ReducedSample> samples;
  /// Injured system only: the state relative to (M*, C*), kept separately so
  /// that tiny distances are not lost to cancellation.
  std::vector<ReducedState> deviations;
  ReducedState star{};

  void write_csv(std::ostream& os) const;
};

/// Fixed-step RK4 from (m0, c0) to t_end; the last step is shortened to land
/// on t_end.  The injured system is advanced in coordinates centred on its
/// equilibrium.  Throws NumericError if the state leaves the admissible region.
ReducedTrajectory integrate(const ReducedParams& params, ReducedState start, double t_end, double dt);

struct RateCheck {
  bool strictly_decreasing = true;
  bool rate_bound = true;
  std::size_t violations = 0;
  double worst_excess = 0.0;  // max of dL/dt + 2 min(mu, beta) L over the samples

  bool ok() const { return strictly_decreasing && rate_bound; }
};

/// Along an injured trajectory: L_c strictly decreasing between consecutive
/// samples (until it reaches 0) and dL/dt <= -2 min(mu, beta) L + tol.
RateCheck lyapunov_rate_check(const InjuredParams& p, const ReducedTrajectory& traj, double tol = 1e-9);

/// First return time to the section C = C_center, with C decreasing and
/// M > M_center, starting from `start` (assumed on or near the section).
double lotka_period(const LotkaParams& p, ReducedState start, double dt, double max_time = 1e4);

}  // namespace plaque
