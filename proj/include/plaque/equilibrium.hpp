#pragma once

// Stationary states of the coupled system and the a-priori bounds used as
// runtime diagnostics for simulated trajectories.

#include <iosfwd>
#include <vector>

#include "plaque/kernels.hpp"

namespace plaque {

class SteadyState {
 public:
  SteadyState(KernelSet kernels, double c_star, double m0_star);

  double c_star() const { return c_star_; }
  double m0_star() const { return m0_star_; }
  double mass() const { return mass_; }                  // int M*
  double first_moment() const { return first_moment_; }  // int a M*
  double weighted_moment() const { return weighted_; }   // int V M*

  /// M*(a) = M*(0) V(0)/V(a) exp(-mu Theta(a) / C*)
  double profile(double a) const;

  /// |R(C*) - C* int V M*|
  double ldl_residual() const;

  const KernelSet& kernels() const { return kernels_; }

 private:
  KernelSet kernels_;
  double c_star_;
  double m0_star_;
  double mass_ = 0.0;
  double first_moment_ = 0.0;
  double weighted_ = 0.0;
};

/// int_0^inf exp(-mu Theta(a) / x) da; +inf outside the integrability domain.
double survival_integral(const KernelSet& kernels, double x);

/// Upper end X of the domain (0, X) on which survival_integral is finite.
double survival_domain_end(const KernelSet& kernels);

/// Influx M(t,0) = alpha C with logistic R.  C* is the root of
///   g(x) = x f(x) V(0) int exp(-mu Theta / x) + beta x - gamma
/// found by bisection on (0, min(gamma/beta, X)).
SteadyState solve_steady_ldl_linear(const KernelSet& kernels);

/// g from solve_steady_ldl_linear, exposed for the monotonicity check.
double steady_ldl_linear_residual(const KernelSet& kernels, double x);

/// Influx M(t,0) = b int M with logistic R.  C* solves
///   int B V(0)/V(a) exp(-mu Theta(a)/C*) da = 1.
SteadyState solve_steady_macrophage_driven(const KernelSet& kernels);

double profile(const SteadyState& steady, double a);

/// Writes `a,m_star` on n evenly spaced points of [0, a_max].
void write_profile_csv(std::ostream& os, const SteadyState& steady, double a_max, std::size_t n);

/// Radius of the L1 ball that contains M(t) on [0, T]:
///   e^{theta T} (|M0|_1 + c_cap V(0) sup f(x,0) (1 - e^{-theta T}) / theta)
struct ExistenceBounds {
  double c_cap;          // max(C0, gamma/beta)
  double theta;          // c_cap V(0) k_f |B|_inf
  double k_f;
  double b_sup;
  double influx_sup;     // sup_{x in [0, c_cap]} f(x, 0)
  double initial_mass;   // |M0|_1
  double v0;

  double radius(double horizon) const;
};

ExistenceBounds existence_bounds(const KernelSet& kernels, double c0, double initial_mass);

/// Smallest a_max for which the steady tail mass beyond it is below tail_mass.
double truncation_for_tail(const SteadyState& steady, double tail_mass = 1e-10);

}  // namespace plaque
