#pragma once

// High-inflammation reduction: V(a) = (1 + delta a) e^{-lambda a}, constant
// mu, beta = 1 and the quasi-steady closure C = gamma / (1 + int V M), so the
// influx is the constant gamma sigma_m.  The steady profile is
//
//   M*(a) = gamma sigma_m / V(a) exp(-(1 + D) mu G(a) / gamma),
//   G(a)  = int_0^a e^{lambda u} / (1 + delta u) du,
//
// with D = int V M* the fixed point of D = gamma sigma_m I(D),
// I(D) = int_0^inf exp(-(1 + D) mu G(x) / gamma) dx.

#include <iosfwd>
#include <string>

#include "plaque/kernels.hpp"

namespace plaque {

struct SimplifiedParams {
  double gamma = 1.0;
  double sigma_m = 1.0;
  double mu = 1.0;
  double delta = 1.0;
  double lambda = 1.0;
};

void validate(const SimplifiedParams& p);

/// Kernels of the time-dependent simplified problem (quasi-steady LDL mode).
KernelSet simplified_kernels(const SimplifiedParams& p);

/// G(x) through the exponential integral; +inf once e^{lambda x} overflows.
double drive_integral(const SimplifiedParams& p, double x);

/// I(D) as defined above.
double survival_moment(const SimplifiedParams& p, double delta_moment);

/// Root of D - gamma sigma_m I(D) on [0, gamma sigma_m I(0)].
double solve_delta(const SimplifiedParams& p);

double simplified_steady_profile(const SimplifiedParams& p, double delta_moment, double a);

/// gamma^2 sigma_m / (mu + lambda gamma + gamma sqrt(mu sigma_m))
double delta_lower_bound(const SimplifiedParams& p);
/// (2 gamma sigma_m / lambda) int_1^inf t^{(2/lambda)(delta - lambda/2 - k t)} dt,
/// k = (1 + D) mu / gamma; +inf when the integrand overflows.
double delta_upper_bound(const SimplifiedParams& p, double delta_moment);

enum class Verdict { Healthy, Vulnerable };
std::string to_string(Verdict v);

/// Which side of 2 delta = lambda the analytic conditions were evaluated on.
enum class Branch { Wide, Narrow };  // Wide: 2 delta >= lambda
std::string to_string(Branch b);

struct VulnerabilityReport {
  double delta_moment = 0.0;
  Verdict verdict = Verdict::Healthy;
  /// Minimiser of phi(a) = V'(a) + (1 + D) mu / gamma over a >= 0 and phi there.
  double argmin_a = 0.0;
  double phi_min = 0.0;
  Branch branch = Branch::Wide;

  /// Healthy chain using the lower bound on D.  It covers only part of the
  /// healthy region.
  bool healthy_condition_fired = false;
  bool healthy_condition_partial = true;

  /// Vulnerable condition with the D-dependent term kept on both branches.
  bool vulnerable_condition_fired = false;
  /// Shortened narrow-branch test delta + mu/gamma < lambda, which drops the
  /// D-dependent term.  Reported, never used for the verdict.
  bool short_narrow_condition = false;

  double lower_bound = 0.0;
  double upper_bound = 0.0;
};

VulnerabilityReport classify(const SimplifiedParams& p);

/// `gamma,sigma_m,mu,delta,lambda,delta_moment,verdict,healthy_cert,vulnerable_cert`
void write_sweep_header(std::ostream& os);
void write_sweep_row(std::ostream& os, const SimplifiedParams& p, const VulnerabilityReport& r);

}  // namespace plaque
