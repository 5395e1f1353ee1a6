#pragma once

// Semi-analytic solution of the transport equation along characteristics for
// a known LDL history C(t).  Used as an independent check of the
// finite-volume solver.
//
// Lipid-load clock:  Theta(a) = int_0^a du / V(u)
// Drive clock:       h(t)     = int_0^t C(s) ds
// A characteristic through (t, a) started on the initial line when
// Theta(a) >= h(t), and on the influx boundary a = 0 otherwise.

#include <functional>
#include <iosfwd>
#include <vector>

#include "plaque/kernels.hpp"

namespace plaque {

double theta(const VelocityKernel& k, double a);
/// Theta for V = (1 + delta a) e^{-lambda a}, through the exponential integral;
/// +inf once e^{lambda a} overflows.
double bump_decay_theta(double delta, double lambda, double a);
/// Inverse of theta; throws for s < 0.
double theta_inverse(const VelocityKernel& k, double s);

/// Piecewise-linear C(t) through strictly increasing knots.
class CHistory {
 public:
  CHistory(std::vector<double> times, std::vector<double> values);

  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }
  double h_end() const { return cumulative_.back(); }

  /// C(t); throws std::out_of_range outside [t_begin, t_end].
  double c(double t) const;
  /// int_{t_begin}^t C, exact for the interpolant.
  double h(double t) const;
  /// t such that h(t) = s, solved per segment in closed form.
  double h_inverse(double s) const;

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t segment_of(double t) const;

  std::vector<double> times_;
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

/// Reads the `t` and `c` columns of a trajectory table.
CHistory read_c_history_csv(std::istream& in);

class CharSolution {
 public:
  using Profile = std::function<double(double)>;

  /// The boundary law must be LdlLinear: M(t,0) = alpha C(t).
  CharSolution(KernelSet kernels, CHistory history, Profile initial);

  /// M(t, a) for t within the history span (the history must start at t = 0).
  double eval(double t, double a) const;
  /// Same as eval, for each a in `as`.
  std::vector<double> eval(double t, const std::vector<double>& as) const;

  const CHistory& history() const { return history_; }

 private:
  KernelSet kernels_;
  CHistory history_;
  Profile initial_;
};

}  // namespace plaque
