#include "plaque/reduced.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "plaque/csv.hpp"
#include "plaque/kernels.hpp"
#include "plaque/roots.hpp"

namespace plaque {
namespace {

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(name) + " must be positive and finite");
}

template <class F>
ReducedState rk4(F&& rhs, ReducedState s, double h) {
  const Rates k1 = rhs(s);
  const Rates k2 = rhs({s.m + 0.5 * h * k1.dm, s.c + 0.5 * h * k1.dc});
  const Rates k3 = rhs({s.m + 0.5 * h * k2.dm, s.c + 0.5 * h * k2.dc});
  const Rates k4 = rhs({s.m + h * k3.dm, s.c + h * k3.dc});
  return {s.m + h / 6.0 * (k1.dm + 2.0 * k2.dm + 2.0 * k3.dm + k4.dm),
          s.c + h / 6.0 * (k1.dc + 2.0 * k2.dc + 2.0 * k3.dc + k4.dc)};
}

// Injured flow in (x, y) = (M - M*, C - C*), using the equilibrium relations
// alpha V C*^2 = mu M* and gamma - beta C* = V C* M*.
Rates injured_deviation_rhs(const InjuredParams& p, ReducedState star, ReducedState d) {
  const double x = d.m;
  const double y = d.c;
  return {p.alpha * p.v * y * (y + 2.0 * star.c) - p.mu * x, -p.beta * y - p.v * (y * (x + star.m) + star.c * x)};
}

std::string state_message(const char* what, double t, ReducedState s) {
  std::ostringstream os;
  os.precision(17);
  os << "inadmissible_state: " << what << " at t=" << t << " (M=" << s.m << ", C=" << s.c << ")";
  return os.str();
}

std::size_t step_count(double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be nonnegative");
  return static_cast<std::size_t>(std::ceil(t_end / dt * (1.0 - 1e-12)));
}

}  // namespace

void validate(const LotkaParams& p) {
  require_positive(p.b, "B");
  require_positive(p.v, "V");
  require_positive(p.mu, "mu");
  require_positive(p.alpha, "alpha");
}

void validate(const InjuredParams& p) {
  require_positive(p.alpha, "alpha");
  require_positive(p.v, "V");
  require_positive(p.mu, "mu");
  require_positive(p.gamma, "gamma");
  require_positive(p.beta, "beta");
}

Rates lotka_rhs(const LotkaParams& p, ReducedState s) {
  return {p.b * p.v * s.c * s.m - p.mu * s.m, p.alpha * s.c - p.v * s.c * s.m};
}

double hamiltonian(const LotkaParams& p, ReducedState s) {
  if (!(s.m > 0.0) || !(s.c > 0.0)) throw std::invalid_argument("hamiltonian needs M > 0 and C > 0");
  return p.alpha * std::log(s.m) - p.v * s.m + p.mu * std::log(s.c) - p.b * p.v * s.c;
}

ReducedState lotka_center(const LotkaParams& p) { return {p.alpha / p.v, p.mu / (p.b * p.v)}; }

Rates injured_rhs(const InjuredParams& p, ReducedState s) {
  return {p.alpha * p.v * s.c * s.c - p.mu * s.m, p.gamma - p.beta * s.c - p.v * s.c * s.m};
}

ReducedState injured_equilibrium(const InjuredParams& p) {
  validate(p);
  const double k = p.alpha * p.v * p.v / p.mu;
  auto cubic = [&](double x) { return k * x * x * x + p.beta * x - p.gamma; };
  const double c = bisect_increasing(cubic, 0.0, p.gamma / p.beta, 0.0, 0.0).x;
  return {p.alpha * p.v * c * c / p.mu, c};
}

double lyapunov(const InjuredParams& p, ReducedState s, ReducedState star) {
  const double dm = s.m - star.m;
  const double dc = s.c - star.c;
  return dm * dm + 2.0 * p.alpha * dc * dc;
}

double lyapunov_derivative(const InjuredParams& p, ReducedState s, ReducedState star) {
  const double dm = s.m - star.m;
  const double dc2 = (s.c - star.c) * (s.c - star.c);
  return -2.0 * (p.mu * dm * dm + 2.0 * p.alpha * p.beta * dc2 + p.alpha * p.v * dc2 * (s.m + star.m));
}

void ReducedTrajectory::write_csv(std::ostream& os) const {
  csv::write_header(os, {"t", "m", "c", "diagnostic"});
  for (const auto& s : samples) csv::write_row(os, {s.t, s.m, s.c, s.diagnostic});
}

ReducedTrajectory integrate(const ReducedParams& params, ReducedState start, double t_end, double dt) {
  const std::size_t n = step_count(t_end, dt);
  ReducedTrajectory out;
  out.samples.reserve(n + 1);

  if (const auto* lp = std::get_if<LotkaParams>(&params)) {
    const LotkaParams p = *lp;
    validate(p);
    if (!(start.m > 0.0) || !(start.c > 0.0)) throw std::invalid_argument("Lotka start must lie in the open quadrant");
    auto rhs = [&](ReducedState s) { return lotka_rhs(p, s); };
    ReducedState s = start;
    out.samples.push_back({0.0, s.m, s.c, hamiltonian(p, s)});
    for (std::size_t i = 1; i <= n; ++i) {
      const double t0 = static_cast<double>(i - 1) * dt;
      const double t1 = i == n ? t_end : static_cast<double>(i) * dt;
      s = rk4(rhs, s, t1 - t0);
      if (!(s.m > 0.0) || !(s.c > 0.0) || !std::isfinite(s.m) || !std::isfinite(s.c)) {
        throw NumericError(state_message("Lotka state left the open quadrant", t1, s));
      }
      out.samples.push_back({t1, s.m, s.c, hamiltonian(p, s)});
    }
    return out;
  }

  const InjuredParams p = std::get<InjuredParams>(params);
  validate(p);
  if (!(start.m >= 0.0) || !(start.c >= 0.0)) throw std::invalid_argument("injured start must be nonnegative");
  const ReducedState star = injured_equilibrium(p);
  out.star = star;
  out.deviations.reserve(n + 1);
  auto rhs = [&](ReducedState d) { return injured_deviation_rhs(p, star, d); };
  auto record = [&](double t, ReducedState d) {
    const ReducedState s{star.m + d.m, star.c + d.c};
    if (!(s.m >= 0.0) || !(s.c >= 0.0) || !std::isfinite(s.m) || !std::isfinite(s.c)) {
      throw NumericError(state_message("injured state left the closed quadrant", t, s));
    }
    out.samples.push_back({t, s.m, s.c, d.m * d.m + 2.0 * p.alpha * d.c * d.c});
    out.deviations.push_back(d);
  };
  ReducedState d{start.m - star.m, start.c - star.c};
  record(0.0, d);
  for (std::size_t i = 1; i <= n; ++i) {
    const double t0 = static_cast<double>(i - 1) * dt;
    const double t1 = i == n ? t_end : static_cast<double>(i) * dt;
    d = rk4(rhs, d, t1 - t0);
    record(t1, d);
  }
  return out;
}

RateCheck lyapunov_rate_check(const InjuredParams& p, const ReducedTrajectory& traj, double tol) {
  RateCheck r;
  const double rate = 2.0 * std::min(p.mu, p.beta);
  const bool have_dev = traj.deviations.size() == traj.samples.size();
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    const double l = s.diagnostic;
    double dl;
    if (have_dev) {
      const ReducedState d = traj.deviations[i];
      // Same closed form as lyapunov_derivative, on the exact deviation.
      dl = -2.0 * (p.mu * d.m * d.m + 2.0 * p.alpha * p.beta * d.c * d.c +
                   p.alpha * p.v * d.c * d.c * (s.m + traj.star.m));
    } else {
      dl = lyapunov_derivative(p, {s.m, s.c}, traj.star);
    }
    const double excess = dl + rate * l;
    r.worst_excess = i == 0 ? excess : std::max(r.worst_excess, excess);
    if (excess > tol) {
      r.rate_bound = false;
      ++r.violations;
    }
    if (i > 0) {
      const double prev = traj.samples[i - 1].diagnostic;
      if (prev > 0.0 && !(l < prev)) {
        r.strictly_decreasing = false;
        ++r.violations;
      }
    }
  }
  return r;
}

double lotka_period(const LotkaParams& p, ReducedState start, double dt, double max_time) {
  validate(p);
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const ReducedState center = lotka_center(p);
  auto rhs = [&](ReducedState s) { return lotka_rhs(p, s); };
  // Signed distance to the section; crossings of interest go from + to -.
  auto side = [&](ReducedState s) { return s.c - center.c; };

  ReducedState s = start;
  double t = 0.0;
  while (t < max_time) {
    const ReducedState next = rk4(rhs, s, dt);
    const double before = side(s);
    const double after = side(next);
    // The first step is skipped so a start on the section is not its own return.
    if (t > 0.0 && before > 0.0 && after <= 0.0 && next.m > center.m) {
      // Locate the crossing within this step with partial RK4 steps.
      const auto root = bisect_increasing([&](double tau) { return -side(rk4(rhs, s, tau)); }, 0.0, dt, 0.0, 0.0);
      return t + root.x;
    }
    s = next;
    t += dt;
  }
  throw NumericError("lotka_period: no return to the section before max_time");
}

}  // namespace plaque
