#include "plaque/transport.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "plaque/csv.hpp"
#include "plaque/quadrature.hpp"
#include "plaque/simd/kernels.hpp"

namespace plaque {

AgeGrid::AgeGrid(double a_max_, std::size_t n_cells_) : a_max(a_max_), n_cells(n_cells_) {
  if (!std::isfinite(a_max) || !(a_max > 0.0)) throw std::invalid_argument("grid.a_max must be positive");
  if (n_cells == 0) throw std::invalid_argument("grid.n_cells must be positive");
}

std::vector<double> AgeGrid::centers() const {
  std::vector<double> out(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) out[i] = center(i);
  return out;
}

void TrajectoryRecord::write_csv(std::ostream& os) const {
  csv::write_header(os, {"t", "mass", "first_moment", "weighted_moment", "boundary", "c", "budget_residual"});
  for (const auto& s : samples) {
    csv::write_row(os, {s.t, s.mass, s.first_moment, s.weighted_moment, s.boundary, s.c, s.budget_residual});
  }
}

Moments moments(const PopulationState& state, const KernelSet& kernels, const AgeGrid& grid) {
  if (state.m.size() != grid.n_cells) throw std::invalid_argument("state does not match grid");
  const double da = grid.da();
  Moments out;
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    const double a = grid.center(i);
    out.mass += state.m[i];
    out.first_moment += a * state.m[i];
    out.weighted_moment += kernels.velocity(a) * state.m[i];
  }
  out.mass *= da;
  out.first_moment *= da;
  out.weighted_moment *= da;
  return out;
}

// ---------------------------------------------------------------------------

TransportSolver::TransportSolver(KernelSet kernels, AgeGrid grid, SolverOptions options)
    : kernels_(std::move(kernels)), grid_(grid), options_(options) {
  if (!std::isfinite(options_.cfl) || !(options_.cfl > 0.0)) throw std::invalid_argument("cfl must be positive");
  const std::size_t n = grid_.n_cells;
  v_center_.resize(n);
  a_center_.resize(n);
  v_edge_.resize(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    a_center_[i] = grid_.center(i);
    v_center_[i] = kernels_.velocity(a_center_[i]);
  }
  for (std::size_t i = 0; i <= n; ++i) v_edge_[i] = kernels_.velocity(grid_.edge(i));
  v_edge_max_ = *std::max_element(v_edge_.begin(), v_edge_.end());
}

double TransportSolver::closure_c(double weighted) const {
  const auto& r = std::get<LogisticLike>(kernels_.flux.form());
  return r.gamma / (r.beta + weighted);
}

PopulationState TransportSolver::make_state(std::vector<double> m, double c, double t) const {
  if (m.size() != grid_.n_cells) throw std::invalid_argument("initial profile does not match the grid");
  PopulationState s{std::move(m), c, t};
  if (kernels_.ldl_mode == LdlMode::QuasiSteady) {
    s.c = closure_c(grid_.da() * simd::dot(s.m, v_center_));
  }
  check_state(s, "initial state");
  return s;
}

void TransportSolver::check_state(const PopulationState& s, const char* where) const {
  if (!std::isfinite(s.c) || s.c < 0.0 || !std::isfinite(s.t)) {
    std::ostringstream os;
    os << "negative_or_nonfinite_state: " << where << " has C = " << s.c << " at t = " << s.t;
    throw NumericError(os.str());
  }
  for (std::size_t i = 0; i < s.m.size(); ++i) {
    if (!(s.m[i] >= 0.0) || !std::isfinite(s.m[i])) {
      std::ostringstream os;
      os << "negative_or_nonfinite_state: " << where << " has m[" << i << "] = " << s.m[i] << " at t = " << s.t;
      throw NumericError(os.str());
    }
  }
}

Moments TransportSolver::moments(const PopulationState& state) const {
  const double da = grid_.da();
  return {da * simd::sum(state.m), da * simd::dot(state.m, a_center_), da * simd::dot(state.m, v_center_)};
}

TransportSolver::Stage TransportSolver::evaluate(const std::vector<double>& m, double c) const {
  const double da = grid_.da();
  Stage st{};
  st.weighted = da * simd::dot(m, v_center_);
  st.c = kernels_.ldl_mode == LdlMode::QuasiSteady ? closure_c(st.weighted) : c;
  double moment = st.weighted;
  if (const auto* md = std::get_if<MacrophageDriven>(&kernels_.boundary.form())) {
    moment = md->b * da * simd::sum(m);
  }
  st.ghost = kernels_.boundary(st.c, moment);
  return st;
}

double TransportSolver::boundary_value(const PopulationState& state) const { return evaluate(state.m, state.c).ghost; }

void TransportSolver::euler_stage(const std::vector<double>& m, double c, double dt, std::vector<double>& m_out,
                                  double& c_out) const {
  const Stage st = evaluate(m, c);
  const simd::UpwindStage params{st.ghost, dt * st.c / grid_.da(), dt * kernels_.mu()};
  m_out.resize(m.size());
  simd::active().upwind_euler(m.data(), v_edge_.data(), m.size(), params, m_out.data());
  c_out = kernels_.ldl_mode == LdlMode::QuasiSteady ? st.c : c + dt * (kernels_.flux(c) - c * st.weighted);
}

PopulationState TransportSolver::euler(const PopulationState& state, double dt) const {
  PopulationState out;
  euler_stage(state.m, state.c, dt, out.m, out.c);
  out.t = state.t + dt;
  return out;
}

MassBalance TransportSolver::mass_balance(const PopulationState& state) const {
  const Stage st = evaluate(state.m, state.c);
  MassBalance b;
  b.influx = st.c * v_edge_.front() * st.ghost;
  b.death = kernels_.mu() * grid_.da() * simd::sum(state.m);
  b.outflow = state.m.empty() ? 0.0 : st.c * v_edge_.back() * state.m.back();
  return b;
}

double TransportSolver::stable_dt(const PopulationState& state) const {
  const double weighted = grid_.da() * simd::dot(state.m, v_center_);
  double c_bound = 0.0;
  double c_rate = 0.0;
  if (kernels_.ldl_mode == LdlMode::QuasiSteady) {
    c_bound = kernels_.flux.positive_root();
  } else if (kernels_.flux.is<LogisticLike>()) {
    // Both stages stay below max(C, gamma/beta) when dt (beta + W) <= 1.
    c_bound = std::max(state.c, kernels_.flux.positive_root());
    c_rate = kernels_.flux.beta() + 2.0 * weighted;
  } else {
    // Malthus: C at most doubles over a stage when dt beta <= 1.
    c_bound = 2.0 * state.c;
    c_rate = std::max(kernels_.flux.beta(), 2.0 * weighted);
  }
  const double a_rate = c_bound * v_edge_max_ / grid_.da() + kernels_.mu();
  return 1.0 / std::max(a_rate, c_rate);
}

PopulationState TransportSolver::step(const PopulationState& state, double dt) const {
  if (!std::isfinite(dt) || !(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const double limit = stable_dt(state);
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os.precision(17);
    os << "stability_violation: dt = " << dt << " exceeds the stable limit " << limit << " at t = " << state.t;
    throw StabilityError(os.str());
  }

  std::vector<double> m1;
  std::vector<double> m2;
  double c1 = 0.0;
  double c2 = 0.0;
  euler_stage(state.m, state.c, dt, m1, c1);
  euler_stage(m1, c1, dt, m2, c2);

  PopulationState next;
  next.m.resize(state.m.size());
  simd::active().average(state.m.data(), m2.data(), state.m.size(), next.m.data());
  next.t = state.t + dt;
  if (kernels_.ldl_mode == LdlMode::QuasiSteady) {
    next.c = closure_c(grid_.da() * simd::dot(next.m, v_center_));
  } else {
    next.c = 0.5 * (state.c + c2);
  }
  check_state(next, "step result");
  return next;
}

namespace {

// d/dt of samples y(t_k), second order on nonuniform spacing.
std::vector<double> differentiate(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = t.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  if (n == 2) {
    d[0] = d[1] = (y[1] - y[0]) / (t[1] - t[0]);
    return d;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double h0 = t[k] - t[k - 1];
    const double h1 = t[k + 1] - t[k];
    d[k] = (-h1 / (h0 * (h0 + h1))) * y[k - 1] + ((h1 - h0) / (h0 * h1)) * y[k] + (h0 / (h1 * (h0 + h1))) * y[k + 1];
  }
  {
    const double h0 = t[1] - t[0];
    const double h1 = t[2] - t[1];
    d[0] = (-(2.0 * h0 + h1) / (h0 * (h0 + h1))) * y[0] + ((h0 + h1) / (h0 * h1)) * y[1] -
           (h0 / (h1 * (h0 + h1))) * y[2];
  }
  {
    const double h0 = t[n - 2] - t[n - 3];
    const double h1 = t[n - 1] - t[n - 2];
    d[n - 1] = (h1 / (h0 * (h0 + h1))) * y[n - 3] - ((h0 + h1) / (h0 * h1)) * y[n - 2] +
               ((2.0 * h1 + h0) / (h1 * (h0 + h1))) * y[n - 1];
  }
  return d;
}

}  // namespace

TrajectoryRecord TransportSolver::run(const PopulationState& initial, double t_end, double sample_every) const {
  if (!(t_end > initial.t)) throw std::invalid_argument("t_end must exceed the initial time");
  if (!std::isfinite(sample_every) || !(sample_every > 0.0)) throw std::invalid_argument("sample_every must be positive");
  check_state(initial, "initial state");

  TrajectoryRecord rec;
  auto record = [&](const PopulationState& s) {
    const Moments mo = moments(s);
    rec.samples.push_back({s.t, mo.mass, mo.first_moment, mo.weighted_moment, boundary_value(s), s.c, 0.0});
  };

  PopulationState state = initial;
  record(state);
  const double t0 = initial.t;
  std::size_t k = 1;
  while (state.t < t_end) {
    const double target = std::min(t0 + static_cast<double>(k) * sample_every, t_end);
    const double remaining = target - state.t;
    const double dt = std::min(options_.cfl * stable_dt(state), remaining);
    state = step(state, dt);
    if (dt == remaining || std::abs(state.t - target) <= 1e-12 * std::max(1.0, std::abs(target))) {
      state.t = target;
      record(state);
      ++k;
    }
  }

  std::vector<double> ts;
  std::vector<double> budget;
  for (const auto& s : rec.samples) {
    ts.push_back(s.t);
    budget.push_back(kernels_.ldl_mode == LdlMode::Dynamic ? s.first_moment + s.c : s.first_moment);
  }
  const std::vector<double> rate = differentiate(ts, budget);
  for (std::size_t i = 0; i < rec.samples.size(); ++i) {
    auto& s = rec.samples[i];
    // d/dt int a M = C int V M - mu int a M; the dynamic LDL equation adds R(C) - C int V M.
    const double expected = kernels_.ldl_mode == LdlMode::Dynamic
                                ? kernels_.flux(s.c) - kernels_.mu() * s.first_moment
                                : s.c * s.weighted_moment - kernels_.mu() * s.first_moment;
    s.budget_residual = rate[i] - expected;
  }
  rec.final_state = std::move(state);
  return rec;
}

// ---------------------------------------------------------------------------

std::vector<double> zero_profile(const AgeGrid& grid) { return std::vector<double>(grid.n_cells, 0.0); }

std::vector<double> exponential_profile(const AgeGrid& grid, double amplitude) {
  std::vector<double> out(grid.n_cells);
  const double da = grid.da();
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    const double lo = grid.edge(i);
    out[i] = amplitude * std::exp(-lo) * (-std::expm1(-da)) / da;
  }
  return out;
}

std::vector<double> cell_average(const AgeGrid& grid, const std::function<double(double)>& f) {
  std::vector<double> out(grid.n_cells);
  const double da = grid.da();
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    out[i] = quad::integrate(f, grid.edge(i), grid.edge(i + 1), 1e-12) / da;
  }
  return out;
}

std::vector<double> resample_table(const AgeGrid& grid, const std::vector<double>& a, const std::vector<double>& m) {
  if (a.size() != m.size() || a.size() < 2) throw std::invalid_argument("profile table needs at least two rows");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(m[i]) || m[i] < 0.0) {
      throw std::invalid_argument("profile table values must be finite and nonnegative");
    }
    if (i > 0 && !(a[i] > a[i - 1])) throw std::invalid_argument("profile table abscissae must increase");
  }
  // Cumulative integral of the interpolant at x.
  std::vector<double> cum(a.size(), 0.0);
  for (std::size_t i = 1; i < a.size(); ++i) cum[i] = cum[i - 1] + 0.5 * (m[i] + m[i - 1]) * (a[i] - a[i - 1]);
  auto primitive = [&](double x) {
    if (x <= a.front()) return 0.0;
    if (x >= a.back()) return cum.back();
    const std::size_t k = static_cast<std::size_t>(std::upper_bound(a.begin(), a.end(), x) - a.begin()) - 1;
    const double w = x - a[k];
    const double slope = (m[k + 1] - m[k]) / (a[k + 1] - a[k]);
    return cum[k] + m[k] * w + 0.5 * slope * w * w;
  };
  std::vector<double> out(grid.n_cells);
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    out[i] = std::max(0.0, (primitive(grid.edge(i + 1)) - primitive(grid.edge(i))) / grid.da());
  }
  return out;
}

void read_profile_table(std::istream& in, std::vector<double>& a, std::vector<double>& m) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty profile table");
  a.clear();
  m.clear();
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string x;
    std::string y;
    if (!std::getline(ls, x, ',') || !std::getline(ls, y, ',')) {
      throw std::invalid_argument("profile table rows need two columns: " + line);
    }
    a.push_back(std::stod(x));
    m.push_back(std::stod(y));
  }
}

}  // namespace plaque
