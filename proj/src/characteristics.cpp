#include "plaque/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/expint.hpp>

#include "plaque/quadrature.hpp"

namespace plaque {

// ---------------------------------------------------------------------------
// Theta

namespace {

double bump_theta_integrand(double delta, double lambda, double u) {
  return std::exp(lambda * u) / (1.0 + delta * u);
}

// e^{-z} Ei(z) for z > 0
double scaled_ei(double z) {
  if (z < 700.0) return std::exp(-z) * boost::math::expint(z);
  // Asymptotic series sum n! / z^{n+1}; terms shrink fast for z this large.
  double term = 1.0 / z;
  double sum = term;
  for (int n = 1; n < 30; ++n) {
    term *= n / z;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

}  // namespace

double bump_decay_theta(double delta, double lambda, double a) {
  if (!(a >= 0.0)) throw std::invalid_argument("theta: a must be nonnegative");
  if (a == 0.0) return 0.0;
  // int_0^a e^{lambda u} / (1 + delta u) du
  //   = (e^{lambda a} E(z0 + lambda a) - E(z0)) / delta,  E(z) = e^{-z} Ei(z),  z0 = lambda / delta
  const double z0 = lambda / delta;
  const double grow = std::exp(lambda * a);
  if (!std::isfinite(grow)) return std::numeric_limits<double>::infinity();
  const double base = scaled_ei(z0);
  const double top = grow * scaled_ei(z0 + lambda * a);
  const double value = (top - base) / delta;
  // The difference cancels for short intervals.  There, integrate directly
  // with a Gauss rule on pieces short enough for it to be exact.
  if (value < 0.25 * std::max(std::abs(top), std::abs(base)) / delta) {
    const double pieces = std::ceil(a * std::max(delta, lambda) / 0.1);
    const int n = static_cast<int>(std::min(pieces, 1e6));
    const double h = a / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      sum += boost::math::quadrature::gauss<double, 20>::integrate(
          [&](double u) { return bump_theta_integrand(delta, lambda, u); }, i * h, (i + 1) * h);
    }
    return sum;
  }
  return value;
}

double theta(const VelocityKernel& k, double a) {
  if (!std::isfinite(a) || a < 0.0) throw std::invalid_argument("theta: a must be finite and nonnegative");
  if (a == 0.0) return 0.0;
  if (const auto* c = std::get_if<ConstantVelocity>(&k.form())) return a / c->v;
  if (const auto* f = std::get_if<AffineVelocity>(&k.form())) return std::log1p(f->v1 * a / f->v2) / f->v1;
  const auto& b = std::get<BumpDecayVelocity>(k.form());
  return bump_decay_theta(b.delta, b.lambda, a);
}

double theta_inverse(const VelocityKernel& k, double s) {
  if (!std::isfinite(s) || s < 0.0) throw std::invalid_argument("theta_inverse: s outside the range of theta");
  if (s == 0.0) return 0.0;
  if (const auto* c = std::get_if<ConstantVelocity>(&k.form())) return s * c->v;
  if (const auto* f = std::get_if<AffineVelocity>(&k.form())) return std::expm1(f->v1 * s) * f->v2 / f->v1;

  // Bump-decay: theta is unbounded, increasing and convex.  Bracket, then
  // Newton (theta' = 1/V) safeguarded by bisection.
  double lo = 0.0;
  double hi = 1.0;
  while (theta(k, hi) < s) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericError("theta_inverse: failed to bracket");
  }
  double a = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double resid = theta(k, a) - s;
    if (std::abs(resid) <= 1e-13 * s) return a;
    if (resid > 0.0) {
      hi = a;
    } else {
      lo = a;
    }
    double next = a - resid * k(a);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == a) return a;
    a = next;
  }
  return a;
}

// ---------------------------------------------------------------------------
// CHistory

CHistory::CHistory(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() != values_.size() || times_.empty()) {
    throw std::invalid_argument("C history needs matching, nonempty time and value columns");
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || !std::isfinite(values_[i]) || !(values_[i] > 0.0)) {
      throw std::invalid_argument("C history values must be positive and finite");
    }
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw std::invalid_argument("C history knots must be strictly increasing");
    }
  }
  cumulative_.assign(times_.size(), 0.0);
  for (std::size_t i = 1; i < times_.size(); ++i) {
    cumulative_[i] = cumulative_[i - 1] + 0.5 * (values_[i] + values_[i - 1]) * (times_[i] - times_[i - 1]);
  }
}

std::size_t CHistory::segment_of(double t) const {
  if (!(t >= times_.front() && t <= times_.back())) {
    std::ostringstream os;
    os << "time " << t << " outside C history span [" << times_.front() << ", " << times_.back() << "]";
    throw std::out_of_range(os.str());
  }
  if (times_.size() == 1) return 0;
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t k = static_cast<std::size_t>(it - times_.begin());
  k = k == 0 ? 0 : k - 1;
  return std::min(k, times_.size() - 2);
}

double CHistory::c(double t) const {
  const std::size_t k = segment_of(t);
  if (times_.size() == 1) return values_[0];
  const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
  return values_[k] + w * (values_[k + 1] - values_[k]);
}

double CHistory::h(double t) const {
  const std::size_t k = segment_of(t);
  if (times_.size() == 1) return 0.0;
  const double tau = t - times_[k];
  const double slope = (values_[k + 1] - values_[k]) / (times_[k + 1] - times_[k]);
  return cumulative_[k] + values_[k] * tau + 0.5 * slope * tau * tau;
}

double CHistory::h_inverse(double s) const {
  if (!(s >= 0.0 && s <= cumulative_.back())) {
    std::ostringstream os;
    os << "h value " << s << " outside range [0, " << cumulative_.back() << "]";
    throw std::out_of_range(os.str());
  }
  if (times_.size() == 1) return times_[0];
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t k = static_cast<std::size_t>(it - cumulative_.begin());
  k = k == 0 ? 0 : k - 1;
  k = std::min(k, times_.size() - 2);
  const double dt = times_[k + 1] - times_[k];
  const double slope = (values_[k + 1] - values_[k]) / dt;
  const double d = s - cumulative_[k];
  // Root of c_k tau + slope tau^2 / 2 = d in the cancellation-free form.
  const double disc = std::max(0.0, values_[k] * values_[k] + 2.0 * slope * d);
  const double tau = 2.0 * d / (values_[k] + std::sqrt(disc));
  return times_[k] + std::clamp(tau, 0.0, dt);
}

CHistory read_c_history_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty trajectory table");
  int t_col = -1;
  int c_col = -1;
  {
    std::istringstream hs(line);
    std::string name;
    for (int col = 0; std::getline(hs, name, ','); ++col) {
      if (name == "t") t_col = col;
      if (name == "c") c_col = col;
    }
  }
  if (t_col < 0 || c_col < 0) throw std::invalid_argument("trajectory table lacks 't' and 'c' columns");
  std::vector<double> ts;
  std::vector<double> cs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    double t = 0.0;
    double c = 0.0;
    for (int col = 0; std::getline(ls, cell, ','); ++col) {
      if (col == t_col) t = std::stod(cell);
      if (col == c_col) c = std::stod(cell);
    }
    ts.push_back(t);
    cs.push_back(c);
  }
  return CHistory(std::move(ts), std::move(cs));
}

// ---------------------------------------------------------------------------
// CharSolution

CharSolution::CharSolution(KernelSet kernels, CHistory history, Profile initial)
    : kernels_(std::move(kernels)), history_(std::move(history)), initial_(std::move(initial)) {
  if (!kernels_.boundary.is<LdlLinear>()) {
    throw std::invalid_argument("characteristics solution requires the LDL-linear influx law");
  }
  if (history_.t_begin() != 0.0) throw std::invalid_argument("C history must start at t = 0");
}

double CharSolution::eval(double t, double a) const {
  const double ht = history_.h(t);
  const double th = theta(kernels_.velocity, a);
  const double mu = kernels_.mu();
  const double va = kernels_.velocity(a);
  if (th >= ht) {
    const double a0 = theta_inverse(kernels_.velocity, th - ht);
    return kernels_.velocity(a0) / va * initial_(a0) * std::exp(-mu * t);
  }
  const double tau0 = history_.h_inverse(ht - th);
  const double influx = kernels_.boundary(history_.c(tau0), 0.0);
  return kernels_.velocity.at_zero() / va * influx * std::exp(-mu * (t - tau0));
}

std::vector<double> CharSolution::eval(double t, const std::vector<double>& as) const {
  std::vector<double> out;
  out.reserve(as.size());
  for (double a : as) out.push_back(eval(t, a));
  return out;
}

}  // namespace plaque
