#include "plaque/vulnerability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "plaque/characteristics.hpp"
#include "plaque/csv.hpp"
#include "plaque/quadrature.hpp"
#include "plaque/roots.hpp"

namespace plaque {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rate(const SimplifiedParams& p, double delta_moment) { return (1.0 + delta_moment) * p.mu / p.gamma; }

}  // namespace

void validate(const SimplifiedParams& p) {
  for (auto [v, name] : {std::pair{p.gamma, "gamma"}, {p.sigma_m, "sigma_m"}, {p.mu, "mu"}, {p.delta, "delta"},
                         {p.lambda, "lambda"}}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

KernelSet simplified_kernels(const SimplifiedParams& p) {
  validate(p);
  return KernelSet(VelocityKernel::bump_decay(p.delta, p.lambda), MortalityKernel(p.mu),
                   BoundaryLaw::self_reinforced(p.sigma_m), FluxLaw::logistic(p.gamma, 1.0), LdlMode::QuasiSteady);
}

double drive_integral(const SimplifiedParams& p, double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("drive_integral needs x >= 0");
  return bump_decay_theta(p.delta, p.lambda, x);
}

double survival_moment(const SimplifiedParams& p, double delta_moment) {
  const double k = rate(p, delta_moment);
  // Below x ~ 1/lambda the integrand decays like e^{-k x}; past it, super-exponentially.
  const double scale = std::min(1.0 / k, 1.0 / p.lambda);
  return quad::integrate_to_infinity([&](double x) { return std::exp(-k * drive_integral(p, x)); }, 0.0, scale, 1e-12,
                                     1e-15)
      .value;
}

double solve_delta(const SimplifiedParams& p) {
  validate(p);
  const double source = p.gamma * p.sigma_m;
  const double hi = source * survival_moment(p, 0.0);
  // h(D) = D - source I(D) is strictly increasing, h(0) < 0 <= h(hi).
  auto h = [&](double d) { return d - source * survival_moment(p, d); };
  const double x_tol = 1e-12 * std::max(1.0, hi);
  const auto r = bisect_increasing(h, 0.0, hi * (1.0 + 1e-12), 0.0, x_tol);
  return r.x;
}

double simplified_steady_profile(const SimplifiedParams& p, double delta_moment, double a) {
  if (!(a >= 0.0)) throw std::invalid_argument("profile needs a >= 0");
  const double g = drive_integral(p, a);
  if (!std::isfinite(g)) return 0.0;
  const double log_v = std::log1p(p.delta * a) - p.lambda * a;
  return p.gamma * p.sigma_m * std::exp(-log_v - rate(p, delta_moment) * g);
}

double delta_lower_bound(const SimplifiedParams& p) {
  return p.gamma * p.gamma * p.sigma_m / (p.mu + p.lambda * p.gamma + p.gamma * std::sqrt(p.mu * p.sigma_m));
}

double delta_upper_bound(const SimplifiedParams& p, double delta_moment) {
  const double k = rate(p, delta_moment);
  const double c = p.delta - 0.5 * p.lambda;
  auto exponent = [&](double t) { return (2.0 / p.lambda) * (c - k * t) * std::log(t); };
  // exponent'(t) is decreasing in t; its zero is the peak of the integrand.
  double peak = 1.0;
  if (c - k > 0.0) {
    auto slope = [&](double t) { return -((c - k * t) / t - k * std::log(t)); };
    double hi = 2.0;
    while (slope(hi) < 0.0) hi *= 2.0;
    peak = bisect_increasing(slope, 1.0, hi, 0.0, 1e-12 * hi).x;
  }
  const double top = exponent(peak);
  if (top > 600.0) return kInf;
  auto f = [&](double t) { return std::exp(exponent(t) - top); };
  double sum = peak > 1.0 ? quad::integrate(f, 1.0, peak, 1e-12) : 0.0;
  const double width = std::max(1.0, 1.0 / (k * std::max(1.0, std::log(peak))));
  sum += quad::integrate_to_infinity(f, peak, width, 1e-12, 1e-15).value;
  return 2.0 * p.gamma * p.sigma_m / p.lambda * sum * std::exp(top);
}

std::string to_string(Verdict v) { return v == Verdict::Healthy ? "healthy" : "vulnerable"; }
std::string to_string(Branch b) { return b == Branch::Wide ? "wide" : "narrow"; }

VulnerabilityReport classify(const SimplifiedParams& p) {
  VulnerabilityReport r;
  r.delta_moment = solve_delta(p);
  const double k = rate(p, r.delta_moment);
  const bool wide = 2.0 * p.delta >= p.lambda;
  r.branch = wide ? Branch::Wide : Branch::Narrow;

  // V'(a) = (delta - lambda - lambda delta a) e^{-lambda a} is minimal at
  // 2/lambda - 1/delta when that is nonnegative, else increasing from a = 0.
  const double dip = p.delta * std::exp(-2.0 + p.lambda / p.delta);
  if (wide) {
    r.argmin_a = 2.0 / p.lambda - 1.0 / p.delta;
    r.phi_min = k - dip;
  } else {
    r.argmin_a = 0.0;
    r.phi_min = p.delta - p.lambda + k;
  }
  r.verdict = r.phi_min >= 0.0 ? Verdict::Healthy : Verdict::Vulnerable;

  r.lower_bound = delta_lower_bound(p);
  r.upper_bound = delta_upper_bound(p, r.delta_moment);

  const double k_low = p.mu / p.gamma + p.mu * r.lower_bound / p.gamma;
  r.healthy_condition_fired = wide ? (-p.delta + k_low >= 0.0) : (p.delta - p.lambda + k_low >= 0.0);

  const double k_high = p.mu / p.gamma + p.sigma_m * p.gamma / std::min(1.0, p.lambda / p.delta);
  r.vulnerable_condition_fired = wide ? (k_high <= dip) : (p.delta - p.lambda + k_high < 0.0);
  r.short_narrow_condition = !wide && (p.delta + p.mu / p.gamma < p.lambda);
  return r;
}

void write_sweep_header(std::ostream& os) {
  csv::write_header(os, {"gamma", "sigma_m", "mu", "delta", "lambda", "delta_moment", "verdict", "healthy_cert",
                         "vulnerable_cert"});
}

void write_sweep_row(std::ostream& os, const SimplifiedParams& p, const VulnerabilityReport& r) {
  os << csv::format(p.gamma) << ',' << csv::format(p.sigma_m) << ',' << csv::format(p.mu) << ','
     << csv::format(p.delta) << ',' << csv::format(p.lambda) << ',' << csv::format(r.delta_moment) << ','
     << to_string(r.verdict) << ',' << (r.healthy_condition_fired ? 1 : 0) << ','
     << (r.vulnerable_condition_fired ? 1 : 0) << '\n';
}

}  // namespace plaque
