#include "plaque/equilibrium.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "plaque/characteristics.hpp"
#include "plaque/csv.hpp"
#include "plaque/quadrature.hpp"
#include "plaque/roots.hpp"

namespace plaque {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const LogisticLike& require_logistic(const KernelSet& k, const char* who) {
  const auto* r = std::get_if<LogisticLike>(&k.flux.form());
  if (!r) throw std::invalid_argument(std::string(who) + " requires the logistic flux law R(x) = gamma - beta x");
  return *r;
}

// e^{-mu Theta(a) / x}
double survival(const KernelSet& k, double a, double x) { return std::exp(-k.mu() * theta(k.velocity, a) / x); }

double decay_scale(const KernelSet& k, double x) { return x * k.velocity.at_zero() / k.mu(); }

// int_A^inf g(a) da for the bump-decay velocity, where g decays super-exponentially.
template <class F>
double bump_tail(const KernelSet& k, double x, double from, F&& g) {
  return quad::integrate_to_infinity(g, from, decay_scale(k, x), 1e-13, 1e-15).value;
}

}  // namespace

// ---------------------------------------------------------------------------

double survival_domain_end(const KernelSet& kernels) {
  if (const auto* f = std::get_if<AffineVelocity>(&kernels.velocity.form())) return kernels.mu() / f->v1;
  return kInf;
}

double survival_integral(const KernelSet& kernels, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("survival_integral needs x > 0");
  const double mu = kernels.mu();
  if (const auto* c = std::get_if<ConstantVelocity>(&kernels.velocity.form())) return c->v * x / mu;
  if (const auto* f = std::get_if<AffineVelocity>(&kernels.velocity.form())) {
    if (x >= mu / f->v1) return kInf;
    return f->v2 * x / (mu - f->v1 * x);
  }
  return bump_tail(kernels, x, 0.0, [&](double a) { return survival(kernels, a, x); });
}

// ---------------------------------------------------------------------------

SteadyState::SteadyState(KernelSet kernels, double c_star, double m0_star)
    : kernels_(std::move(kernels)), c_star_(c_star), m0_star_(m0_star) {
  if (!(c_star_ > 0.0) || !std::isfinite(c_star_)) throw std::invalid_argument("C* must be positive");
  if (!(m0_star_ >= 0.0) || !std::isfinite(m0_star_)) throw std::invalid_argument("M*(0) must be nonnegative");
  const double mu = kernels_.mu();
  const auto& form = kernels_.velocity.form();
  if (const auto* c = std::get_if<ConstantVelocity>(&form)) {
    const double rate = mu / (c->v * c_star_);
    mass_ = m0_star_ / rate;
    first_moment_ = m0_star_ / (rate * rate);
    weighted_ = c->v * mass_;
  } else if (const auto* f = std::get_if<AffineVelocity>(&form)) {
    // M* = M*(0) (1 + s a)^{-p-1},  s = V1/V2,  p = mu / (V1 C*)
    const double s = f->v1 / f->v2;
    const double p = mu / (f->v1 * c_star_);
    if (!(p > 1.0)) throw NumericError("steady profile not integrable: C* >= mu / V1");
    mass_ = m0_star_ / (s * p);
    first_moment_ = m0_star_ / (s * s * p * (p - 1.0));
    weighted_ = m0_star_ * f->v2 / (s * (p - 1.0));
  } else {
    mass_ = bump_tail(kernels_, c_star_, 0.0, [&](double a) { return profile(a); });
    first_moment_ = bump_tail(kernels_, c_star_, 0.0, [&](double a) { return a * profile(a); });
    weighted_ = bump_tail(kernels_, c_star_, 0.0, [&](double a) { return kernels_.velocity(a) * profile(a); });
  }
}

double SteadyState::profile(double a) const {
  const double v0 = kernels_.velocity.at_zero();
  const double mu = kernels_.mu();
  const auto& form = kernels_.velocity.form();
  if (const auto* c = std::get_if<ConstantVelocity>(&form)) return m0_star_ * std::exp(-mu * a / (c->v * c_star_));
  if (const auto* f = std::get_if<AffineVelocity>(&form)) {
    return m0_star_ * std::pow(1.0 + f->v1 * a / f->v2, -mu / (f->v1 * c_star_) - 1.0);
  }
  const double s = survival(kernels_, a, c_star_);
  // far out V underflows before the survival factor does
  if (s == 0.0) return 0.0;
  return m0_star_ * v0 / kernels_.velocity(a) * s;
}

double SteadyState::ldl_residual() const { return std::abs(kernels_.flux(c_star_) - c_star_ * weighted_); }

double profile(const SteadyState& steady, double a) { return steady.profile(a); }

// ---------------------------------------------------------------------------

double steady_ldl_linear_residual(const KernelSet& kernels, double x) {
  const auto& r = require_logistic(kernels, "steady_ldl_linear_residual");
  const double influx = kernels.boundary(x, 0.0);
  const double s = survival_integral(kernels, x);
  if (!std::isfinite(s)) return kInf;
  return x * influx * kernels.velocity.at_zero() * s + r.beta * x - r.gamma;
}

SteadyState solve_steady_ldl_linear(const KernelSet& kernels) {
  const auto& r = require_logistic(kernels, "solve_steady_ldl_linear");
  const auto* lin = std::get_if<LdlLinear>(&kernels.boundary.form());
  if (!lin) throw std::invalid_argument("solve_steady_ldl_linear requires the LDL-linear influx law");
  if (!(lin->alpha > 0.0)) throw std::invalid_argument("solve_steady_ldl_linear requires alpha > 0");
  const double x_end = survival_domain_end(kernels);
  if (!(x_end > 0.0)) throw NumericError("survival integral diverges for every C: kernel combination rejected");

  // g(0+) = -gamma and g(gamma/beta) >= 0, g -> +inf at X: the root lies in
  // (0, min(gamma/beta, X)).
  const double hi = std::min(r.gamma / r.beta, x_end);
  const auto root = bisect_increasing([&](double x) { return steady_ldl_linear_residual(kernels, x); }, 0.0, hi,
                                      1e-12, 0.0);
  const double c_star = root.x;
  return SteadyState(kernels, c_star, kernels.boundary(c_star, 0.0));
}

SteadyState solve_steady_macrophage_driven(const KernelSet& kernels) {
  const auto& r = require_logistic(kernels, "solve_steady_macrophage_driven");
  const auto* md = std::get_if<MacrophageDriven>(&kernels.boundary.form());
  if (!md) throw std::invalid_argument("solve_steady_macrophage_driven requires the macrophage-driven influx law");

  const double v0 = kernels.velocity.at_zero();
  auto reproduction = [&](double x) -> double {
    const double mu = kernels.mu();
    if (const auto* c = std::get_if<ConstantVelocity>(&kernels.velocity.form())) return md->b * c->v * x / mu;
    if (const auto* f = std::get_if<AffineVelocity>(&kernels.velocity.form())) return md->b * f->v2 * x / mu;
    return md->b * bump_tail(kernels, x, 0.0, [&](double a) { return v0 / kernels.velocity(a) * survival(kernels, a, x); });
  };

  double hi = 1.0;
  int expansions = 0;
  while (reproduction(hi) <= 1.0) {
    hi *= 2.0;
    if (++expansions > 200) throw NumericError("no_positive_steady_state: reproduction number never reaches 1 for this B");
  }
  const auto root = bisect_increasing([&](double x) { return reproduction(x) - 1.0; }, 0.0, hi, 1e-13, 0.0);
  const double c_star = root.x;
  const double gamma_over_beta = r.gamma / r.beta;
  if (c_star > gamma_over_beta * (1.0 + 1e-12)) {
    std::ostringstream os;
    os.precision(17);
    os << "negative_influx: C* = " << c_star << " exceeds gamma/beta = " << gamma_over_beta << ", M*(0) would be negative";
    throw NumericError(os.str());
  }
  const double m0 = std::max(0.0, r.gamma - r.beta * c_star) / (c_star * v0 * survival_integral(kernels, c_star));
  return SteadyState(kernels, c_star, m0);
}

void write_profile_csv(std::ostream& os, const SteadyState& steady, double a_max, std::size_t n) {
  csv::write_header(os, {"a", "m_star"});
  for (std::size_t i = 0; i < n; ++i) {
    const double a = n > 1 ? a_max * static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    csv::write_row(os, {a, steady.profile(a)});
  }
}

// ---------------------------------------------------------------------------

double ExistenceBounds::radius(double horizon) const {
  if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be nonnegative");
  const double source = c_cap * v0 * influx_sup;
  if (theta == 0.0) return initial_mass + source * horizon;
  return std::exp(theta * horizon) * (initial_mass + source * (-std::expm1(-theta * horizon)) / theta);
}

ExistenceBounds existence_bounds(const KernelSet& kernels, double c0, double initial_mass) {
  if (!(c0 > 0.0) || !std::isfinite(c0)) throw std::invalid_argument("C0 must be positive");
  if (!(initial_mass >= 0.0) || !std::isfinite(initial_mass)) throw std::invalid_argument("|M0|_1 must be nonnegative");
  const double root = kernels.flux.positive_root();
  if (!std::isfinite(root)) throw std::invalid_argument("a-priori bounds need a flux law with a positive root");
  ExistenceBounds b{};
  b.c_cap = std::max(c0, root);
  b.v0 = kernels.velocity.at_zero();
  b.k_f = kernels.boundary.lipschitz(b.c_cap);
  b.b_sup = kernels.boundary.weight_sup(kernels.velocity);
  if (!std::isfinite(b.b_sup)) throw std::invalid_argument("a-priori bounds need a bounded moment weight B");
  b.influx_sup = kernels.boundary.at_zero_moment(b.c_cap);
  b.initial_mass = initial_mass;
  b.theta = b.c_cap * b.v0 * b.k_f * b.b_sup;
  return b;
}

double truncation_for_tail(const SteadyState& steady, double tail_mass) {
  const auto& k = steady.kernels();
  const double mu = k.mu();
  const double m0 = steady.m0_star();
  if (m0 == 0.0) return 1.0;
  if (const auto* c = std::get_if<ConstantVelocity>(&k.velocity.form())) {
    const double rate = mu / (c->v * steady.c_star());
    return std::max(1.0, std::log(m0 / (rate * tail_mass)) / rate);
  }
  if (const auto* f = std::get_if<AffineVelocity>(&k.velocity.form())) {
    const double s = f->v1 / f->v2;
    const double p = mu / (f->v1 * steady.c_star());
    // m0 (1 + s A)^{-p} / (s p) = tail
    return std::max(1.0, (std::pow(m0 / (s * p * tail_mass), 1.0 / p) - 1.0) / s);
  }
  double a = 1.0;
  while (bump_tail(k, steady.c_star(), a, [&](double x) { return steady.profile(x); }) > tail_mass) a *= 1.25;
  return a;
}

}  // namespace plaque
