#include "plaque/kernels.hpp"

#include <cmath>
#include <sstream>

namespace plaque {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double x, const char* what) {
  if (!std::isfinite(x) || !(x > 0.0)) {
    std::ostringstream os;
    os << what << " must be positive and finite (got " << x << ")";
    throw std::invalid_argument(os.str());
  }
}

void require_nonnegative(double x, const char* what) {
  if (!std::isfinite(x) || x < 0.0) {
    std::ostringstream os;
    os << what << " must be nonnegative and finite (got " << x << ")";
    throw std::invalid_argument(os.str());
  }
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    std::ostringstream os;
    os << what << " must be finite (got " << x << ")";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------

VelocityKernel::VelocityKernel(Form form) : form_(form) {
  std::visit(overloaded{
                 [](const ConstantVelocity& k) { require_positive(k.v, "velocity.v"); },
                 [](const AffineVelocity& k) {
                   require_positive(k.v1, "velocity.v1");
                   require_positive(k.v2, "velocity.v2");
                 },
                 [](const BumpDecayVelocity& k) {
                   require_positive(k.delta, "velocity.delta");
                   require_positive(k.lambda, "velocity.lambda");
                 },
             },
             form_);
}

double VelocityKernel::operator()(double a) const {
  require_nonnegative(a, "lipid load a");
  return std::visit(overloaded{
                        [](const ConstantVelocity& k) { return k.v; },
                        [a](const AffineVelocity& k) { return k.v1 * a + k.v2; },
                        [a](const BumpDecayVelocity& k) {
                          return (1.0 + k.delta * a) * std::exp(-k.lambda * a);
                        },
                    },
                    form_);
}

double VelocityKernel::derivative(double a) const {
  require_nonnegative(a, "lipid load a");
  return std::visit(overloaded{
                        [](const ConstantVelocity&) { return 0.0; },
                        [](const AffineVelocity& k) { return k.v1; },
                        [a](const BumpDecayVelocity& k) {
                          return (k.delta - k.lambda - k.lambda * k.delta * a) * std::exp(-k.lambda * a);
                        },
                    },
                    form_);
}

double VelocityKernel::lipschitz() const {
  return std::visit(overloaded{
                        [](const ConstantVelocity&) { return 0.0; },
                        [](const AffineVelocity& k) { return k.v1; },
                        [](const BumpDecayVelocity& k) {
                          // |V'| peaks either at a = 0 or at the minimiser of V'
                          // a* = 2/lambda - 1/delta, where V'(a*) = -delta e^{-lambda a*}.
                          double best = std::abs(k.delta - k.lambda);
                          const double a_star = 2.0 / k.lambda - 1.0 / k.delta;
                          if (a_star > 0.0) best = std::max(best, k.delta * std::exp(-k.lambda * a_star));
                          return best;
                        },
                    },
                    form_);
}

double VelocityKernel::sup() const {
  return std::visit(overloaded{
                        [](const ConstantVelocity& k) { return k.v; },
                        [](const AffineVelocity&) { return std::numeric_limits<double>::infinity(); },
                        [](const BumpDecayVelocity& k) {
                          // V' = 0 at a = 1/lambda - 1/delta.
                          const double a_peak = 1.0 / k.lambda - 1.0 / k.delta;
                          if (a_peak <= 0.0) return 1.0;
                          return (1.0 + k.delta * a_peak) * std::exp(-k.lambda * a_peak);
                        },
                    },
                    form_);
}

double eval_velocity(const VelocityKernel& k, double a) { return k(a); }

// ---------------------------------------------------------------------------

MortalityKernel::MortalityKernel(double mu_) : mu(mu_) { require_positive(mu, "mortality.mu"); }

// ---------------------------------------------------------------------------

BoundaryLaw::BoundaryLaw(Form form) : form_(form) {
  std::visit(overloaded{
                 [](const MacrophageDriven& k) { require_positive(k.b, "boundary.b"); },
                 [](const LdlLinear& k) { require_nonnegative(k.alpha, "boundary.alpha"); },
                 [](const SelfReinforced& k) { require_nonnegative(k.sigma_m, "boundary.sigma_m"); },
             },
             form_);
}

double BoundaryLaw::operator()(double c, double weighted_moment) const {
  require_finite(c, "C");
  require_finite(weighted_moment, "weighted moment");
  return std::visit(overloaded{
                        [&](const MacrophageDriven&) { return weighted_moment; },
                        [&](const LdlLinear& k) { return k.alpha * c; },
                        [&](const SelfReinforced& k) { return k.sigma_m * c * (1.0 + weighted_moment); },
                    },
                    form_);
}

double BoundaryLaw::lipschitz(double c_cap) const {
  return std::visit(overloaded{
                        [](const MacrophageDriven&) { return 1.0; },
                        [](const LdlLinear& k) { return k.alpha; },
                        [c_cap](const SelfReinforced& k) { return k.sigma_m * c_cap; },
                    },
                    form_);
}

double BoundaryLaw::weight_sup(const VelocityKernel& velocity) const {
  return std::visit(overloaded{
                        [](const MacrophageDriven& k) { return k.b; },
                        [](const LdlLinear&) { return 1.0; },
                        [&](const SelfReinforced&) { return velocity.sup(); },
                    },
                    form_);
}

double eval_boundary(const BoundaryLaw& k, double c, double weighted_moment) {
  return k(c, weighted_moment);
}

// ---------------------------------------------------------------------------

FluxLaw::FluxLaw(Form form) : form_(form) {
  std::visit(overloaded{
                 [](const Malthus& k) { require_positive(k.beta, "flux.beta"); },
                 [](const LogisticLike& k) {
                   require_positive(k.gamma, "flux.gamma");
                   require_positive(k.beta, "flux.beta");
                 },
             },
             form_);
}

double FluxLaw::operator()(double c) const {
  require_finite(c, "C");
  return std::visit(overloaded{
                        [c](const Malthus& k) { return k.beta * c; },
                        [c](const LogisticLike& k) { return k.gamma - k.beta * c; },
                    },
                    form_);
}

double FluxLaw::positive_root() const {
  return std::visit(overloaded{
                        [](const Malthus&) { return std::numeric_limits<double>::infinity(); },
                        [](const LogisticLike& k) { return k.gamma / k.beta; },
                    },
                    form_);
}

double FluxLaw::beta() const {
  return std::visit([](const auto& k) { return k.beta; }, form_);
}

double eval_flux(const FluxLaw& k, double c) { return k(c); }

// ---------------------------------------------------------------------------

KernelSet::KernelSet(VelocityKernel v, MortalityKernel m, BoundaryLaw b, FluxLaw r, LdlMode mode)
    : velocity(v), mortality(m), boundary(b), flux(r), ldl_mode(mode) {
  if (ldl_mode == LdlMode::QuasiSteady && !flux.is<LogisticLike>()) {
    throw std::invalid_argument("quasi-steady LDL closure requires the logistic flux law");
  }
}

std::string to_string(LdlMode mode) { return mode == LdlMode::Dynamic ? "dynamic" : "quasi_steady"; }

}  // namespace plaque
