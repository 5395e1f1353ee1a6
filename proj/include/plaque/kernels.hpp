#pragma once

// Model function families of the macrophage / modified-LDL renewal system:
// internalization speed V(a), mortality mu, monocyte influx law at a = 0 and
// the LDL source term R(C).

#include <limits>
#include <stdexcept>
#include <string>
#include <variant>

namespace plaque {

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Velocity

struct ConstantVelocity {
  double v;
};

struct AffineVelocity {
  double v1;
  double v2;
};

/// V(a) = (1 + delta a) exp(-lambda a)
struct BumpDecayVelocity {
  double delta;
  double lambda;
};

class VelocityKernel {
 public:
  using Form = std::variant<ConstantVelocity, AffineVelocity, BumpDecayVelocity>;

  explicit VelocityKernel(Form form);

  static VelocityKernel constant(double v) { return VelocityKernel(ConstantVelocity{v}); }
  static VelocityKernel affine(double v1, double v2) { return VelocityKernel(AffineVelocity{v1, v2}); }
  static VelocityKernel bump_decay(double delta, double lambda) {
    return VelocityKernel(BumpDecayVelocity{delta, lambda});
  }

  const Form& form() const { return form_; }

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(form_);
  }

  /// Rejects a < 0 and non-finite a.
  double operator()(double a) const;
  double derivative(double a) const;
  double at_zero() const { return (*this)(0.0); }

  /// sup_{a >= 0} |V'(a)|
  double lipschitz() const;
  /// sup_{a >= 0} V(a); +inf for the affine form.
  double sup() const;

 private:
  Form form_;
};

double eval_velocity(const VelocityKernel& k, double a);

// ---------------------------------------------------------------------------
// Mortality

struct MortalityKernel {
  double mu;
  explicit MortalityKernel(double mu);
  double operator()(double /*a*/) const { return mu; }
};

// ---------------------------------------------------------------------------
// Influx law M(t, 0) = f(C, moment)

/// M(t,0) = integral of b * M(t,a) da  (B is the constant b)
struct MacrophageDriven {
  double b;
};

/// M(t,0) = alpha C
struct LdlLinear {
  double alpha;
};

/// M(t,0) = sigma_m C (1 + integral of V M), with B = V.
struct SelfReinforced {
  double sigma_m;
};

class BoundaryLaw {
 public:
  using Form = std::variant<MacrophageDriven, LdlLinear, SelfReinforced>;

  explicit BoundaryLaw(Form form);

  static BoundaryLaw macrophage_driven(double b) { return BoundaryLaw(MacrophageDriven{b}); }
  static BoundaryLaw ldl_linear(double alpha) { return BoundaryLaw(LdlLinear{alpha}); }
  static BoundaryLaw self_reinforced(double sigma_m) { return BoundaryLaw(SelfReinforced{sigma_m}); }

  const Form& form() const { return form_; }

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(form_);
  }

  /// `weighted_moment` is int B M for MacrophageDriven, int V M for
  /// SelfReinforced, and ignored for LdlLinear.
  double operator()(double c, double weighted_moment) const;

  /// f(x, 0)
  double at_zero_moment(double c) const { return (*this)(c, 0.0); }

  /// Lipschitz constant of f in its moment argument for C in [0, c_cap]; for
  /// LdlLinear (no moment dependence) the constant alpha is reported.
  double lipschitz(double c_cap) const;

  /// sup_a B(a) for the kernel weighting the moment; LdlLinear uses the unit
  /// normalisation.
  double weight_sup(const VelocityKernel& velocity) const;

 private:
  Form form_;
};

double eval_boundary(const BoundaryLaw& k, double c, double weighted_moment);

// ---------------------------------------------------------------------------
// LDL source R(C)

struct Malthus {
  double beta;  // R(x) = beta x
};

struct LogisticLike {
  double gamma;  // R(x) = gamma - beta x
  double beta;
};

class FluxLaw {
 public:
  using Form = std::variant<Malthus, LogisticLike>;

  explicit FluxLaw(Form form);

  static FluxLaw malthus(double beta) { return FluxLaw(Malthus{beta}); }
  static FluxLaw logistic(double gamma, double beta) { return FluxLaw(LogisticLike{gamma, beta}); }

  const Form& form() const { return form_; }

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(form_);
  }

  double operator()(double c) const;

  /// Smallest positive root of R; +inf when R has none (Malthus).
  double positive_root() const;

  /// Magnitude of the linear coefficient, beta in both forms.
  double beta() const;

 private:
  Form form_;
};

double eval_flux(const FluxLaw& k, double c);

// ---------------------------------------------------------------------------

/// How C(t) evolves.  QuasiSteady replaces the LDL ODE by its algebraic
/// equilibrium C = gamma / (beta + int V M), which requires a LogisticLike flux.
enum class LdlMode { Dynamic, QuasiSteady };

struct KernelSet {
  VelocityKernel velocity;
  MortalityKernel mortality;
  BoundaryLaw boundary;
  FluxLaw flux;
  LdlMode ldl_mode = LdlMode::Dynamic;

  KernelSet(VelocityKernel v, MortalityKernel m, BoundaryLaw b, FluxLaw r,
            LdlMode mode = LdlMode::Dynamic);

  double mu() const { return mortality.mu; }
};

std::string to_string(LdlMode mode);

}  // namespace plaque
