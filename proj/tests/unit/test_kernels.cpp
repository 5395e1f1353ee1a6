#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "frozen.hpp"
#include "plaque/kernels.hpp"

using namespace plaque;

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<VelocityKernel> sample_velocities() {
  return {VelocityKernel::constant(1.0),     VelocityKernel::constant(0.3),    VelocityKernel::affine(1.0, 1.0),
          VelocityKernel::affine(0.2, 3.0),  VelocityKernel::bump_decay(1, 1), VelocityKernel::bump_decay(10, 1),
          VelocityKernel::bump_decay(0.1, 2)};
}

}  // namespace

TEST_CASE("velocity kernels evaluate their formulas") {
  CHECK(eval_velocity(VelocityKernel::constant(1.0), 3.7) == 1.0);
  CHECK(eval_velocity(VelocityKernel::affine(1.0, 1.0), 2.0) == 3.0);
  CHECK(eval_velocity(VelocityKernel::bump_decay(1.0, 1.0), 1.0) == doctest::Approx(frozen::kBumpAtOne).epsilon(1e-15));
  CHECK(VelocityKernel::bump_decay(2.0, 0.5).at_zero() == 1.0);
}

TEST_CASE("velocity rejects bad loads and bad parameters") {
  const auto v = VelocityKernel::constant(1.0);
  CHECK_THROWS_AS(v(-1e-300), std::invalid_argument);
  CHECK_THROWS_AS(v(kNaN), std::invalid_argument);
  CHECK_THROWS_AS(v(std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK_THROWS_AS(VelocityKernel::constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(VelocityKernel::affine(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(VelocityKernel::bump_decay(1.0, kNaN), std::invalid_argument);
}

TEST_CASE("velocity derivative matches a centred difference") {
  for (const auto& v : sample_velocities()) {
    for (double a : {0.5, 1.0, 2.5, 7.0}) {
      const double h = 1e-5;
      const double fd = (v(a + h) - v(a - h)) / (2 * h);
      CHECK(v.derivative(a) == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
    }
  }
}

TEST_CASE("velocity is positive and Lipschitz on random loads") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> load(0.0, 40.0);
  for (const auto& v : sample_velocities()) {
    const double lip = v.lipschitz();
    REQUIRE(std::isfinite(lip));
    for (int i = 0; i < 1000; ++i) {
      const double a = load(rng);
      const double b = load(rng);
      CHECK(v(a) > 0.0);
      CHECK(std::abs(v(a) - v(b)) <= lip * std::abs(a - b) * (1 + 1e-12) + 1e-300);
    }
  }
}

TEST_CASE("bump-decay Lipschitz constant is the sup of |V'| on a fine grid") {
  for (auto [d, l] : {std::pair{1.0, 1.0}, {10.0, 1.0}, {0.1, 2.0}, {3.0, 0.2}}) {
    const auto v = VelocityKernel::bump_decay(d, l);
    double best = 0.0;
    for (int i = 0; i <= 200000; ++i) best = std::max(best, std::abs(v.derivative(i * 1e-3 * 5 / l)));
    CHECK(v.lipschitz() == doctest::Approx(best).epsilon(1e-6));
  }
}

TEST_CASE("velocity sup") {
  CHECK(VelocityKernel::constant(2.0).sup() == 2.0);
  CHECK(std::isinf(VelocityKernel::affine(1.0, 1.0).sup()));
  // (1 + a) e^{-a} peaks at a = 0; (1 + 10 a) e^{-a} at a = 0.9.
  CHECK(VelocityKernel::bump_decay(1.0, 1.0).sup() == doctest::Approx(1.0));
  CHECK(VelocityKernel::bump_decay(10.0, 1.0).sup() == doctest::Approx(10.0 * std::exp(-0.9)));
}

TEST_CASE("boundary laws") {
  CHECK(eval_boundary(BoundaryLaw::ldl_linear(1.0), 0.5, 123.0) == 0.5);
  CHECK(eval_boundary(BoundaryLaw::self_reinforced(2.0), 0.0, 17.0) == 0.0);
  CHECK(eval_boundary(BoundaryLaw::self_reinforced(1.0), 2.0, 3.0) == 8.0);
  CHECK(eval_boundary(BoundaryLaw::macrophage_driven(2.0), 5.0, 0.25) == 0.25);
  CHECK_THROWS_AS(eval_boundary(BoundaryLaw::ldl_linear(1.0), kNaN, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(eval_boundary(BoundaryLaw::ldl_linear(1.0), 1.0, kNaN), std::invalid_argument);
  CHECK_THROWS_AS(BoundaryLaw::ldl_linear(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(BoundaryLaw::macrophage_driven(0.0), std::invalid_argument);
}

TEST_CASE("boundary laws are nondecreasing in both arguments") {
  const BoundaryLaw laws[] = {BoundaryLaw::ldl_linear(0.7), BoundaryLaw::self_reinforced(1.3),
                              BoundaryLaw::macrophage_driven(2.0)};
  for (const auto& f : laws) {
    for (double c = 0.0; c < 3.0; c += 0.25) {
      for (double m = 0.0; m < 3.0; m += 0.25) {
        CHECK(f(c + 0.25, m) >= f(c, m));
        CHECK(f(c, m + 0.25) >= f(c, m));
      }
    }
  }
}

TEST_CASE("flux laws") {
  CHECK(eval_flux(FluxLaw::logistic(1.0, 2.0), 0.5) == 0.0);
  CHECK(eval_flux(FluxLaw::malthus(1.0), 2.0) == 2.0);
  CHECK(eval_flux(FluxLaw::logistic(1.0, 2.0), 0.0) == 1.0);
  CHECK(FluxLaw::logistic(3.0, 2.0).positive_root() == 1.5);
  CHECK(std::isinf(FluxLaw::malthus(1.0).positive_root()));
}

TEST_CASE("logistic flux changes sign exactly once, at gamma / beta") {
  const auto r = FluxLaw::logistic(1.7, 0.3);
  const double root = 1.7 / 0.3;
  int changes = 0;
  double prev = r(1e-6);
  for (int i = 1; i <= 10000; ++i) {
    const double x = i * 1e-3 * 2 * root + 1e-6;
    const double y = r(x);
    if ((prev > 0) != (y > 0)) {
      ++changes;
      CHECK(std::abs(x - root) < 2e-3 * 2 * root);
    }
    prev = y;
  }
  CHECK(changes == 1);
}

TEST_CASE("kernel set rejects the quasi-steady closure without a logistic flux") {
  CHECK_THROWS_AS(KernelSet(VelocityKernel::constant(1), MortalityKernel(1), BoundaryLaw::ldl_linear(1),
                            FluxLaw::malthus(1), LdlMode::QuasiSteady),
                  std::invalid_argument);
  CHECK_NOTHROW(KernelSet(VelocityKernel::constant(1), MortalityKernel(1), BoundaryLaw::ldl_linear(1),
                          FluxLaw::logistic(1, 1), LdlMode::QuasiSteady));
  CHECK_THROWS_AS(MortalityKernel(0.0), std::invalid_argument);
  CHECK(to_string(LdlMode::QuasiSteady) == "quasi_steady");
}

TEST_CASE("boundary Lipschitz constants and weight sups") {
  CHECK(BoundaryLaw::ldl_linear(2.5).lipschitz(10.0) == 2.5);
  CHECK(BoundaryLaw::macrophage_driven(2.5).lipschitz(10.0) == 1.0);
  CHECK(BoundaryLaw::self_reinforced(2.0).lipschitz(3.0) == 6.0);
  const auto v = VelocityKernel::bump_decay(10.0, 1.0);
  CHECK(BoundaryLaw::self_reinforced(1.0).weight_sup(v) == v.sup());
  CHECK(BoundaryLaw::macrophage_driven(4.0).weight_sup(v) == 4.0);
  CHECK(BoundaryLaw::ldl_linear(4.0).weight_sup(v) == 1.0);
}
