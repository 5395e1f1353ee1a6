#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "frozen.hpp"
#include "oracles.hpp"
#include "plaque/characteristics.hpp"
#include "plaque/equilibrium.hpp"

using namespace plaque;

namespace {

KernelSet ldl(VelocityKernel v, double mu = 1.0, double alpha = 1.0, double gamma = 1.0, double beta = 2.0) {
  return KernelSet(std::move(v), MortalityKernel(mu), BoundaryLaw::ldl_linear(alpha), FluxLaw::logistic(gamma, beta));
}

KernelSet driven(VelocityKernel v, double b, double mu, double gamma, double beta) {
  return KernelSet(std::move(v), MortalityKernel(mu), BoundaryLaw::macrophage_driven(b),
                   FluxLaw::logistic(gamma, beta));
}

}  // namespace

TEST_CASE("constant speed: C* is the root of the cubic alpha V^2 x^3 / mu + beta x - gamma") {
  CHECK(solve_steady_ldl_linear(ldl(VelocityKernel::constant(1.0))).c_star() ==
        doctest::Approx(frozen::kCubicRootV1).epsilon(1e-11));
  CHECK(solve_steady_ldl_linear(ldl(VelocityKernel::constant(2.0))).c_star() ==
        doctest::Approx(frozen::kCubicRootV2).epsilon(1e-11));
  CHECK(frozen::kCubicRootV2 < frozen::kCubicRootV1);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(0.1, 5.0);
  for (int i = 0; i < 50; ++i) {
    const double v = d(rng), mu = d(rng), alpha = d(rng), gamma = d(rng), beta = d(rng);
    const auto st = solve_steady_ldl_linear(ldl(VelocityKernel::constant(v), mu, alpha, gamma, beta));
    CHECK(st.c_star() == doctest::Approx(oracle::cubic_root(alpha * v * v / mu, beta, gamma)).epsilon(1e-10));
    CHECK(st.ldl_residual() < 1e-10);
  }
}

TEST_CASE("affine speed: C* stays below min(mu / V1, gamma / beta)") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(0.05, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double v1 = d(rng), v2 = d(rng), mu = d(rng), gamma = d(rng), beta = d(rng);
    const auto k = ldl(VelocityKernel::affine(v1, v2), mu, 1.0, gamma, beta);
    const auto st = solve_steady_ldl_linear(k);
    CHECK(st.c_star() < std::min(mu / v1, gamma / beta));
    CHECK(st.ldl_residual() < 1e-9 * (1 + gamma));
  }
}

TEST_CASE("steady profile ratios") {
  const auto st = solve_steady_ldl_linear(ldl(VelocityKernel::constant(1.0)));
  const double c = st.c_star();
  CHECK(st.m0_star() == doctest::Approx(c));
  CHECK(st.profile(1.0) / st.profile(0.0) == doctest::Approx(std::exp(-1.0 / c)).epsilon(1e-14));
  CHECK(st.mass() == doctest::Approx(frozen::kInjuredMassV1).epsilon(1e-11));

  const auto sa = solve_steady_ldl_linear(ldl(VelocityKernel::affine(1.0, 2.0), 3.0));
  const double p = 3.0 / sa.c_star();
  CHECK(sa.profile(2.0) / sa.profile(0.0) == doctest::Approx(std::pow(2.0, -p - 1.0)).epsilon(1e-12));

  const auto kb = ldl(VelocityKernel::bump_decay(2.0, 0.5));
  const auto sb = solve_steady_ldl_linear(kb);
  const double a = 1.3;
  CHECK(sb.profile(a) / sb.profile(0.0) ==
        doctest::Approx(1.0 / kb.velocity(a) * std::exp(-theta(kb.velocity, a) / sb.c_star())).epsilon(1e-12));
}

TEST_CASE("survival integral closed forms agree with Simpson") {
  // In the clock variable t = theta(a) the integrand is exp(-mu t / x) V(a(t)),
  // which decays exponentially even where the profile only decays algebraically.
  const double mu = 1.3;
  for (double x : {0.2, 0.8, 1.5}) {
    const double ref_const = oracle::simpson([&](double t) { return std::exp(-mu * t / x) * 0.7; }, 0.0, 400.0, 200000);
    CHECK(survival_integral(ldl(VelocityKernel::constant(0.7), mu), x) == doctest::Approx(ref_const).epsilon(1e-9));
    const double ref_affine =
        oracle::simpson([&](double t) { return std::exp(-mu * t / x) * 2.0 * std::exp(0.5 * t); }, 0.0, 400.0, 200000);
    CHECK(survival_integral(ldl(VelocityKernel::affine(0.5, 2.0), mu), x) == doctest::Approx(ref_affine).epsilon(1e-9));
  }
  CHECK(std::isinf(survival_integral(ldl(VelocityKernel::affine(1.0, 1.0)), 1.0)));
  CHECK(survival_domain_end(ldl(VelocityKernel::affine(2.0, 1.0), 3.0)) == 1.5);
}

TEST_CASE("bump-decay steady state solves the LDL balance") {
  for (auto [dl, lm] : {std::pair{1.0, 1.0}, {10.0, 1.0}, {0.3, 2.0}}) {
    const auto st = solve_steady_ldl_linear(ldl(VelocityKernel::bump_decay(dl, lm)));
    CHECK(st.ldl_residual() < 1e-9);
  }
}

TEST_CASE("the steady residual g is increasing") {
  for (const auto& v : {VelocityKernel::constant(1.0), VelocityKernel::affine(0.5, 1.0),
                        VelocityKernel::bump_decay(1.0, 1.0)}) {
    const auto k = ldl(v);
    const double hi = std::min(0.5, survival_domain_end(k));
    double prev = -INFINITY;
    for (int i = 1; i <= 1000; ++i) {
      const double g = steady_ldl_linear_residual(k, hi * i / 1001.0);
      CHECK(g > prev);
      prev = g;
    }
  }
}

TEST_CASE("first moment equals (gamma - beta C*) / mu") {
  for (const auto& v : {VelocityKernel::constant(1.0), VelocityKernel::affine(0.3, 1.0),
                        VelocityKernel::bump_decay(1.0, 1.0), VelocityKernel::bump_decay(5.0, 0.5)}) {
    const auto k = ldl(v, 1.5, 0.8, 1.2, 2.0);
    const auto st = solve_steady_ldl_linear(k);
    const double expect = (1.2 - 2.0 * st.c_star()) / 1.5;
    CHECK(std::abs(st.first_moment() - expect) < 1e-8);
    // independent quadrature of a M*
    const double ref = oracle::simpson([&](double a) { return a * st.profile(a); }, 0.0, 200.0, 400000);
    CHECK(std::abs(ref - expect) < 1e-7);
  }
  CHECK(solve_steady_ldl_linear(ldl(VelocityKernel::constant(1.0))).first_moment() ==
        doctest::Approx(frozen::kFirstMomentV1).epsilon(1e-10));
}

TEST_CASE("macrophage-driven steady state") {
  const auto st = solve_steady_macrophage_driven(driven(VelocityKernel::constant(1.0), 1.0, 1.0, 3.0, 1.0));
  CHECK(st.c_star() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(st.m0_star() == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(st.ldl_residual() < 1e-10);

  const auto sa = solve_steady_macrophage_driven(driven(VelocityKernel::affine(0.5, 2.0), 1.0, 1.0, 3.0, 1.0));
  CHECK(sa.c_star() == doctest::Approx(0.5).epsilon(1e-12));

  const auto sb = solve_steady_macrophage_driven(driven(VelocityKernel::bump_decay(1.0, 1.0), 2.0, 1.0, 5.0, 1.0));
  // int b M* = M*(0)
  const double births = 2.0 * sb.mass();
  CHECK(births == doctest::Approx(sb.m0_star()).epsilon(1e-9));

  try {
    (void)solve_steady_macrophage_driven(driven(VelocityKernel::constant(1.0), 1.0, 1.0, 1.0, 2.0));
    FAIL("expected negative influx");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).rfind("negative_influx", 0) == 0);
  }
  CHECK_THROWS_AS(solve_steady_macrophage_driven(ldl(VelocityKernel::constant(1.0))), std::invalid_argument);
  CHECK_THROWS_AS(solve_steady_ldl_linear(driven(VelocityKernel::constant(1.0), 1, 1, 1, 1)), std::invalid_argument);
}

TEST_CASE("a-priori bounds") {
  const auto eb = existence_bounds(ldl(VelocityKernel::constant(1.0)), 1.0, 0.0);
  CHECK(eb.c_cap == 1.0);
  CHECK(eb.k_f == 1.0);
  CHECK(eb.b_sup == 1.0);
  CHECK(eb.influx_sup == 1.0);
  CHECK(eb.theta == 1.0);
  CHECK(eb.radius(0.0) == 0.0);
  CHECK(eb.radius(1.0) == doctest::Approx(std::exp(1.0) - 1.0));

  const auto e0 = existence_bounds(ldl(VelocityKernel::constant(1.0), 1.0, 0.0), 2.0, 3.0);
  CHECK(e0.theta == 0.0);
  CHECK(e0.radius(5.0) == 3.0);

  const KernelSet malthus(VelocityKernel::constant(1), MortalityKernel(1), BoundaryLaw::ldl_linear(1),
                          FluxLaw::malthus(1));
  CHECK_THROWS_AS(existence_bounds(malthus, 1.0, 0.0), std::invalid_argument);
  const KernelSet unbounded(VelocityKernel::affine(1, 1), MortalityKernel(1), BoundaryLaw::self_reinforced(1),
                            FluxLaw::logistic(1, 1));
  CHECK_THROWS_AS(existence_bounds(unbounded, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("truncation for a given tail mass") {
  for (const auto& v : {VelocityKernel::constant(1.0), VelocityKernel::affine(0.2, 1.0),
                        VelocityKernel::bump_decay(1.0, 1.0)}) {
    const auto st = solve_steady_ldl_linear(ldl(v));
    const double a = truncation_for_tail(st, 1e-8);
    const double tail = oracle::simpson([&](double x) { return st.profile(x); }, a, a + 2000.0, 400000);
    CHECK(tail <= 1e-8 * 1.01);
  }
}

TEST_CASE("steady profile table") {
  const auto st = solve_steady_ldl_linear(ldl(VelocityKernel::constant(1.0)));
  std::ostringstream os;
  write_profile_csv(os, st, 2.0, 3);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "a,m_star");
  std::getline(in, line);
  CHECK(line.rfind("0,", 0) == 0);
}
