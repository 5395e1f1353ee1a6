#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "frozen.hpp"
#include "oracles.hpp"
#include "plaque/transport.hpp"
#include "plaque/vulnerability.hpp"

using namespace plaque;

TEST_CASE("drive integral") {
  const SimplifiedParams unit;
  CHECK(drive_integral(unit, 2.0) == doctest::Approx(frozen::kDriveAtTwo).epsilon(1e-13));
  CHECK(drive_integral(unit, 0.0) == 0.0);
  for (auto [dl, lm] : {std::pair{10.0, 1.0}, {0.1, 2.0}, {0.05, 0.05}, {7.0, 9.0}}) {
    const SimplifiedParams p{1.0, 1.0, 1.0, dl, lm};
    for (double x : {0.01, 0.5, 3.0}) {
      const double ref = oracle::simpson([&](double u) { return std::exp(lm * u) / (1 + dl * u); }, 0.0, x, 20000);
      CHECK(drive_integral(p, x) == doctest::Approx(ref).epsilon(1e-11));
    }
  }
  CHECK(std::isinf(drive_integral(unit, 1e4)));
}

TEST_CASE("fixed point at unit parameters") {
  const SimplifiedParams unit;
  const double d = solve_delta(unit);
  CHECK(d == doctest::Approx(frozen::kDeltaUnit).epsilon(1e-11));
  CHECK(d == doctest::Approx(oracle::delta_fixed_point(1, 1, 1, 1, 1, 40.0, 1e-3)).epsilon(1e-8));
  CHECK(std::abs(d - unit.gamma * unit.sigma_m * survival_moment(unit, d)) < 1e-8);
  CHECK(delta_lower_bound(unit) == doctest::Approx(1.0 / 3.0));
  CHECK(d >= delta_lower_bound(unit));
}

TEST_CASE("fixed point residual on a parameter grid") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(std::log(0.05), std::log(10.0));
  for (int i = 0; i < 200; ++i) {
    const SimplifiedParams p{std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng))};
    const double d = solve_delta(p);
    CHECK(std::abs(d - p.gamma * p.sigma_m * survival_moment(p, d)) <= 1e-8 * std::max(1.0, d));
    CHECK(d >= delta_lower_bound(p) * (1 - 1e-10));
  }
}

TEST_CASE("D vanishes with the influx and grows monotonically with it") {
  CHECK(solve_delta(SimplifiedParams{1, 1e-9, 1, 1, 1}) < 1e-8);
  for (double gamma : {0.1, 0.5, 1.0, 3.0, 9.0}) {
    double prev = 0.0;
    for (double sigma : {0.1, 0.5, 1.0, 3.0, 9.0}) {
      const double d = solve_delta(SimplifiedParams{gamma, sigma, 1.0, 1.0, 1.0});
      CHECK(d > prev);
      prev = d;
    }
  }
}

TEST_CASE("steady profile") {
  const SimplifiedParams p{2.0, 0.3, 0.7, 1.5, 0.8};
  const double d = solve_delta(p);
  CHECK(simplified_steady_profile(p, d, 0.0) == doctest::Approx(0.6));
  const auto k = simplified_kernels(p);
  const double w =
      oracle::simpson([&](double a) { return k.velocity(a) * simplified_steady_profile(p, d, a); }, 0.0, 60.0, 60000);
  CHECK(w == doctest::Approx(d).epsilon(1e-8));
  double prev = INFINITY;
  for (double a : {5.0, 10.0, 20.0, 40.0}) {
    const double x = k.velocity(a) * k.velocity(a) * simplified_steady_profile(p, d, a);
    CHECK(x <= prev);
    prev = x;
  }
  CHECK(prev < 1e-12);
}

TEST_CASE("large delta with a small influx is vulnerable, and certified so") {
  const SimplifiedParams p{10.0, 0.001, 0.1, 10.0, 1.0};
  const auto r = classify(p);
  CHECK(r.verdict == Verdict::Vulnerable);
  CHECK(r.branch == Branch::Wide);
  CHECK(r.vulnerable_condition_fired);
  CHECK_FALSE(r.healthy_condition_fired);
  CHECK(r.phi_min < 0.0);
  CHECK(r.argmin_a == doctest::Approx(1.9));
}

TEST_CASE("minimum of V' plus the death rate is where the report says") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(std::log(0.05), std::log(10.0));
  for (int i = 0; i < 50; ++i) {
    const SimplifiedParams p{std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng))};
    const auto r = classify(p);
    const auto v = simplified_kernels(p).velocity;
    const double k = (1.0 + r.delta_moment) * p.mu / p.gamma;
    double best = INFINITY;
    for (int j = 0; j <= 20000; ++j) best = std::min(best, v.derivative(j * 1e-3 * 10 / p.lambda) + k);
    // the grid can only overshoot the true minimum
    CHECK(best >= r.phi_min - 1e-12);
    CHECK(best - r.phi_min < 1e-4 * (1.0 + p.delta));
    CHECK((r.verdict == Verdict::Healthy) == (r.phi_min >= 0.0));
  }
}

TEST_CASE("narrow branch") {
  const SimplifiedParams p{1.0, 0.01, 0.1, 0.1, 1.0};
  const auto r = classify(p);
  CHECK(r.branch == Branch::Narrow);
  CHECK(r.argmin_a == 0.0);
  CHECK(r.phi_min == doctest::Approx(0.1 - 1.0 + (1 + r.delta_moment) * 0.1));
  CHECK(r.verdict == Verdict::Vulnerable);
}

TEST_CASE("a tiny lambda with a dominant death rate is healthy") {
  const SimplifiedParams p{1.0, 1.0, 1.0, 0.05, 0.05};
  const auto r = classify(p);
  CHECK(r.verdict == Verdict::Healthy);
  CHECK(r.healthy_condition_fired);
  CHECK(r.healthy_condition_partial);
}

TEST_CASE("dropping the D term from the narrow condition misclassifies") {
  const SimplifiedParams p{10.0, 10.0, 1.0, 0.1, 1.0};
  const auto r = classify(p);
  CHECK(r.short_narrow_condition);
  CHECK(r.verdict == Verdict::Healthy);
  CHECK_FALSE(r.vulnerable_condition_fired);
}

TEST_CASE("upper bound on D") {
  for (const SimplifiedParams& p : {SimplifiedParams{}, SimplifiedParams{2, 0.5, 1, 3, 1}, SimplifiedParams{0.5, 2, 3, 0.2, 2},
                                    SimplifiedParams{10, 0.001, 0.1, 10, 1}}) {
    const auto r = classify(p);
    CHECK(r.lower_bound <= r.delta_moment);
    CHECK(r.delta_moment <= r.upper_bound);
  }
}

TEST_CASE("parameters and output") {
  CHECK_THROWS_AS(validate(SimplifiedParams{0, 1, 1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(solve_delta(SimplifiedParams{1, 1, 1, 1, -1}), std::invalid_argument);
  CHECK(to_string(Verdict::Healthy) == "healthy");
  CHECK(to_string(Verdict::Vulnerable) == "vulnerable");
  std::ostringstream os;
  write_sweep_header(os);
  CHECK(os.str() == "gamma,sigma_m,mu,delta,lambda,delta_moment,verdict,healthy_cert,vulnerable_cert\n");
  const auto r = classify(SimplifiedParams{});
  write_sweep_row(os, SimplifiedParams{}, r);
  CHECK(os.str().find(",healthy,") != std::string::npos);
}

TEST_CASE("the steady profile is stationary under the quasi-steady transport") {
  const SimplifiedParams p;
  const double d = solve_delta(p);
  const AgeGrid g(10.0, 400);
  const TransportSolver s(simplified_kernels(p), g);
  const auto init = s.make_state(cell_average(g, [&](double a) { return simplified_steady_profile(p, d, a); }), 1.0);
  CHECK(init.c == doctest::Approx(1.0 / (1.0 + d)).epsilon(1e-3));
  const auto rec = s.run(init, 5.0, 1.0);
  for (const auto& smp : rec.samples) {
    CHECK(smp.weighted_moment == doctest::Approx(d).epsilon(2e-2));
    CHECK(smp.boundary == doctest::Approx(1.0).epsilon(1e-12));
  }
}
