#include <filesystem>

#include "doctest.h"
#include "plaque/scenario.hpp"

using namespace plaque;
namespace fs = std::filesystem;

TEST_CASE("defaults and overrides") {
  const Scenario d = parse_scenario_text("");
  CHECK(d == Scenario{});
  CHECK(d.velocity_kind == "constant");
  CHECK(d.n_cells == 300);

  const Scenario s = parse_scenario_text("# comment\nvelocity.kind = affine  # trailing\nvelocity.v1=0.5\n\ngrid.n_cells = 64\n");
  CHECK(s.velocity_kind == "affine");
  CHECK(s.v1 == 0.5);
  CHECK(s.n_cells == 64);
  CHECK(s.kernels().velocity.is<AffineVelocity>());
}

TEST_CASE("malformed scenarios are rejected") {
  CHECK_THROWS_AS(parse_scenario_text("velocity.speed = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text("velocity.v = 1\nvelocity.v = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text("velocity.v = fast\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text("velocity.v = 1x\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text("grid.n_cells = 2.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text("velocity.kind = quadratic\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text("just some words\n"), ConfigError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.cfg"), ConfigError);
}

TEST_CASE("semantic validation") {
  CHECK_NOTHROW(validate(Scenario{}));
  CHECK_THROWS_AS(validate(parse_scenario_text("velocity.v = -1\n")), ConfigError);
  CHECK_THROWS_AS(validate(parse_scenario_text("grid.n_cells = 0\n")), ConfigError);
  CHECK_THROWS_AS(validate(parse_scenario_text("time.t_end = 0\n")), ConfigError);
  CHECK_THROWS_AS(validate(parse_scenario_text("ldl.mode = quasi_steady\nflux.kind = malthus\n")), ConfigError);
  CHECK_THROWS_AS(validate(parse_scenario_text("initial.profile = table\n")), ConfigError);
  // cfl > 1 is a runtime stability failure, not a configuration error
  CHECK_NOTHROW(validate(parse_scenario_text("time.cfl = 1.5\n")));
}

TEST_CASE("every fixture loads, validates and round-trips through the canonical dump") {
  for (const auto& entry : fs::directory_iterator(PLAQUE_SCENARIOS)) {
    if (entry.path().extension() != ".cfg") continue;
    CAPTURE(entry.path().string());
    const Scenario s = load_scenario(entry.path());
    CHECK_NOTHROW(validate(s));
    const std::string text = dump_scenario(s);
    const Scenario again = parse_scenario_text(text);
    CHECK(again == s);
    CHECK(dump_scenario(again) == text);
  }
}

TEST_CASE("dump lists every key once, in order") {
  const std::string text = dump_scenario(Scenario{});
  std::size_t pos = 0;
  for (const auto& key : scenario_keys()) {
    const std::size_t at = text.find(key + " = ", pos);
    REQUIRE(at != std::string::npos);
    pos = at + key.size();
  }
}

TEST_CASE("sweep values") {
  Scenario s = parse_scenario_text("sweep.command = steady\nsweep.param = velocity.v\nsweep.from = 1\nsweep.to = 2\nsweep.count = 5\n");
  CHECK(s.sweep_values() == std::vector<double>{1.0, 1.25, 1.5, 1.75, 2.0});
  s.sweep_scale = "log";
  s.sweep_from = 0.5;
  s.sweep_count = 3;
  const auto v = s.sweep_values();
  CHECK(v[0] == 0.5);
  CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v[2] == 2.0);
  s.sweep_count = 1;
  CHECK(s.sweep_values() == std::vector<double>{0.5});

  const Scenario w = Scenario{}.with_value("boundary.sigma_m", 4.0);
  CHECK(w.sigma_m == 4.0);
  CHECK(Scenario{}.with_value("grid.n_cells", 12).n_cells == 12);
  CHECK_THROWS_AS(Scenario{}.with_value("velocity.kind", 1.0), ConfigError);
  CHECK_THROWS_AS(Scenario{}.with_value("nope", 1.0), ConfigError);
}

TEST_CASE("sweep validation checks every point") {
  CHECK_THROWS_AS(validate(parse_scenario_text("sweep.command = steady\nsweep.param = velocity.v\nsweep.from = -1\n"
                                               "sweep.to = 1\nsweep.count = 3\n")),
                  ConfigError);
  CHECK_THROWS_AS(validate(parse_scenario_text("sweep.command = steady\nsweep.param = velocity.kind\nsweep.count = 3\n")),
                  ConfigError);
  CHECK_THROWS_AS(validate(parse_scenario_text("sweep.command = steady\nsweep.param = velocity.v\nsweep.from = 1\n"
                                               "sweep.to = 2\nsweep.count = 0\n")),
                  ConfigError);
}

TEST_CASE("parameter views") {
  const Scenario s = parse_scenario_text(
      "velocity.v = 2\nmortality.mu = 3\nboundary.alpha = 4\nboundary.b = 5\nflux.gamma = 6\nflux.beta = 7\n"
      "boundary.sigma_m = 8\nvelocity.delta = 9\nvelocity.lambda = 10\n");
  const LotkaParams l = s.lotka();
  CHECK(l.b == 5);
  CHECK(l.v == 2);
  CHECK(l.mu == 3);
  CHECK(l.alpha == 4);
  const InjuredParams i = s.injured();
  CHECK(i.alpha == 4);
  CHECK(i.gamma == 6);
  CHECK(i.beta == 7);
  const SimplifiedParams p = s.simplified();
  CHECK(p.gamma == 6);
  CHECK(p.sigma_m == 8);
  CHECK(p.delta == 9);
  CHECK(p.lambda == 10);
}

TEST_CASE("relative table paths resolve against the scenario file") {
  Scenario s = parse_scenario_text("initial.profile = table\ninitial.table = data/m0.csv\n");
  s.base_dir = "/somewhere";
  CHECK(s.table_path() == fs::path("/somewhere/data/m0.csv"));
  s.initial_table = "/abs/m0.csv";
  CHECK(s.table_path() == fs::path("/abs/m0.csv"));
}
