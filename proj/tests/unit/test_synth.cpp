#include <doctest.h>

#include <cmath>
#include <sstream>

#include "htdc/csv.hpp"
#include "htdc/errors.hpp"
#include "htdc/synth.hpp"

using namespace htdc;

namespace {

TankSystemConfig quiet() {
  TankSystemConfig c;
  c.noise_std = 0.0;
  c.demand_noise_std = 0.0;
  return c;
}

std::size_t col(const DatasetFrame& f, const std::string& name) { return *f.find_feature(name); }

}  // namespace

TEST_CASE("default dataset shape") {
  const auto f = simulate(TankSystemConfig{}, default_attack_scenarios());
  CHECK(f.rows() == 4000);
  CHECK(f.feature_count() == 3 + 6 + 3);
  REQUIRE(f.labels.has_value());
  std::size_t positives = 0;
  for (int l : *f.labels) positives += static_cast<std::size_t>(l);
  CHECK(positives == 60 + 80 + 60 + 90);
  CHECK(default_attack_scenarios().size() == 4);
  f.validate();
}

TEST_CASE("zero demand with pumps off keeps levels constant") {
  auto c = quiet();
  c.demand_base = 0.0;
  c.demand_amplitude = 0.0;
  c.initial_pump_on = {false, false, false};
  c.horizon = 50;
  const auto tr = simulate_trace(c, {});
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t t = 0; t < 50; ++t) CHECK(tr.levels[t][i] == c.initial_level[i]);
  }
}

TEST_CASE("constant inflow raises the level linearly") {
  auto c = quiet();
  c.demand_base = 0.0;
  c.demand_amplitude = 0.0;
  c.initial_level = {1.0, 1.0, 1.0};
  c.pump_off_level = {100.0, 100.0, 100.0};
  c.max_level = {200.0, 200.0, 200.0};
  c.initial_pump_on = {true, true, true};
  c.horizon = 10;
  const auto tr = simulate_trace(c, {});
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t k = 0; k < 10; ++k) {
      CHECK(tr.levels[k][i] ==
            doctest::Approx(1.0 + static_cast<double>(k) * c.pump_flow / c.tank_area[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("mass balance holds every step") {
  const auto c = TankSystemConfig{};
  const auto tr = simulate_trace(c, default_attack_scenarios());
  for (std::size_t t = 0; t + 1 < c.horizon; ++t) {
    for (std::size_t i = 0; i < 3; ++i) {
      const double delta = (tr.levels[t + 1][i] - tr.levels[t][i]) * c.tank_area[i];
      const double net = tr.inflow[t][i] - tr.outflow[t][i] - tr.spill[t][i];
      CHECK(std::abs(delta - net) < 1e-9);
      CHECK(tr.levels[t][i] >= 0.0);
      CHECK(tr.levels[t][i] <= c.max_level[i] + 1e-12);
    }
  }
}

TEST_CASE("pumps follow hysteresis on the sensed level") {
  const auto c = TankSystemConfig{};
  const auto tr = simulate_trace(c, {});
  for (std::size_t t = 1; t < c.horizon; ++t) {
    for (std::size_t i = 0; i < 3; ++i) {
      const double sensed = tr.sensed_level[t][i];
      if (sensed <= c.pump_on_level[i]) CHECK(tr.pump_status[t][i] == 1);
      if (sensed >= c.pump_off_level[i]) CHECK(tr.pump_status[t][i] == 0);
      if (sensed > c.pump_on_level[i] && sensed < c.pump_off_level[i]) {
        CHECK(tr.pump_status[t][i] == tr.pump_status[t - 1][i]);
      }
    }
  }
}

TEST_CASE("sensor freeze holds the reported level") {
  auto c = quiet();
  c.horizon = 400;
  const std::vector<AttackScenario> attacks{{AttackKind::SensorFreeze, 0, {200, 250}, 0.0}};
  const auto f = simulate(c, attacks);
  const auto l = col(f, "L_T1");
  const auto flow = col(f, "F_PU1");
  const auto p = col(f, "P_J1");
  bool flow_or_pressure_moves = false;
  for (std::size_t t = 201; t <= 250; ++t) {
    CHECK(f.values(t, l) == f.values(200, l));
    if (f.values(t, flow) != f.values(200, flow) || f.values(t, p) != f.values(200, p)) {
      flow_or_pressure_moves = true;
    }
  }
  CHECK(flow_or_pressure_moves);
  for (std::size_t t = 0; t < 400; ++t) CHECK((*f.labels)[t] == (t >= 200 && t <= 250 ? 1 : 0));
}

TEST_CASE("pump force-off and level spoof act on the plant") {
  auto c = quiet();
  c.horizon = 300;
  const auto base = simulate_trace(c, {});
  const auto off = simulate_trace(c, {{AttackKind::PumpForceOff, 1, {100, 199}, 0.0}});
  for (std::size_t t = 100; t <= 199; ++t) CHECK(off.inflow[t][1] == 0.0);
  const auto spoof = simulate_trace(c, {{AttackKind::LevelSpoofOffset, 0, {100, 149}, 1.5}});
  for (std::size_t t = 100; t < 149; ++t) {
    CHECK(spoof.sensed_level[t][0] == doctest::Approx(spoof.levels[t][0] + 1.5));
  }
  CHECK(base.levels[99] == off.levels[99]);
}

TEST_CASE("generator is deterministic per seed") {
  TankSystemConfig c;
  std::ostringstream a, b, d;
  write_csv(simulate(c, default_attack_scenarios()), a);
  write_csv(simulate(c, default_attack_scenarios()), b);
  CHECK(a.str() == b.str());
  c.seed = 2;
  write_csv(simulate(c, default_attack_scenarios()), d);
  CHECK(a.str() != d.str());
}

TEST_CASE("config validation names the field") {
  auto c = TankSystemConfig{};
  c.pump_off_level[1] = 1.0;
  try {
    c.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("pump_off_level") != std::string::npos);
  }
  c = {};
  c.tank_area = {1.0};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  CHECK_THROWS_AS(simulate(c, {{AttackKind::SensorFreeze, 7, {1, 2}, 0.0}}), ConfigError);
  CHECK_THROWS_AS(simulate(c, {{AttackKind::SensorFreeze, 0, {5, 2}, 0.0}}), ConfigError);
}

TEST_CASE("synth config json round trip") {
  TankSystemConfig c;
  c.seed = 77;
  c.horizon = 123;
  const std::vector<AttackScenario> attacks{{AttackKind::LevelSpoofOffset, 2, {10, 20}, -0.75}};
  TankSystemConfig c2;
  std::vector<AttackScenario> a2;
  synth_config_from_json(synth_config_to_json(c, attacks), c2, a2);
  CHECK(c2.seed == 77);
  CHECK(c2.horizon == 123);
  REQUIRE(a2.size() == 1);
  CHECK(a2[0].kind == AttackKind::LevelSpoofOffset);
  CHECK(a2[0].magnitude == -0.75);
  CHECK(a2[0].interval == AttackInterval{10, 20});
  CHECK(synth_config_to_json(c2, a2) == synth_config_to_json(c, attacks));

  TankSystemConfig c3;
  std::vector<AttackScenario> a3;
  CHECK_THROWS_AS(synth_config_from_json(R"({"system": {"pump_off_level": [1, 1, 1]}})", c3, a3), ConfigError);
  CHECK_THROWS_AS(synth_config_from_json("[", c3, a3), ConfigError);
  CHECK_THROWS_AS(synth_config_from_json(R"({"pump_flow": 3})", c3, a3), ConfigError);
  CHECK_THROWS_AS(synth_config_from_json(R"({"system": {"pumpflow": 3}})", c3, a3), ConfigError);
}
