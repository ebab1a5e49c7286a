#include "htdc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numbers>
#include <random>

#include "htdc/errors.hpp"

namespace htdc {

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::SensorFreeze:
      return "sensor_freeze";
    case AttackKind::PumpForceOff:
      return "pump_force_off";
    case AttackKind::LevelSpoofOffset:
      return "level_spoof_offset";
  }
  return "unknown";
}

AttackKind attack_kind_from_string(std::string_view name) {
  if (name == "sensor_freeze") return AttackKind::SensorFreeze;
  if (name == "pump_force_off") return AttackKind::PumpForceOff;
  if (name == "level_spoof_offset") return AttackKind::LevelSpoofOffset;
  throw ConfigError("unknown attack kind '" + std::string(name) + "'");
}

void TankSystemConfig::validate() const {
  if (n_tanks == 0) throw ConfigError("n_tanks must be >= 1");
  auto sized = [&](const auto& v, const char* name) {
    if (v.size() != n_tanks) {
      throw ConfigError(std::string(name) + " must have n_tanks = " + std::to_string(n_tanks) +
                        " entries");
    }
  };
  sized(tank_area, "tank_area");
  sized(pump_on_level, "pump_on_level");
  sized(pump_off_level, "pump_off_level");
  sized(max_level, "max_level");
  sized(initial_level, "initial_level");
  sized(initial_pump_on, "initial_pump_on");
  for (std::size_t i = 0; i < n_tanks; ++i) {
    const std::string idx = "[" + std::to_string(i) + "]";
    if (!(tank_area[i] > 0.0)) throw ConfigError("tank_area" + idx + " must be > 0");
    if (!(pump_on_level[i] > 0.0)) throw ConfigError("pump_on_level" + idx + " must be > 0");
    if (!(pump_off_level[i] > pump_on_level[i])) {
      throw ConfigError("pump_off_level" + idx + " must exceed pump_on_level" + idx);
    }
    if (!(max_level[i] > pump_off_level[i])) {
      throw ConfigError("max_level" + idx + " must exceed pump_off_level" + idx);
    }
    if (!(initial_level[i] >= 0.0 && initial_level[i] <= max_level[i])) {
      throw ConfigError("initial_level" + idx + " must lie in [0, max_level]");
    }
  }
  if (!(pump_flow >= 0.0)) throw ConfigError("pump_flow must be >= 0");
  if (!(demand_base >= 0.0)) throw ConfigError("demand_base must be >= 0");
  if (!(demand_amplitude >= 0.0 && demand_amplitude <= demand_base)) {
    throw ConfigError("demand_amplitude must lie in [0, demand_base]");
  }
  if (!(demand_period > 0.0)) throw ConfigError("demand_period must be > 0");
  if (!(demand_noise_std >= 0.0)) throw ConfigError("demand_noise_std must be >= 0");
  if (!(demand_noise_corr >= 0.0 && demand_noise_corr < 1.0)) {
    throw ConfigError("demand_noise_corr must lie in [0, 1)");
  }
  if (!(noise_std >= 0.0)) throw ConfigError("noise_std must be >= 0");
  if (horizon < 3) throw ConfigError("horizon must be >= 3");
}

std::vector<AttackScenario> default_attack_scenarios() {
  return {
      {AttackKind::LevelSpoofOffset, 0, {600, 659}, 1.5},
      {AttackKind::PumpForceOff, 1, {1400, 1479}, 0.0},
      {AttackKind::SensorFreeze, 2, {2300, 2359}, 0.0},
      {AttackKind::LevelSpoofOffset, 1, {3200, 3289}, -1.5},
  };
}

namespace {

void validate_attacks(const TankSystemConfig& c, const std::vector<AttackScenario>& attacks) {
  for (std::size_t k = 0; k < attacks.size(); ++k) {
    const auto& a = attacks[k];
    const std::string idx = "attacks[" + std::to_string(k) + "]";
    if (a.target >= c.n_tanks) throw ConfigError(idx + ".target out of range");
    if (a.interval.start > a.interval.end || a.interval.end >= c.horizon) {
      throw ConfigError(idx + ".interval must satisfy start <= end < horizon");
    }
    if (!std::isfinite(a.magnitude)) throw ConfigError(idx + ".magnitude must be finite");
  }
}

bool active(const AttackScenario& a, std::size_t t) {
  return t >= a.interval.start && t <= a.interval.end;
}

}  // namespace

SimulationTrace simulate_trace(const TankSystemConfig& c, const std::vector<AttackScenario>& attacks) {
  c.validate();
  validate_attacks(c, attacks);

  const std::size_t n = c.n_tanks;
  const std::size_t T = c.horizon;
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  auto jitter = [&]() { return c.noise_std > 0.0 ? c.noise_std * noise(rng) : 0.0; };

  SimulationTrace tr;
  tr.levels.assign(T + 1, std::vector<double>(n));
  tr.inflow.assign(T, std::vector<double>(n));
  tr.outflow.assign(T, std::vector<double>(n));
  tr.spill.assign(T, std::vector<double>(n));
  tr.pump_status.assign(T, std::vector<int>(n));
  tr.sensed_level.assign(T, std::vector<double>(n));

  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("L_T" + std::to_string(i + 1));
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("F_PU" + std::to_string(i + 1));
    names.push_back("S_PU" + std::to_string(i + 1));
  }
  for (std::size_t i = 0; i < n; ++i) names.push_back("P_J" + std::to_string(i + 1));

  Matrix values(T, 4 * n);
  std::vector<int> labels(T, 0);
  std::vector<double> level = c.initial_level;
  std::vector<int> status(n);
  for (std::size_t i = 0; i < n; ++i) status[i] = c.initial_pump_on[i] ? 1 : 0;
  std::vector<double> frozen(n, 0.0);
  std::vector<double> demand_state(n, 0.0);

  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t t = 0; t < T; ++t) {
    tr.levels[t] = level;
    for (const auto& a : attacks) {
      if (active(a, t)) labels[t] = 1;
      if (a.kind == AttackKind::SensorFreeze && t == a.interval.start) frozen[a.target] = level[a.target];
    }

    for (std::size_t i = 0; i < n; ++i) {
      double sensed = level[i];
      bool forced_off = false;
      for (const auto& a : attacks) {
        if (a.target != i || !active(a, t)) continue;
        switch (a.kind) {
          case AttackKind::SensorFreeze:
            sensed = frozen[i];
            break;
          case AttackKind::LevelSpoofOffset:
            sensed += a.magnitude;
            break;
          case AttackKind::PumpForceOff:
            forced_off = true;
            break;
        }
      }
      tr.sensed_level[t][i] = sensed;

      if (status[i] == 1 && sensed >= c.pump_off_level[i]) {
        status[i] = 0;
      } else if (status[i] == 0 && sensed <= c.pump_on_level[i]) {
        status[i] = 1;
      }
      const int running = forced_off ? 0 : status[i];

      const double phase = two_pi * static_cast<double>(i) / static_cast<double>(n);
      if (c.demand_noise_std > 0.0) {
        demand_state[i] = c.demand_noise_corr * demand_state[i] + c.demand_noise_std * noise(rng);
      }
      const double demand = std::max(
          0.0, (c.demand_base + c.demand_amplitude * std::sin(two_pi * static_cast<double>(t) /
                                                                    c.demand_period +
                                                                phase)) *
                   (1.0 + demand_state[i]));
      const double area = c.tank_area[i];
      const double in = running * c.pump_flow;
      const double out = std::min(demand, level[i] * area + in);
      double next = level[i] + (in - out) / area;
      double spill = 0.0;
      if (next > c.max_level[i]) {
        spill = (next - c.max_level[i]) * area;
        next = c.max_level[i];
      }

      tr.inflow[t][i] = in;
      tr.outflow[t][i] = out;
      tr.spill[t][i] = spill;
      tr.pump_status[t][i] = running;

      values(t, i) = sensed + jitter();
      values(t, n + 2 * i) = in + jitter();
      values(t, n + 2 * i + 1) = running;
      values(t, 3 * n + i) = c.head_offset + level[i] - c.head_loss * demand + jitter();

      level[i] = next;
    }
  }
  tr.levels[T] = level;

  tr.frame = make_frame(std::move(names), std::move(values));
  tr.frame.labels = std::move(labels);
  return tr;
}

DatasetFrame simulate(const TankSystemConfig& config, const std::vector<AttackScenario>& attacks) {
  return simulate_trace(config, attacks).frame;
}

namespace {

using json = nlohmann::ordered_json;

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string synth_config_to_json(const TankSystemConfig& c, const std::vector<AttackScenario>& attacks) {
  json sys = {{"n_tanks", c.n_tanks},
              {"tank_area", c.tank_area},
              {"pump_on_level", c.pump_on_level},
              {"pump_off_level", c.pump_off_level},
              {"max_level", c.max_level},
              {"initial_level", c.initial_level},
              {"initial_pump_on", c.initial_pump_on},
              {"pump_flow", c.pump_flow},
              {"demand_base", c.demand_base},
              {"demand_amplitude", c.demand_amplitude},
              {"demand_period", c.demand_period},
              {"demand_noise_std", c.demand_noise_std},
              {"demand_noise_corr", c.demand_noise_corr},
              {"head_offset", c.head_offset},
              {"head_loss", c.head_loss},
              {"noise_std", c.noise_std},
              {"horizon", c.horizon},
              {"seed", c.seed}};
  json atk = json::array();
  for (const auto& a : attacks) {
    atk.push_back({{"kind", std::string(to_string(a.kind))},
                   {"target", a.target},
                   {"start", a.interval.start},
                   {"end", a.interval.end},
                   {"magnitude", a.magnitude}});
  }
  return json{{"system", sys}, {"attacks", atk}}.dump(2);
}

void synth_config_from_json(std::string_view text, TankSystemConfig& c,
                            std::vector<AttackScenario>& attacks) {
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw ConfigError("synth config must be a JSON object");
    for (const auto& [key, _] : j.items()) {
      if (key != "system" && key != "attacks") {
        throw ConfigError("unknown synth config key '" + key + "' (expected system, attacks)");
      }
    }
    if (j.contains("system")) {
      const auto& s = j.at("system");
      static const std::vector<std::string> known{
          "n_tanks",          "tank_area",        "pump_on_level",     "pump_off_level",
          "max_level",        "initial_level",    "initial_pump_on",   "pump_flow",
          "demand_base",      "demand_amplitude", "demand_period",     "demand_noise_std",
          "demand_noise_corr", "head_offset",     "head_loss",         "noise_std",
          "horizon",          "seed"};
      for (const auto& [key, _] : s.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
          throw ConfigError("unknown synth system key '" + key + "'");
        }
      }
      read_opt(s, "n_tanks", c.n_tanks);
      read_opt(s, "tank_area", c.tank_area);
      read_opt(s, "pump_on_level", c.pump_on_level);
      read_opt(s, "pump_off_level", c.pump_off_level);
      read_opt(s, "max_level", c.max_level);
      read_opt(s, "initial_level", c.initial_level);
      read_opt(s, "initial_pump_on", c.initial_pump_on);
      read_opt(s, "pump_flow", c.pump_flow);
      read_opt(s, "demand_base", c.demand_base);
      read_opt(s, "demand_amplitude", c.demand_amplitude);
      read_opt(s, "demand_period", c.demand_period);
      read_opt(s, "demand_noise_std", c.demand_noise_std);
      read_opt(s, "demand_noise_corr", c.demand_noise_corr);
      read_opt(s, "head_offset", c.head_offset);
      read_opt(s, "head_loss", c.head_loss);
      read_opt(s, "noise_std", c.noise_std);
      read_opt(s, "horizon", c.horizon);
      read_opt(s, "seed", c.seed);
    }
    if (j.contains("attacks")) {
      attacks.clear();
      for (const auto& a : j.at("attacks")) {
        AttackScenario sc;
        sc.kind = attack_kind_from_string(a.at("kind").get<std::string>());
        sc.target = a.at("target").get<std::size_t>();
        sc.interval = {a.at("start").get<std::size_t>(), a.at("end").get<std::size_t>()};
        sc.magnitude = a.value("magnitude", 0.0);
        attacks.push_back(sc);
      }
    } else {
      attacks = default_attack_scenarios();
    }
    c.validate();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid synth config JSON: ") + e.what());
  }
}

}  // namespace htdc
