#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "htdc/dataset.hpp"
#include "htdc/metrics.hpp"

namespace htdc {

/// Coupled tank/pump network. Each tank i is filled by pump i and drained by a
/// sinusoidal demand; pumps follow hysteresis control on the level the PLC
/// reads. All quantities hourly (m, m^2, m^3/h).
struct TankSystemConfig {
  std::size_t n_tanks = 3;
  std::vector<double> tank_area{50.0, 70.0, 40.0};
  std::vector<double> pump_on_level{2.0, 2.5, 1.5};
  std::vector<double> pump_off_level{5.0, 5.5, 4.5};
  std::vector<double> max_level{6.5, 7.0, 6.0};
  std::vector<double> initial_level{3.0, 4.0, 2.5};
  std::vector<bool> initial_pump_on{true, false, true};
  double pump_flow = 40.0;
  double demand_base = 20.0;
  double demand_amplitude = 12.0;
  double demand_period = 24.0;
  /// Demand is scaled by (1 + m_t) with AR(1) m_t = corr * m_{t-1} + std * N(0, 1).
  double demand_noise_std = 0.1;
  double demand_noise_corr = 0.9;
  /// Junction pressure proxy: head_offset + level - head_loss * demand.
  double head_offset = 10.0;
  double head_loss = 0.05;
  /// Gaussian noise added to reported levels, flows, and pressures.
  double noise_std = 0.02;
  std::size_t horizon = 4000;
  std::uint64_t seed = 1;

  /// ConfigError naming the offending field.
  void validate() const;
};

enum class AttackKind {
  SensorFreeze,      // reported level held at its value when the attack starts
  PumpForceOff,      // pump actuator forced off; reports stay truthful
  LevelSpoofOffset,  // reported level shifted by `magnitude`
};

std::string_view to_string(AttackKind kind);
AttackKind attack_kind_from_string(std::string_view name);

/// The PLC acts on the corrupted level reading, so sensor attacks also
/// change the physical trajectory.
struct AttackScenario {
  AttackKind kind = AttackKind::SensorFreeze;
  std::size_t target = 0;
  AttackInterval interval;
  double magnitude = 0.0;
};

/// Hidden physical state per step alongside the reported frame.
struct SimulationTrace {
  DatasetFrame frame;
  /// levels[t] is the true level at the start of hour t, t = 0..horizon.
  std::vector<std::vector<double>> levels;
  std::vector<std::vector<double>> inflow;
  std::vector<std::vector<double>> outflow;
  std::vector<std::vector<double>> spill;
  std::vector<std::vector<int>> pump_status;
  std::vector<std::vector<double>> sensed_level;
};

/// Four attacks spread over a 4000 h horizon, one of each kind plus a
/// second level spoof.
std::vector<AttackScenario> default_attack_scenarios();

/// Columns: L_T1..L_Tn, F_PU1, S_PU1, ..., F_PUn, S_PUn, P_J1..P_Jn. Labels
/// are 1 exactly on attacked hours.
DatasetFrame simulate(const TankSystemConfig& config, const std::vector<AttackScenario>& attacks);
SimulationTrace simulate_trace(const TankSystemConfig& config,
                               const std::vector<AttackScenario>& attacks);

/// {"system": {...}, "attacks": [{"kind", "target", "start", "end", "magnitude"}]}
std::string synth_config_to_json(const TankSystemConfig& config,
                                 const std::vector<AttackScenario>& attacks);
/// Missing keys keep their defaults; a missing "attacks" key yields the default scenarios.
void synth_config_from_json(std::string_view text, TankSystemConfig& config,
                            std::vector<AttackScenario>& attacks);

}  // namespace htdc
