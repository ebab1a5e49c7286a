#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "htdc/model.hpp"
#include "htdc/scaler.hpp"
#include "htdc/trainer.hpp"

namespace htdc {

/// Everything needed to score new data with a trained model.
struct ModelBundle {
  HTdcAutoencoder model;
  RobustScalerParams scaler;
  /// Input columns in model order.
  std::vector<std::string> features;
  std::optional<TrainingConfig> config;
  /// Raw reconstruction errors on the (scaled) training frame, used to fit
  /// detection thresholds without reloading the training data.
  std::vector<double> calibration_scores;

  friend bool operator==(const ModelBundle&, const ModelBundle&) = default;
};

/// Doubles are written in shortest round-trip form, so load(save(b)) == b bit for bit.
std::string model_to_json(const ModelBundle& bundle);
ModelBundle model_from_json(std::string_view text);

void save_model(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_model(const std::filesystem::path& path);

std::string training_config_to_json(const TrainingConfig& config);
/// Keys missing from the JSON keep the values in `base`.
TrainingConfig training_config_from_json(std::string_view text, TrainingConfig base = {});

}  // namespace htdc
