#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "htdc/dataset.hpp"

namespace htdc {

/// Per-feature robust scaling: (value - median) / (p75 - p25).
/// A feature with zero interquartile range is only centered (divisor 1).
struct RobustScalerParams {
  std::vector<std::string> feature_names;
  std::vector<double> median;
  std::vector<double> iqr;

  double divisor(std::size_t i) const { return iqr[i] > 0.0 ? iqr[i] : 1.0; }
  std::size_t index_of(std::string_view feature) const;

  friend bool operator==(const RobustScalerParams&, const RobustScalerParams&) = default;
};

/// Labels are ignored.
RobustScalerParams fit_scaler(const DatasetFrame& train);

/// Columns are matched by name; ConfigError for a column the scaler was not fit on.
DatasetFrame apply_scaler(const RobustScalerParams& params, const DatasetFrame& frame);
DatasetFrame invert_scaler(const RobustScalerParams& params, const DatasetFrame& frame);

/// {"<feature>": {"median": m, "iqr": q}, ...} in feature order.
std::string scaler_to_json(const RobustScalerParams& params);
RobustScalerParams scaler_from_json(std::string_view text);

}  // namespace htdc
