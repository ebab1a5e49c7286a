#include "htdc/scaler.hpp"

#include <algorithm>
#include <json.hpp>

#include "htdc/errors.hpp"
#include "htdc/percentile.hpp"

namespace htdc {

std::size_t RobustScalerParams::index_of(std::string_view feature) const {
  const auto it = std::find(feature_names.begin(), feature_names.end(), feature);
  if (it == feature_names.end()) {
    throw ConfigError("scaler was not fit on feature '" + std::string(feature) + "'");
  }
  return static_cast<std::size_t>(it - feature_names.begin());
}

RobustScalerParams fit_scaler(const DatasetFrame& train) {
  if (train.rows() == 0 || train.feature_count() == 0) {
    throw ConfigError("fit_scaler: empty training frame");
  }
  RobustScalerParams p;
  p.feature_names = train.feature_names;
  std::vector<double> col(train.rows());
  for (std::size_t c = 0; c < train.feature_count(); ++c) {
    for (std::size_t r = 0; r < train.rows(); ++r) col[r] = train.values(r, c);
    std::sort(col.begin(), col.end());
    p.median.push_back(percentile_sorted(col, 50.0));
    p.iqr.push_back(percentile_sorted(col, 75.0) - percentile_sorted(col, 25.0));
  }
  return p;
}

namespace {

template <typename Fn>
DatasetFrame map_columns(const RobustScalerParams& params, const DatasetFrame& frame, Fn fn) {
  DatasetFrame out = frame;
  for (std::size_t c = 0; c < frame.feature_count(); ++c) {
    const std::size_t k = params.index_of(frame.feature_names[c]);
    const double med = params.median[k];
    const double div = params.divisor(k);
    for (std::size_t r = 0; r < frame.rows(); ++r) out.values(r, c) = fn(frame.values(r, c), med, div);
  }
  return out;
}

}  // namespace

DatasetFrame apply_scaler(const RobustScalerParams& params, const DatasetFrame& frame) {
  return map_columns(params, frame, [](double v, double med, double div) { return (v - med) / div; });
}

DatasetFrame invert_scaler(const RobustScalerParams& params, const DatasetFrame& frame) {
  return map_columns(params, frame, [](double v, double med, double div) { return v * div + med; });
}

std::string scaler_to_json(const RobustScalerParams& params) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < params.feature_names.size(); ++i) {
    j[params.feature_names[i]] = {{"median", params.median[i]}, {"iqr", params.iqr[i]}};
  }
  return j.dump(2);
}

RobustScalerParams scaler_from_json(std::string_view text) {
  RobustScalerParams p;
  try {
    const auto j = nlohmann::ordered_json::parse(text);
    if (!j.is_object()) throw ConfigError("scaler JSON must be an object");
    for (const auto& [name, entry] : j.items()) {
      const double iqr = entry.at("iqr").get<double>();
      if (iqr < 0.0) throw ConfigError("scaler JSON: negative iqr for '" + name + "'");
      p.feature_names.push_back(name);
      p.median.push_back(entry.at("median").get<double>());
      p.iqr.push_back(iqr);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid scaler JSON: ") + e.what());
  }
  return p;
}

}  // namespace htdc
