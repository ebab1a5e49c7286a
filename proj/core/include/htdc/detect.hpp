#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "htdc/dataset.hpp"
#include "htdc/model.hpp"

namespace htdc {

enum class SmoothingMode {
  Trailing,  // mean of the min(window, t+1) most recent scores
  Centered,  // mean over [t - window/2, t + window/2] clipped to the sequence
};

enum class ThresholdBasis {
  Smoothed,  // percentile of the smoothed training scores
  Raw,       // percentile of the raw training scores
};

struct DetectionConfig {
  std::size_t window = 7;
  double percentile = 95.0;
  std::optional<double> threshold_override;
  SmoothingMode smoothing = SmoothingMode::Trailing;
  ThresholdBasis basis = ThresholdBasis::Smoothed;

  /// ConfigError unless window >= 1 and 0 < percentile < 100.
  void validate() const;
};

struct DetectionResult {
  std::vector<std::int64_t> timestamps;
  std::vector<double> raw_scores;
  std::vector<double> smoothed_scores;
  double threshold = 0.0;
  /// flags[t] == (smoothed_scores[t] > threshold)
  std::vector<bool> flags;

  std::size_t size() const noexcept { return raw_scores.size(); }
  std::size_t flag_count() const noexcept;
};

/// Mean squared reconstruction error per row, over features.
std::vector<double> reconstruction_error(const HTdcAutoencoder& model, const DatasetFrame& frame);

std::vector<double> smooth(std::span<const double> scores, std::size_t window,
                           SmoothingMode mode = SmoothingMode::Trailing);

/// Threshold from raw training scores (override returned verbatim).
double fit_threshold_from_scores(std::span<const double> train_raw_scores,
                                 const DetectionConfig& config);
double fit_threshold(const HTdcAutoencoder& model, const DatasetFrame& train_frame,
                     const DetectionConfig& config);

DetectionResult detect_scores(std::span<const double> raw_scores,
                              std::span<const std::int64_t> timestamps, double threshold,
                              const DetectionConfig& config);
DetectionResult detect(const HTdcAutoencoder& model, const DatasetFrame& frame, double threshold,
                       const DetectionConfig& config);

/// "timestamp,raw,smoothed,flag"
void write_detection_csv(const DetectionResult& result, std::ostream& out);
void write_detection_csv(const DetectionResult& result, const std::filesystem::path& path);
/// The threshold is not part of the CSV; the returned result has a NaN threshold.
DetectionResult read_detection_csv(const std::filesystem::path& path);

/// Scores, smoothed scores, a dashed threshold line, and shaded regions where labels == 1.
std::string detection_svg(const DetectionResult& result, const std::vector<int>* labels,
                          const std::string& title);

}  // namespace htdc
