#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "htdc/detect.hpp"

namespace htdc {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Inclusive [start, end] timestep range of one attack.
struct AttackInterval {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t duration() const noexcept { return end - start + 1; }
  friend bool operator==(const AttackInterval&, const AttackInterval&) = default;
};

/// nullopt marks a metric whose denominator is zero.
using Metric = std::optional<double>;

struct ClfScores {
  Metric tpr;
  Metric tnr;
  Metric ppv;
  Metric f1;
  Metric s_clf;
};

struct MetricsReport {
  ConfusionCounts counts;
  Metric tpr;
  Metric tnr;
  Metric ppv;
  Metric f1;
  Metric s_ttd;
  Metric s_clf;
  Metric s;
};

enum class FuseRule {
  Or,        // any edge flags
  Majority,  // more than half of the edges flag
};

FuseRule fuse_rule_from_string(const std::string& name);

/// ConfigError when the per-edge results differ in length.
std::vector<bool> fuse_edges(std::span<const DetectionResult> results, FuseRule rule = FuseRule::Or);
std::vector<bool> fuse_flags(std::span<const std::vector<bool>> flags, FuseRule rule = FuseRule::Or);

ConfusionCounts confusion(std::span<const bool> flags, std::span<const int> labels);
ConfusionCounts confusion(const std::vector<bool>& flags, std::span<const int> labels);

ClfScores clf_scores(const ConfusionCounts& counts);

/// Maximal runs of label 1.
std::vector<AttackInterval> intervals_from_labels(std::span<const int> labels);

/// 1 - mean_i(TTD_i / duration_i), where TTD_i is the offset of the first
/// flag inside attack i (the full duration if it is never flagged).
/// ConfigError for an empty interval list or an interval out of bounds.
double ttd_score(const std::vector<bool>& flags, std::span<const AttackInterval> intervals);

double ranking_score(double s_ttd, double s_clf);

/// Full report with attack intervals taken from the labels. s_ttd is
/// undefined when the labels contain no attack.
MetricsReport evaluate(const std::vector<bool>& flags, std::span<const int> labels);

/// Report assembled from counts and an externally known s_ttd.
MetricsReport report_from_counts(const ConfusionCounts& counts, Metric s_ttd);

std::string metrics_to_json(const MetricsReport& report);
/// Columns: S, S_TTD, S_CLF, F1, TPR, TNR, PPV, TP, FP, TN, FN.
std::string metrics_table(const MetricsReport& report, const std::string& row_label = "run");

}  // namespace htdc
