#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "htdc/dataset.hpp"
#include "htdc/model.hpp"

namespace htdc {

/// Latent node time series of a model over a (scaled) frame.
/// Columns: z1..zP, zdot1..zdotP, s1..sQ, then cd_z1..cd_zP, the central
/// difference of each static node (NaN on the first and last row).
struct LatentTrace {
  std::vector<std::int64_t> timestamps;
  std::vector<std::string> columns;
  Matrix values;
  LatentPartition partition;
  std::optional<std::vector<int>> labels;

  std::size_t column(const std::string& name) const;
  std::vector<double> series(const std::string& name) const;
};

LatentTrace latent_trace(const HTdcAutoencoder& model, const DatasetFrame& frame,
                         double delta_t = 1.0);

/// Input feature most correlated with a latent node, mapped onto the
/// node's scale by least squares: node ~ scale * feature + offset.
struct FeatureOverlay {
  std::string node;
  std::string feature;
  double correlation = 0.0;
  double scale = 0.0;
  double offset = 0.0;
};

/// One overlay per latent node (z, zdot, s columns).
std::vector<FeatureOverlay> feature_overlays(const LatentTrace& trace, const DatasetFrame& frame);

double pearson(std::span<const double> a, std::span<const double> b);

/// NaN entries are written as empty cells.
void write_latent_csv(const LatentTrace& trace, std::ostream& out);

/// All latent nodes stacked on one chart.
std::string latent_nodes_svg(const LatentTrace& trace, std::size_t smooth_window);
/// Derivative node i against the central difference of static node i.
std::string pair_svg(const LatentTrace& trace, std::size_t pair, std::size_t smooth_window);
std::string overlay_svg(const LatentTrace& trace, const DatasetFrame& frame,
                        const FeatureOverlay& overlay);

}  // namespace htdc
