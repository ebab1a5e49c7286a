#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "htdc/dataset.hpp"

namespace htdc {

enum class EdgeId { Edge1 = 1, Edge2 = 2, Edge3 = 3 };

/// Feature subset of one topological area of the C-Town network.
struct EdgeSegment {
  EdgeId edge_id;
  std::vector<std::string> feature_names;
};

const EdgeSegment& edge_segment(EdgeId id);
const std::array<EdgeId, 3>& all_edges();

/// 1, 2, or 3; ConfigError otherwise.
EdgeId edge_from_int(int n);
std::string_view to_string(EdgeId id);

/// One frame per edge with exactly that edge's columns (order as listed),
/// labels copied. IngestionError names every absent feature.
std::vector<std::pair<EdgeSegment, DatasetFrame>> segment_edges(const DatasetFrame& frame);

}  // namespace htdc
