#include "htdc/edges.hpp"

#include <string>

#include "htdc/errors.hpp"

namespace htdc {

const EdgeSegment& edge_segment(EdgeId id) {
  static const EdgeSegment edge1{
      EdgeId::Edge1,
      {"L_T1", "F_PU1", "S_PU1", "F_PU2", "S_PU2", "F_PU3", "S_PU3", "P_J280", "P_J269"}};
  static const EdgeSegment edge2{
      EdgeId::Edge2,
      {"L_T2", "L_T3", "L_T4", "F_PU4", "S_PU4", "F_PU5", "S_PU5", "P_J300", "P_J256", "F_PU6",
       "S_PU6", "F_PU7", "S_PU7", "P_J289", "P_J415", "P_J14", "P_J422", "F_V2", "S_V2"}};
  static const EdgeSegment edge3{
      EdgeId::Edge3,
      {"L_T5", "L_T6", "L_T7", "F_PU8", "S_PU8", "F_PU9", "S_PU9", "P_J302", "P_J306", "F_PU10",
       "S_PU10", "F_PU11", "S_PU11", "P_J307", "P_J317"}};
  switch (id) {
    case EdgeId::Edge1:
      return edge1;
    case EdgeId::Edge2:
      return edge2;
    case EdgeId::Edge3:
      return edge3;
  }
  throw ConfigError("unknown edge id");
}

const std::array<EdgeId, 3>& all_edges() {
  static const std::array<EdgeId, 3> edges{EdgeId::Edge1, EdgeId::Edge2, EdgeId::Edge3};
  return edges;
}

EdgeId edge_from_int(int n) {
  if (n < 1 || n > 3) throw ConfigError("edge must be 1, 2, or 3 (got " + std::to_string(n) + ")");
  return static_cast<EdgeId>(n);
}

std::string_view to_string(EdgeId id) {
  switch (id) {
    case EdgeId::Edge1:
      return "edge1";
    case EdgeId::Edge2:
      return "edge2";
    case EdgeId::Edge3:
      return "edge3";
  }
  return "unknown";
}

std::vector<std::pair<EdgeSegment, DatasetFrame>> segment_edges(const DatasetFrame& frame) {
  std::string missing;
  for (EdgeId id : all_edges()) {
    for (const auto& name : edge_segment(id).feature_names) {
      if (!frame.find_feature(name)) missing += " " + name;
    }
  }
  if (!missing.empty()) throw IngestionError("frame is missing edge feature(s):" + missing);

  std::vector<std::pair<EdgeSegment, DatasetFrame>> out;
  for (EdgeId id : all_edges()) {
    const auto& seg = edge_segment(id);
    out.emplace_back(seg, frame.select(seg.feature_names));
  }
  return out;
}

}  // namespace htdc
