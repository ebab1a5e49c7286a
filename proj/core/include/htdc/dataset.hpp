#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "htdc/matrix.hpp"

namespace htdc {

/// Time-indexed feature matrix (T x F) with optional binary attack labels.
/// Timestamps are hour indices, strictly increasing with uniform spacing.
struct DatasetFrame {
  std::vector<std::int64_t> timestamps;
  std::vector<std::string> feature_names;
  Matrix values;
  std::optional<std::vector<int>> labels;

  std::size_t rows() const noexcept { return values.rows(); }
  std::size_t feature_count() const noexcept { return feature_names.size(); }

  /// Throws IngestionError when an invariant does not hold.
  void validate() const;

  std::optional<std::size_t> find_feature(std::string_view name) const;

  /// Columns in the given order; IngestionError lists every missing name.
  DatasetFrame select(std::span<const std::string> names) const;
  DatasetFrame slice_rows(std::size_t begin, std::size_t count) const;
};

/// Frame with timestamps 0..T-1 and no labels.
DatasetFrame make_frame(std::vector<std::string> feature_names, Matrix values);

}  // namespace htdc
