#include "htdc/dataset.hpp"

#include <algorithm>
#include <numeric>

#include "htdc/errors.hpp"

namespace htdc {

void DatasetFrame::validate() const {
  if (values.cols() != feature_names.size()) {
    throw IngestionError("frame has " + std::to_string(feature_names.size()) +
                         " feature names but " + std::to_string(values.cols()) + " columns");
  }
  if (timestamps.size() != values.rows()) {
    throw IngestionError("frame has " + std::to_string(timestamps.size()) + " timestamps but " +
                         std::to_string(values.rows()) + " rows");
  }
  if (timestamps.size() >= 2) {
    const std::int64_t step = timestamps[1] - timestamps[0];
    if (step <= 0) throw IngestionError("timestamps must be strictly increasing");
    for (std::size_t i = 2; i < timestamps.size(); ++i) {
      if (timestamps[i] - timestamps[i - 1] != step) {
        throw IngestionError("timestamps are not uniformly spaced at row " + std::to_string(i));
      }
    }
  }
  if (labels) {
    if (labels->size() != values.rows()) {
      throw IngestionError("labels length " + std::to_string(labels->size()) +
                           " does not match " + std::to_string(values.rows()) + " rows");
    }
    for (int v : *labels) {
      if (v != 0 && v != 1) throw IngestionError("labels must be 0 or 1");
    }
  }
  if (!values.all_finite()) throw IngestionError("frame contains non-finite values");
}

std::optional<std::size_t> DatasetFrame::find_feature(std::string_view name) const {
  const auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - feature_names.begin());
}

DatasetFrame DatasetFrame::select(std::span<const std::string> names) const {
  std::vector<std::size_t> idx;
  std::vector<std::string> missing;
  for (const auto& n : names) {
    if (auto i = find_feature(n)) {
      idx.push_back(*i);
    } else {
      missing.push_back(n);
    }
  }
  if (!missing.empty()) {
    std::string msg = "missing feature(s):";
    for (const auto& m : missing) msg += " " + m;
    throw IngestionError(msg);
  }
  DatasetFrame out;
  out.timestamps = timestamps;
  out.feature_names.assign(names.begin(), names.end());
  out.values = Matrix(rows(), idx.size());
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c = 0; c < idx.size(); ++c) out.values(r, c) = values(r, idx[c]);
  }
  out.labels = labels;
  return out;
}

DatasetFrame DatasetFrame::slice_rows(std::size_t begin, std::size_t count) const {
  DatasetFrame out;
  out.values = values.row_slice(begin, count);
  const auto first = timestamps.begin() + static_cast<std::ptrdiff_t>(begin);
  out.timestamps.assign(first, first + static_cast<std::ptrdiff_t>(count));
  out.feature_names = feature_names;
  if (labels) {
    const auto lf = labels->begin() + static_cast<std::ptrdiff_t>(begin);
    out.labels = std::vector<int>(lf, lf + static_cast<std::ptrdiff_t>(count));
  }
  return out;
}

DatasetFrame make_frame(std::vector<std::string> feature_names, Matrix values) {
  DatasetFrame f;
  f.timestamps.resize(values.rows());
  std::iota(f.timestamps.begin(), f.timestamps.end(), std::int64_t{0});
  f.feature_names = std::move(feature_names);
  f.values = std::move(values);
  f.validate();
  return f;
}

}  // namespace htdc
