#include "htdc/detect.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "htdc/csv.hpp"
#include "htdc/errors.hpp"
#include "htdc/percentile.hpp"
#include "htdc/svg.hpp"

namespace htdc {

void DetectionConfig::validate() const {
  if (window == 0) throw ConfigError("detection window must be >= 1");
  if (!(percentile > 0.0 && percentile < 100.0)) {
    throw ConfigError("detection percentile must lie in (0, 100)");
  }
  if (threshold_override && !std::isfinite(*threshold_override)) {
    throw ConfigError("threshold override must be finite");
  }
}

std::size_t DetectionResult::flag_count() const noexcept {
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
}

std::vector<double> reconstruction_error(const HTdcAutoencoder& model, const DatasetFrame& frame) {
  if (frame.feature_count() != model.feature_count()) {
    throw DimensionError("frame has " + std::to_string(frame.feature_count()) +
                         " features, model expects " + std::to_string(model.feature_count()));
  }
  if (frame.rows() == 0) return {};
  const Matrix recon = reconstruct(model, frame.values);
  std::vector<double> scores(frame.rows());
  const auto f = static_cast<double>(frame.feature_count());
  for (std::size_t r = 0; r < frame.rows(); ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < frame.feature_count(); ++c) {
      const double d = recon(r, c) - frame.values(r, c);
      acc += d * d;
    }
    scores[r] = acc / f;
  }
  return scores;
}

std::vector<double> smooth(std::span<const double> scores, std::size_t window, SmoothingMode mode) {
  if (window == 0) throw ConfigError("smoothing window must be >= 1");
  const std::size_t n = scores.size();
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t lo = 0;
    std::size_t hi = t;
    if (mode == SmoothingMode::Trailing) {
      lo = t + 1 >= window ? t + 1 - window : 0;
    } else {
      const std::size_t half = window / 2;
      lo = t >= half ? t - half : 0;
      hi = std::min(n - 1, t + (window - 1 - half));
    }
    double acc = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) acc += scores[i];
    out[t] = acc / static_cast<double>(hi - lo + 1);
  }
  return out;
}

double fit_threshold_from_scores(std::span<const double> train_raw_scores,
                                 const DetectionConfig& config) {
  config.validate();
  if (config.threshold_override) return *config.threshold_override;
  if (train_raw_scores.empty()) throw ConfigError("fit_threshold: no training scores");
  if (config.basis == ThresholdBasis::Raw) return percentile(train_raw_scores, config.percentile);
  const auto smoothed = smooth(train_raw_scores, config.window, config.smoothing);
  return percentile(smoothed, config.percentile);
}

double fit_threshold(const HTdcAutoencoder& model, const DatasetFrame& train_frame,
                     const DetectionConfig& config) {
  config.validate();
  if (config.threshold_override) return *config.threshold_override;
  if (train_frame.rows() == 0) throw ConfigError("fit_threshold: empty training frame");
  return fit_threshold_from_scores(reconstruction_error(model, train_frame), config);
}

DetectionResult detect_scores(std::span<const double> raw_scores,
                              std::span<const std::int64_t> timestamps, double threshold,
                              const DetectionConfig& config) {
  config.validate();
  if (!std::isfinite(threshold)) throw ConfigError("detection threshold must be finite");
  if (timestamps.size() != raw_scores.size()) {
    throw DimensionError("detect: timestamps and scores differ in length");
  }
  DetectionResult r;
  r.timestamps.assign(timestamps.begin(), timestamps.end());
  r.raw_scores.assign(raw_scores.begin(), raw_scores.end());
  r.smoothed_scores = smooth(raw_scores, config.window, config.smoothing);
  r.threshold = threshold;
  r.flags.resize(r.size());
  for (std::size_t t = 0; t < r.size(); ++t) r.flags[t] = r.smoothed_scores[t] > threshold;
  return r;
}

DetectionResult detect(const HTdcAutoencoder& model, const DatasetFrame& frame, double threshold,
                       const DetectionConfig& config) {
  const auto raw = reconstruction_error(model, frame);
  return detect_scores(raw, frame.timestamps, threshold, config);
}

void write_detection_csv(const DetectionResult& result, std::ostream& out) {
  out << "timestamp,raw,smoothed,flag\n";
  for (std::size_t t = 0; t < result.size(); ++t) {
    out << result.timestamps[t] << ',' << format_number(result.raw_scores[t]) << ','
        << format_number(result.smoothed_scores[t]) << ',' << (result.flags[t] ? 1 : 0) << '\n';
  }
}

void write_detection_csv(const DetectionResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  write_detection_csv(result, out);
}

DetectionResult read_detection_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw IngestionError(path.string() + ": empty file");
  const auto header = split_csv_line(line);
  const std::vector<std::string> expected{"timestamp", "raw", "smoothed", "flag"};
  if (header != expected) {
    throw IngestionError(path.string() + ": expected header timestamp,raw,smoothed,flag");
  }
  DetectionResult r;
  r.threshold = std::numeric_limits<double>::quiet_NaN();
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    auto bad = [&](const std::string& what) {
      return IngestionError(path.string() + ":" + std::to_string(line_no) + ": " + what);
    };
    if (cells.size() != 4) throw bad("expected 4 cells");
    std::int64_t ts = 0;
    double raw = 0.0, sm = 0.0;
    int flag = 0;
    auto parse = [&](const std::string& s, auto& v) {
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw bad("bad cell '" + s + "'");
    };
    parse(cells[0], ts);
    parse(cells[1], raw);
    parse(cells[2], sm);
    parse(cells[3], flag);
    if (flag != 0 && flag != 1) throw bad("flag must be 0 or 1");
    r.timestamps.push_back(ts);
    r.raw_scores.push_back(raw);
    r.smoothed_scores.push_back(sm);
    r.flags.push_back(flag == 1);
  }
  return r;
}

std::string detection_svg(const DetectionResult& result, const std::vector<int>* labels,
                          const std::string& title) {
  std::vector<double> x(result.size());
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = static_cast<double>(result.timestamps[t]);
  LinePlot plot(title, "time [h]", "reconstruction error");
  if (labels) plot.add_shading(x, *labels);
  plot.add_series("raw", x, result.raw_scores, "#b0b0b0");
  plot.add_series("smoothed", x, result.smoothed_scores, "#1f77b4");
  plot.add_hline("threshold", result.threshold, "#d62728");
  return plot.render();
}

}  // namespace htdc
