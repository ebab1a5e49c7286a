#include "htdc/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "htdc/detect.hpp"
#include "htdc/errors.hpp"
#include "htdc/percentile.hpp"
#include "htdc/svg.hpp"

namespace htdc {

std::size_t LatentTrace::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw ConfigError("latent trace has no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> LatentTrace::series(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out(values.rows());
  for (std::size_t r = 0; r < values.rows(); ++r) out[r] = values(r, c);
  return out;
}

LatentTrace latent_trace(const HTdcAutoencoder& model, const DatasetFrame& frame, double delta_t) {
  if (!(delta_t > 0.0)) throw ConfigError("latent_trace: delta_t must be > 0");
  const auto& p = model.partition();
  const Matrix latent = encode_raw(model, frame.values);
  const std::size_t rows = frame.rows();

  LatentTrace tr;
  tr.timestamps = frame.timestamps;
  tr.partition = p;
  tr.labels = frame.labels;
  for (std::size_t i = 0; i < p.n_pairs; ++i) tr.columns.push_back("z" + std::to_string(i + 1));
  for (std::size_t i = 0; i < p.n_pairs; ++i) tr.columns.push_back("zdot" + std::to_string(i + 1));
  for (std::size_t i = 0; i < p.n_stat; ++i) tr.columns.push_back("s" + std::to_string(i + 1));
  for (std::size_t i = 0; i < p.n_pairs; ++i) tr.columns.push_back("cd_z" + std::to_string(i + 1));

  const std::size_t width = p.width();
  tr.values = Matrix(rows, width + p.n_pairs, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < width; ++c) tr.values(r, c) = latent(r, c);
  }
  if (rows >= 3 && p.n_pairs > 0) {
    const Matrix z = latent.col_slice(p.static_begin(), p.n_pairs);
    const Matrix cd = central_difference(z.row_slice(0, rows - 2), z.row_slice(2, rows - 2), delta_t);
    for (std::size_t r = 0; r < cd.rows(); ++r) {
      for (std::size_t i = 0; i < p.n_pairs; ++i) tr.values(r + 1, width + i) = cd(r, i);
    }
  }
  return tr;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw DimensionError("pearson: length mismatch");
  const auto n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

std::vector<FeatureOverlay> feature_overlays(const LatentTrace& trace, const DatasetFrame& frame) {
  if (frame.rows() != trace.values.rows()) throw DimensionError("overlay: row count mismatch");
  std::vector<FeatureOverlay> out;
  const std::size_t n_nodes = trace.partition.width();
  for (std::size_t j = 0; j < n_nodes; ++j) {
    const auto node = trace.series(trace.columns[j]);
    FeatureOverlay best{trace.columns[j], "", 0.0, 0.0, 0.0};
    std::size_t best_col = 0;
    for (std::size_t c = 0; c < frame.feature_count(); ++c) {
      std::vector<double> feat(frame.rows());
      for (std::size_t r = 0; r < frame.rows(); ++r) feat[r] = frame.values(r, c);
      const double rho = pearson(node, feat);
      if (best.feature.empty() || std::abs(rho) > std::abs(best.correlation)) {
        best.feature = frame.feature_names[c];
        best.correlation = rho;
        best_col = c;
      }
    }
    // least-squares fit node ~ scale * feature + offset
    const auto n = static_cast<double>(frame.rows());
    double mf = 0.0, mn = 0.0;
    for (std::size_t r = 0; r < frame.rows(); ++r) {
      mf += frame.values(r, best_col);
      mn += node[r];
    }
    mf /= n;
    mn /= n;
    double sfn = 0.0, sff = 0.0;
    for (std::size_t r = 0; r < frame.rows(); ++r) {
      const double df = frame.values(r, best_col) - mf;
      sfn += df * (node[r] - mn);
      sff += df * df;
    }
    best.scale = sff > 0.0 ? sfn / sff : 0.0;
    best.offset = mn - best.scale * mf;
    out.push_back(best);
  }
  return out;
}

void write_latent_csv(const LatentTrace& trace, std::ostream& out) {
  out << "timestamp";
  for (const auto& c : trace.columns) out << ',' << c;
  if (trace.labels) out << ",ATT_FLAG";
  out << '\n';
  for (std::size_t r = 0; r < trace.values.rows(); ++r) {
    out << trace.timestamps[r];
    for (double v : trace.values.row(r)) {
      out << ',';
      if (std::isfinite(v)) out << format_number(v);
    }
    if (trace.labels) out << ',' << (*trace.labels)[r];
    out << '\n';
  }
}

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::vector<double> x_axis(const LatentTrace& trace) {
  std::vector<double> x(trace.timestamps.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(trace.timestamps[i]);
  return x;
}

// Trailing mean that skips NaN entries.
std::vector<double> smooth_nan(const std::vector<double>& v, std::size_t window) {
  if (window <= 1) return v;
  std::vector<double> out(v.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t t = 0; t < v.size(); ++t) {
    const std::size_t lo = t + 1 >= window ? t + 1 - window : 0;
    double acc = 0.0;
    std::size_t k = 0;
    for (std::size_t i = lo; i <= t; ++i) {
      if (std::isfinite(v[i])) {
        acc += v[i];
        ++k;
      }
    }
    if (k > 0) out[t] = acc / static_cast<double>(k);
  }
  return out;
}

}  // namespace

std::string latent_nodes_svg(const LatentTrace& trace, std::size_t smooth_window) {
  const auto x = x_axis(trace);
  LinePlot plot("latent nodes", "time [h]", "activation");
  if (trace.labels) plot.add_shading(x, *trace.labels);
  for (std::size_t j = 0; j < trace.partition.width(); ++j) {
    plot.add_series(trace.columns[j], x, smooth_nan(trace.series(trace.columns[j]), smooth_window),
                    kPalette[j % std::size(kPalette)]);
  }
  return plot.render(960, 420);
}

std::string pair_svg(const LatentTrace& trace, std::size_t pair, std::size_t smooth_window) {
  if (pair >= trace.partition.n_pairs) throw ConfigError("pair index out of range");
  const auto x = x_axis(trace);
  const std::string id = std::to_string(pair + 1);
  LinePlot plot("derivative node zdot" + id + " vs central difference of z" + id, "time [h]",
                "rate");
  if (trace.labels) plot.add_shading(x, *trace.labels);
  plot.add_series("cd_z" + id, x, smooth_nan(trace.series("cd_z" + id), smooth_window), "#1f77b4");
  plot.add_series("zdot" + id, x, smooth_nan(trace.series("zdot" + id), smooth_window), "#d62728");
  return plot.render();
}

std::string overlay_svg(const LatentTrace& trace, const DatasetFrame& frame,
                        const FeatureOverlay& overlay) {
  const auto x = x_axis(trace);
  const auto col = frame.find_feature(overlay.feature);
  if (!col) throw ConfigError("overlay feature '" + overlay.feature + "' not in frame");
  std::vector<double> mapped(frame.rows());
  for (std::size_t r = 0; r < frame.rows(); ++r) {
    mapped[r] = overlay.scale * frame.values(r, *col) + overlay.offset;
  }
  LinePlot plot(overlay.node + " vs " + overlay.feature + " (scaled, offset)", "time [h]",
                "activation");
  if (trace.labels) plot.add_shading(x, *trace.labels);
  plot.add_series(overlay.feature, x, mapped, "#7f7f7f");
  plot.add_series(overlay.node, x, trace.series(overlay.node), "#1f77b4");
  return plot.render();
}

}  // namespace htdc
