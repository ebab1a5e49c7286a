#include "htdc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "htdc/errors.hpp"

namespace htdc {
namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

LinePlot::LinePlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void LinePlot::add_series(std::string name, std::span<const double> x, std::span<const double> y,
                          std::string color) {
  if (x.size() != y.size()) throw DimensionError("plot series x/y lengths differ");
  series_.push_back({std::move(name), {x.begin(), x.end()}, {y.begin(), y.end()}, std::move(color)});
}

void LinePlot::add_hline(std::string name, double y, std::string color) {
  hlines_.push_back({std::move(name), y, std::move(color)});
}

void LinePlot::add_shading(std::span<const double> x, std::span<const int> mask) {
  if (x.size() != mask.size()) throw DimensionError("plot shading x/mask lengths differ");
  for (std::size_t i = 0; i < mask.size();) {
    if (mask[i] != 1) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < mask.size() && mask[j + 1] == 1) ++j;
    bands_.push_back({x[i], x[j]});
    i = j + 1;
  }
}

std::string LinePlot::render(int width, int height) const {
  const double left = 70, right = 20, top = 36, bottom = 46;
  const double pw = width - left - right;
  const double ph = height - top - bottom;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series_) {
    for (double v : s.x) {
      xmin = std::min(xmin, v);
      xmax = std::max(xmax, v);
    }
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  for (const auto& h : hlines_) {
    if (!std::isfinite(h.y)) continue;
    ymin = std::min(ymin, h.y);
    ymax = std::max(ymax, h.y);
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1;
  if (!std::isfinite(ymin)) ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto px = [&](double v) { return left + (v - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double v) { return top + (1.0 - (v - ymin) / (ymax - ymin)) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
    << "\" fill=\"white\"/>\n";
  o << "<text x=\"" << fmt(width / 2.0) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
    << escape(title_) << "</text>\n";

  for (const auto& b : bands_) {
    const double x0 = px(b.x0);
    const double x1 = std::max(px(b.x1), x0 + 1.0);
    o << "<rect class=\"label-region\" x=\"" << fmt(x0) << "\" y=\"" << fmt(top) << "\" width=\""
      << fmt(x1 - x0) << "\" height=\"" << fmt(ph) << "\" fill=\"#999999\" fill-opacity=\"0.3\"/>\n";
  }

  o << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  o << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(left + pw)
    << "\" y2=\"" << fmt(top + ph) << "\"/>\n";
  o << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(left)
    << "\" y2=\"" << fmt(top + ph) << "\"/>\n";
  o << "</g>\n";
  for (int i = 0; i <= 4; ++i) {
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    o << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(py(yv) + 4)
      << "\" text-anchor=\"end\" font-size=\"10\">" << tick(yv) << "</text>\n";
    o << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << fmt(top + ph + 16)
      << "\" text-anchor=\"middle\" font-size=\"10\">" << tick(xv) << "</text>\n";
  }
  o << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(height - 8.0)
    << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(x_label_) << "</text>\n";
  o << "<text x=\"14\" y=\"" << fmt(top + ph / 2) << "\" text-anchor=\"middle\" font-size=\"12\" "
    << "transform=\"rotate(-90 14 " << fmt(top + ph / 2) << ")\">" << escape(y_label_)
    << "</text>\n";

  for (const auto& s : series_) {
    o << "<polyline class=\"series\" data-name=\"" << escape(s.name) << "\" fill=\"none\" stroke=\""
      << s.color << "\" stroke-width=\"1\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      if (!first) o << ' ';
      o << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i]));
      first = false;
    }
    o << "\"/>\n";
  }
  for (const auto& h : hlines_) {
    o << "<line class=\"threshold\" data-name=\"" << escape(h.name) << "\" x1=\"" << fmt(left)
      << "\" y1=\"" << fmt(py(h.y)) << "\" x2=\"" << fmt(left + pw) << "\" y2=\"" << fmt(py(h.y))
      << "\" stroke=\"" << h.color << "\" stroke-dasharray=\"6,4\" stroke-width=\"1.5\"/>\n";
  }

  double ly = top + 12;
  for (const auto& s : series_) {
    o << "<text x=\"" << fmt(left + pw - 4) << "\" y=\"" << fmt(ly)
      << "\" text-anchor=\"end\" font-size=\"10\" fill=\"" << s.color << "\">" << escape(s.name)
      << "</text>\n";
    ly += 12;
  }
  for (const auto& h : hlines_) {
    o << "<text x=\"" << fmt(left + pw - 4) << "\" y=\"" << fmt(ly)
      << "\" text-anchor=\"end\" font-size=\"10\" fill=\"" << h.color << "\">" << escape(h.name)
      << "</text>\n";
    ly += 12;
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace htdc
