#pragma once

#include <span>
#include <string>
#include <vector>

namespace htdc {

/// Minimal auto-scaled line chart rendered to a standalone SVG document.
class LinePlot {
 public:
  LinePlot(std::string title, std::string x_label, std::string y_label);

  void add_series(std::string name, std::span<const double> x, std::span<const double> y,
                  std::string color);
  void add_hline(std::string name, double y, std::string color);
  /// Grey bands over the x ranges where mask == 1.
  void add_shading(std::span<const double> x, std::span<const int> mask);

  std::string render(int width = 960, int height = 360) const;

 private:
  struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::string color;
  };
  struct HLine {
    std::string name;
    double y;
    std::string color;
  };
  struct Band {
    double x0;
    double x1;
  };

  std::string title_;
  std::string x_label_;
  std::string y_label_;
  std::vector<Series> series_;
  std::vector<HLine> hlines_;
  std::vector<Band> bands_;
};

}  // namespace htdc
