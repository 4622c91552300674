#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qrvc::svg {

struct Series {
  enum class Style { Points, Line };

  std::string label;
  std::string color = "black";
  Style style = Style::Points;
  std::vector<std::pair<double, double>> points;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  bool log_x = false;
  std::vector<Series> series;
};

// Sample f on [x_min, x_max] (geometrically when log_x) as a Line series.
template <typename F>
Series curve(const Plot& plot, std::string label, std::string color, F&& f, int samples = 200);

/// SVG 1.1 document with axes, ticks, a legend, and every series.
std::string render(const Plot& plot);

std::string escape(const std::string& text);

}  // namespace qrvc::svg

#include <cmath>

template <typename F>
qrvc::svg::Series qrvc::svg::curve(const Plot& plot, std::string label, std::string color, F&& f, int samples) {
  Series s{std::move(label), std::move(color), Series::Style::Line, {}};
  for (int i = 0; i <= samples; ++i) {
    const double u = static_cast<double>(i) / samples;
    const double x = plot.log_x ? plot.x_min * std::pow(plot.x_max / plot.x_min, u)
                                : plot.x_min + u * (plot.x_max - plot.x_min);
    s.points.emplace_back(x, f(x));
  }
  return s;
}
