#include "qrvc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qrvc::svg {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 64;
constexpr double kRight = 20;
constexpr double kTop = 36;
constexpr double kBottom = 52;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0)) return {lo};
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = m * mag;
    if (span / step <= 6.0) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * span; t += step) ticks.push_back(t);
  return ticks;
}

std::vector<double> log_ticks(double lo, double hi) {
  std::vector<double> ticks;
  for (double t = std::pow(10.0, std::ceil(std::log10(lo) - 1e-9)); t <= hi * (1 + 1e-9); t *= 10) ticks.push_back(t);
  return ticks;
}

}  // namespace

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render(const Plot& plot) {
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const bool log_x = plot.log_x && plot.x_min > 0 && plot.x_max > plot.x_min;
  auto sx = [&](double x) {
    const double u = log_x ? std::log(x / plot.x_min) / std::log(plot.x_max / plot.x_min)
                           : (x - plot.x_min) / (plot.x_max - plot.x_min);
    return kLeft + u * pw;
  };
  auto sy = [&](double y) { return kTop + (1.0 - (y - plot.y_min) / (plot.y_max - plot.y_min)) * ph; };
  auto inside = [&](double x, double y) {
    return x >= plot.x_min && x <= plot.x_max && y >= plot.y_min && y <= plot.y_max && (!log_x || x > 0);
  };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
      << escape(plot.title) << "</text>\n";

  // Axes and ticks.
  out << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph << "\"/>\n";
  const auto xt = log_x ? log_ticks(plot.x_min, plot.x_max) : linear_ticks(plot.x_min, plot.x_max);
  const auto yt = linear_ticks(plot.y_min, plot.y_max);
  for (double t : xt) out << "<line x1=\"" << num(sx(t)) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(sx(t)) << "\" y2=\"" << num(kTop + ph + 5) << "\"/>\n";
  for (double t : yt) out << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(sy(t)) << "\" x2=\"" << num(kLeft) << "\" y2=\"" << num(sy(t)) << "\"/>\n";
  out << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (double t : xt) out << "<text x=\"" << num(sx(t)) << "\" y=\"" << num(kTop + ph + 18) << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  for (double t : yt) out << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(sy(t) + 4) << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
  out << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 12) << "\" text-anchor=\"middle\">" << escape(plot.x_label) << "</text>\n"
      << "<text transform=\"translate(16," << num(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">" << escape(plot.y_label) << "</text>\n"
      << "</g>\n";

  for (const auto& s : plot.series) {
    if (s.style == Series::Style::Line) {
      out << "<polyline fill=\"none\" stroke=\"" << escape(s.color) << "\" stroke-width=\"1.5\" points=\"";
      bool first = true;
      for (const auto& [x, y] : s.points) {
        if (!inside(x, y)) continue;
        out << (first ? "" : " ") << num(sx(x)) << ',' << num(sy(y));
        first = false;
      }
      out << "\"/>\n";
    } else {
      out << "<g fill=\"" << escape(s.color) << "\">\n";
      for (const auto& [x, y] : s.points) {
        if (inside(x, y)) out << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\"2.5\"/>\n";
      }
      out << "</g>\n";
    }
  }

  // Legend.
  double ly = kTop + 14;
  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (const auto& s : plot.series) {
    if (s.label.empty()) continue;
    out << "<rect x=\"" << num(kLeft + 10) << "\" y=\"" << num(ly - 8) << "\" width=\"10\" height=\"10\" fill=\"" << escape(s.color) << "\"/>"
        << "<text x=\"" << num(kLeft + 26) << "\" y=\"" << num(ly + 1) << "\">" << escape(s.label) << "</text>\n";
    ly += 16;
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace qrvc::svg
