#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "pdc/csv.hpp"
#include "pdc/errors.hpp"

namespace pdc {

struct SvgSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
};

// Minimal single-file line plot: axes, tick labels, one polyline per series.
// With log_y, nonpositive samples are clamped eight decades below the peak.
inline void write_svg_line_plot(const std::string& path,
                                const std::string& title,
                                const std::string& x_label,
                                const std::string& y_label,
                                const std::vector<SvgSeries>& series,
                                bool log_y) {
  const double width = 840.0, height = 520.0;
  const double ml = 80.0, mr = 25.0, mt = 45.0, mb = 60.0;

  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool first = true;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (first) {
        x_min = x_max = s.x[i];
        y_min = y_max = s.y[i];
        first = false;
      } else {
        x_min = std::min(x_min, s.x[i]);
        x_max = std::max(x_max, s.x[i]);
        y_min = std::min(y_min, s.y[i]);
        y_max = std::max(y_max, s.y[i]);
      }
    }
  }
  if (first) throw config_error("svg plot: no finite samples");
  if (x_max <= x_min) x_max = x_min + 1.0;

  auto to_log = [&](double v) {
    const double floor_v = y_max > 0.0 ? y_max * 1e-8 : 1e-300;
    return std::log10(std::max(v, floor_v));
  };
  if (log_y) {
    if (!(y_max > 0.0)) throw config_error("svg log plot: no positive samples");
    y_min = to_log(y_min);
    y_max = to_log(y_max);
  }
  if (y_max <= y_min) y_max = y_min + 1.0;

  const double px = (width - ml - mr) / (x_max - x_min);
  const double py = (height - mt - mb) / (y_max - y_min);
  auto sx = [&](double v) { return ml + (v - x_min) * px; };
  auto sy = [&](double v) { return height - mb - (v - y_min) * py; };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open output file: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"25\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

  out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
      << width - mr << "\" y2=\"" << height - mb
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";

  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = x_min + (x_max - x_min) * i / ticks;
    const double fy = y_min + (y_max - y_min) * i / ticks;
    out << "<line x1=\"" << sx(fx) << "\" y1=\"" << height - mb << "\" x2=\""
        << sx(fx) << "\" y2=\"" << height - mb + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << sx(fx) << "\" y=\"" << height - mb + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << format_sig9(fx).substr(0, 9) << "</text>\n";
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << sy(fy) << "\" x2=\"" << ml
        << "\" y2=\"" << sy(fy) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << sy(fy) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << (log_y ? "1e" + format_sig9(fy).substr(0, 6)
                  : format_sig9(fy).substr(0, 9))
        << "</text>\n";
  }
  out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"13\">" << x_label << "</text>\n";
  out << "<text x=\"20\" y=\"" << (mt + height - mb) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 20 " << (mt + height - mb) / 2 << ")\">"
      << y_label << "</text>\n";

  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      const double yv = log_y ? to_log(s.y[i]) : s.y[i];
      out << sx(s.x[i]) << "," << sy(yv) << " ";
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
  if (!out) throw config_error("write failure on SVG output");
}

}  // namespace pdc
