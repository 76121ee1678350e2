#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "microrev/io.hpp"
#include "microrev/sweeps.hpp"

// Tiny standalone SVG renderer for the sweep outputs. Data files are the
// contract; these pictures are a convenience.

namespace microrev {

namespace svg_detail {

// Blue (log Gamma < 0) to white (Gamma = 1) to red (log Gamma > 0).
inline std::string diverging_color(double gamma, double half_range) {
  if (!std::isfinite(gamma) || gamma <= 0.0) return "rgb(255,0,0)";
  const double t = std::clamp(std::log(gamma) / half_range, -1.0, 1.0);
  const int other = static_cast<int>(std::lround(255.0 * (1.0 - std::abs(t))));
  if (t >= 0.0) return "rgb(255," + std::to_string(other) + "," + std::to_string(other) + ")";
  return "rgb(" + std::to_string(other) + "," + std::to_string(other) + ",255)";
}

}  // namespace svg_detail

inline void write_map_svg(std::ostream& os, const std::vector<MapCell>& table,
                          std::size_t n_i, std::size_t n_f) {
  const int size = 600;
  const double cw = static_cast<double>(size) / static_cast<double>(n_f);
  const double ch = static_cast<double>(size) / static_cast<double>(n_i);
  double half_range = 0.1;
  for (const MapCell& cell : table) {
    if (std::isfinite(cell.gamma) && cell.gamma > 0.0) {
      half_range = std::max(half_range, std::abs(std::log(cell.gamma)));
    }
  }
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\""
     << size << "\">\n";
  for (std::size_t i = 0; i < n_i; ++i) {
    for (std::size_t j = 0; j < n_f; ++j) {
      const MapCell& cell = table[i * n_f + j];
      // c_i on the y axis growing upward, c_f on x.
      const double x = static_cast<double>(j) * cw;
      const double y = static_cast<double>(n_i - 1 - i) * ch;
      os << "<rect x=\"" << format_double(x) << "\" y=\"" << format_double(y)
         << "\" width=\"" << format_double(cw + 0.5) << "\" height=\""
         << format_double(ch + 0.5) << "\" fill=\""
         << svg_detail::diverging_color(cell.gamma, half_range) << "\"/>\n";
    }
  }
  os << "</svg>\n";
}

inline void write_curve_svg(std::ostream& os, const std::vector<double>& xs,
                            const std::vector<double>& ys) {
  const int w = 600, h = 400, margin = 40;
  double x_lo = xs.front(), x_hi = xs.back();
  double y_lo = ys.front(), y_hi = ys.front();
  for (double y : ys) {
    if (!std::isfinite(y)) continue;
    y_lo = std::min(y_lo, y);
    y_hi = std::max(y_hi, y);
  }
  if (y_hi == y_lo) y_hi = y_lo + 1.0;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\">\n<polyline fill=\"none\" stroke=\"black\" points=\"";
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!std::isfinite(ys[k])) continue;
    const double px = margin + (xs[k] - x_lo) / (x_hi - x_lo) * (w - 2 * margin);
    const double py = h - margin - (ys[k] - y_lo) / (y_hi - y_lo) * (h - 2 * margin);
    os << format_double(px) << "," << format_double(py) << " ";
  }
  os << "\"/>\n</svg>\n";
}

}  // namespace microrev
