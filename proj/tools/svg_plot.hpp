#pragma once

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

// Minimal static SVG plots: line charts and square heatmaps. No external
// dependencies; output is a standalone vector-graphics file.

namespace svgplot {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

inline const char* palette(size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b"};
  return colors[i % 6];
}

inline void write_line_plot(const std::string& path, const std::string& title,
                            const std::vector<Series>& series, bool log_y = false) {
  const double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto ty = [&](double v) { return log_y ? std::log10(std::max(v, 1e-300)) : v; };
  for (const auto& s : series)
    for (size_t k = 0; k < s.x.size(); ++k) {
      xmin = std::min(xmin, s.x[k]);
      xmax = std::max(xmax, s.x[k]);
      ymin = std::min(ymin, ty(s.y[k]));
      ymax = std::max(ymax, ty(s.y[k]));
    }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto px = [&](double v) { return L + (v - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double v) { return H - B - (ty(v) - ymin) / (ymax - ymin) * (H - T - B); };

  std::ofstream out(path);
  out << std::setprecision(8);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
      << "' viewBox='0 0 " << W << " " << H << "'>\n";
  out << "<rect width='" << W << "' height='" << H << "' fill='white'/>\n";
  out << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
      << "</text>\n";
  // axes
  out << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - R << "' y2='" << H - B
      << "' stroke='black'/>\n";
  out << "<line x1='" << L << "' y1='" << T << "' x2='" << L << "' y2='" << H - B
      << "' stroke='black'/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = xmin + k * (xmax - xmin) / 4.0;
    const double yraw = ymin + k * (ymax - ymin) / 4.0;
    std::ostringstream xs, ys;
    xs << std::setprecision(4) << xv;
    ys << std::setprecision(4) << (log_y ? std::pow(10.0, yraw) : yraw);
    out << "<text x='" << px(xv) << "' y='" << H - B + 18
        << "' text-anchor='middle' font-size='11'>" << xs.str() << "</text>\n";
    out << "<text x='" << L - 8 << "' y='" << H - B - k * (H - T - B) / 4.0 + 4
        << "' text-anchor='end' font-size='11'>" << ys.str() << "</text>\n";
  }
  for (size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    out << "<polyline fill='none' stroke='" << palette(si) << "' stroke-width='1.5' points='";
    for (size_t k = 0; k < s.x.size(); ++k) out << px(s.x[k]) << "," << py(s.y[k]) << " ";
    out << "'/>\n";
    out << "<text x='" << W - R - 10 << "' y='" << T + 16 * (si + 1)
        << "' text-anchor='end' font-size='12' fill='" << palette(si) << "'>" << s.label
        << "</text>\n";
  }
  out << "</svg>\n";
}

// values row-major, n x n, mapped to a blue-red diverging fill
inline void write_heatmap(const std::string& path, const std::string& title, int n,
                          const std::vector<double>& values) {
  const double W = 520, H = 560, L = 40, T = 40;
  const double cell = (W - 2 * L) / n;
  double vmin = 1e300, vmax = -1e300;
  for (double v : values) {
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  if (vmax <= vmin) vmax = vmin + 1.0;
  std::ofstream out(path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  out << "<rect width='" << W << "' height='" << H << "' fill='white'/>\n";
  out << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
      << "</text>\n";
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const double t = (values[r * n + c] - vmin) / (vmax - vmin);
      const int red = static_cast<int>(255 * t);
      const int blue = static_cast<int>(255 * (1.0 - t));
      out << "<rect x='" << L + c * cell << "' y='" << T + (n - 1 - r) * cell << "' width='"
          << cell + 0.5 << "' height='" << cell + 0.5 << "' fill='rgb(" << red << ",64," << blue
          << ")'/>\n";
    }
  out << "<text x='" << L << "' y='" << H - 12 << "' font-size='12'>min " << vmin << "  max "
      << vmax << "</text>\n";
  out << "</svg>\n";
}

}  // namespace svgplot
