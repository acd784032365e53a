#pragma once
// CSV and SVG export.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssd::io {

inline constexpr const char* kCsvVersion = "ssd-csv v1";

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Table {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "# " << kCsvVersion << " " << kind << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << fmt(r[i]);
      out << "\n";
    }
  }
};

struct Series {
  std::string name;
  std::vector<double> y;
  std::string color;
};

/// Line chart as an SVG 1.1 polyline plot.
inline void write_svg_plot(const std::string& path, const std::string& title, const std::string& xlabel,
                           const std::vector<double>& x, const std::vector<Series>& series, bool log_y) {
  constexpr double W = 800, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
  auto tr = [log_y](double v) { return log_y ? std::log10(std::max(v, 1e-300)) : v; };
  double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
  for (double v : x) {
    xmin = std::min(xmin, v);
    xmax = std::max(xmax, v);
  }
  for (const auto& s : series)
    for (double v : s.y) {
      if (!std::isfinite(tr(v))) continue;
      ymin = std::min(ymin, tr(v));
      ymax = std::max(ymax, tr(v));
    }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  auto px = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double v) { return H - mb - (tr(v) - ymin) / (ymax - ymin) * (H - mt - mb); };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" << title
      << "</text>\n"
      << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\"" << H - mt - mb
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0, yv = ymin + (ymax - ymin) * i / 4.0;
    const double yp = H - mb - (yv - ymin) / (ymax - ymin) * (H - mt - mb);
    out << "<text x=\"" << px(xv) << "\" y=\"" << H - mb + 18 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << fmt(std::round(xv * 1000) / 1000) << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << yp + 4 << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << (log_y ? "1e" : "") << fmt(std::round(yv * 100) / 100) << "</text>\n";
  }
  out << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"13\">" << xlabel << "</text>\n";
  int legend = 0;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << (s.color.empty() ? "black" : s.color) << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(tr(s.y[i]))) continue;
      out << fmt(px(x[i])) << "," << fmt(py(s.y[i])) << " ";
    }
    out << "\"/>\n";
    out << "<text x=\"" << W - mr - 8 << "\" y=\"" << mt + 16 + 16 * legend++ << "\" text-anchor=\"end\" "
        << "font-family=\"sans-serif\" font-size=\"12\" fill=\"" << (s.color.empty() ? "black" : s.color) << "\">"
        << s.name << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace ssd::io
