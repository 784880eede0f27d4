#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fne/harness/trace_io.hpp"

namespace fne::harness {

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<double> x, y;
};

/// Static SVG line chart with a log10 y axis. Non-positive values are dropped.
inline std::string render_log_plot(const std::string& title, const std::string& xlabel,
                                   const std::vector<PlotSeries>& series) {
  const double W = 720, H = 440, ml = 70, mr = 150, mt = 40, mb = 50;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.y[i] > 0.0) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, std::log10(s.y[i]));
      ymax = std::max(ymax, std::log10(s.y[i]));
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = -1, ymax = 0;
  if (xmax == xmin) xmax = xmin + 1;
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  if (ymax == ymin) ymax = ymin + 1;
  const double pw = W - ml - mr, ph = H - mt - mb;
  auto px = [&](double v) { return ml + pw * (v - xmin) / (xmax - xmin); };
  auto py = [&](double lv) { return mt + ph * (1.0 - (lv - ymin) / (ymax - ymin)); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << ml << "\" y=\"24\" font-size=\"15\">" << title << "</text>\n";
  for (double e = ymin; e <= ymax + 1e-9; e += 1.0) {
    o << "<line x1=\"" << ml << "\" x2=\"" << ml + pw << "\" y1=\"" << py(e) << "\" y2=\"" << py(e)
      << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << ml - 8 << "\" y=\"" << py(e) + 4 << "\" text-anchor=\"end\">1e" << static_cast<int>(e)
      << "</text>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    const double v = xmin + (xmax - xmin) * k / 4.0;
    o << "<text x=\"" << px(v) << "\" y=\"" << mt + ph + 18 << "\" text-anchor=\"middle\">" << fmt_double(std::round(v * 100) / 100)
      << "</text>\n";
  }
  o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  for (size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.x.size(); ++i)
      if (s.y[i] > 0.0 && std::isfinite(s.y[i])) o << px(s.x[i]) << ',' << py(std::log10(s.y[i])) << ' ';
    o << "\"/>\n";
    const double ly = mt + 16 + 18 * static_cast<double>(k);
    o << "<line x1=\"" << ml + pw + 12 << "\" x2=\"" << ml + pw + 36 << "\" y1=\"" << ly << "\" y2=\"" << ly
      << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << ml + pw + 42 << "\" y=\"" << ly + 4 << "\">" << s.label << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

/// Writes measures.svg (S and W per player) and step.svg into out_dir. Returns the file paths.
inline std::vector<std::string> plot_trace(const std::vector<TraceRow>& rows, const std::string& out_dir) {
  PlotSeries sx{"S_x", "#1f77b4", {}, {}}, sy{"S_y", "#d62728", {}, {}}, wx{"W_x", "#6baed6", {}, {}},
      wy{"W_y", "#fc9272", {}, {}}, st{"|x_t - x_t-1|", "#2ca02c", {}, {}};
  for (const auto& r : rows) {
    const double t = static_cast<double>(r.outer_t);
    for (auto* s : {&sx, &sy, &wx, &wy, &st}) s->x.push_back(t);
    sx.y.push_back(r.S_x);
    sy.y.push_back(r.S_y);
    wx.y.push_back(r.W_x);
    wy.y.push_back(r.W_y);
    st.y.push_back(r.step_norm);
  }
  std::vector<std::string> files{out_dir + "/measures.svg", out_dir + "/step.svg"};
  std::ofstream(files[0]) << render_log_plot("Stationarity measures", "outer iteration", {sx, sy, wx, wy});
  std::ofstream(files[1]) << render_log_plot("Primal step length", "outer iteration", {st});
  return files;
}

}  // namespace fne::harness
