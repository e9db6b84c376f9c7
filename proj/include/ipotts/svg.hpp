#pragma once

#include "ipotts/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace ipotts {

/// Minimal SVG line/stem plots for reconstructions and PSNR-vs-gamma curves.
struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f6fb2";
  bool stems = false;
};

inline std::string svg_plot(const std::vector<SvgSeries>& series, const std::string& title,
                            bool log_x = false) {
  const double w = 720, h = 360, ml = 54, mr = 16, mt = 30, mb = 34;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double xv = log_x ? std::log10(s.x[i]) : s.x[i];
      if (!std::isfinite(xv) || !std::isfinite(s.y[i])) continue;
      if (first) {
        xmin = xmax = xv;
        ymin = ymax = s.y[i];
        first = false;
      }
      xmin = std::min(xmin, xv);
      xmax = std::max(xmax, xv);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;
  auto px = [&](double v) { return ml + (w - ml - mr) * ((log_x ? std::log10(v) : v) - xmin) / (xmax - xmin); };
  auto py = [&](double v) { return h - mb - (h - mt - mb) * (v - ymin) / (ymax - ymin); };

  char buf[256];
  std::string svg;
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                "viewBox=\"0 0 %g %g\">\n",
                w, h, w, h);
  svg += buf;
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%g\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">%s</text>\n",
                ml, title.c_str());
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" "
                "stroke=\"#999\"/>\n",
                ml, mt, w - ml - mr, h - mt - mb);
  svg += buf;
  // axis range labels
  std::snprintf(buf, sizeof(buf),
                "<text x=\"4\" y=\"%g\" font-family=\"sans-serif\" font-size=\"10\">%.4g</text>\n",
                py(ymin) , ymin);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"4\" y=\"%g\" font-family=\"sans-serif\" font-size=\"10\">%.4g</text>\n",
                py(ymax) + 8, ymax);
  svg += buf;

  double legend_y = mt + 14;
  for (const auto& s : series) {
    if (s.stems) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"%s\"/>\n",
                      px(s.x[i]), py(0.0 < ymin ? ymin : (0.0 > ymax ? ymax : 0.0)), px(s.x[i]),
                      py(s.y[i]), s.color.c_str());
        svg += buf;
        std::snprintf(buf, sizeof(buf), "<circle cx=\"%g\" cy=\"%g\" r=\"2\" fill=\"%s\"/>\n",
                      px(s.x[i]), py(s.y[i]), s.color.c_str());
        svg += buf;
      }
    } else {
      std::string pts;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%g,%g ", px(s.x[i]), py(s.y[i]));
        pts += buf;
      }
      svg += "<polyline fill=\"none\" stroke=\"" + s.color + "\" points=\"" + pts + "\"/>\n";
    }
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\" "
                  "fill=\"%s\">%s</text>\n",
                  w - mr - 150.0, legend_y, s.color.c_str(), s.label.c_str());
    svg += buf;
    legend_y += 14;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace ipotts
