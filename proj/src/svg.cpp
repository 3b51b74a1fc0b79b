#include "uuvlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace uuvlab {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escapeXml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
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

/// Rounds the raw span outward to a tidy tick interval.
double niceStep(double span) {
  if (span <= 0.0) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double nice = 10.0;
  if (frac <= 1.0) nice = 1.0;
  else if (frac <= 2.0) nice = 2.0;
  else if (frac <= 5.0) nice = 5.0;
  return nice * mag;
}

}  // namespace

void writeSvgLinePlot(const std::string& path, const std::string& title,
                      const std::string& xLabel, const std::string& yLabel,
                      const std::vector<SvgSeries>& series, int width,
                      int height) {
  double xMin = std::numeric_limits<double>::infinity(), xMax = -xMin;
  double yMin = xMin, yMax = -xMin;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      xMin = std::min(xMin, x);
      xMax = std::max(xMax, x);
      yMin = std::min(yMin, y);
      yMax = std::max(yMax, y);
    }
  }
  if (!(xMin <= xMax)) { xMin = 0.0; xMax = 1.0; }
  if (!(yMin <= yMax)) { yMin = 0.0; yMax = 1.0; }
  if (xMax == xMin) xMax = xMin + 1.0;
  if (yMax == yMin) { yMin -= 0.5; yMax += 0.5; }

  const double ml = 64, mr = 16, mt = 34, mb = 44;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto px = [&](double x) { return ml + (x - xMin) / (xMax - xMin) * pw; };
  auto py = [&](double y) { return mt + (yMax - y) / (yMax - yMin) * ph; };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write plot: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">" << escapeXml(title)
      << "</text>\n";

  const double xStep = niceStep(xMax - xMin);
  const double yStep = niceStep(yMax - yMin);
  out << "<g font-family=\"sans-serif\" font-size=\"10\" fill=\"#444\">\n";
  for (double x = std::ceil(xMin / xStep) * xStep; x <= xMax + 1e-9 * xStep;
       x += xStep) {
    out << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << fmt(mt) << "\" x2=\""
        << fmt(px(x)) << "\" y2=\"" << fmt(mt + ph)
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << fmt(px(x)) << "\" y=\"" << fmt(mt + ph + 14)
        << "\" text-anchor=\"middle\">" << fmt(x) << "</text>\n";
  }
  for (double y = std::ceil(yMin / yStep) * yStep; y <= yMax + 1e-9 * yStep;
       y += yStep) {
    out << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(py(y)) << "\" x2=\""
        << fmt(ml + pw) << "\" y2=\"" << fmt(py(y))
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << fmt(ml - 6) << "\" y=\"" << fmt(py(y) + 3)
        << "\" text-anchor=\"end\">" << fmt(y) << "</text>\n";
  }
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 8
      << "\" text-anchor=\"middle\" font-size=\"12\">" << escapeXml(xLabel)
      << "</text>\n";
  out << "<text x=\"14\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
      << height / 2 << ")\">" << escapeXml(yLabel) << "</text>\n";
  out << "</g>\n";
  out << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\""
      << fmt(pw) << "\" height=\"" << fmt(ph)
      << "\" fill=\"none\" stroke=\"#888\"/>\n";

  int legendRow = 0;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.4\" points=\"";
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      out << fmt(px(x)) << "," << fmt(py(y)) << " ";
    }
    out << "\"/>\n";
    if (!s.label.empty()) {
      const double ly = mt + 14 + 14 * legendRow++;
      out << "<line x1=\"" << fmt(ml + pw - 120) << "\" y1=\"" << fmt(ly)
          << "\" x2=\"" << fmt(ml + pw - 100) << "\" y2=\"" << fmt(ly)
          << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
      out << "<text x=\"" << fmt(ml + pw - 94) << "\" y=\"" << fmt(ly + 3)
          << "\" font-family=\"sans-serif\" font-size=\"10\">"
          << escapeXml(s.label) << "</text>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace uuvlab
