#pragma once

#include <string>
#include <utility>
#include <vector>

namespace uuvlab {

struct SvgSeries {
  std::string label;
  std::string color = "#1f77b4";
  std::vector<std::pair<double, double>> points;  // (x, y)
};

/// Minimal line plot (axes, ticks, legend) written as a standalone SVG.
void writeSvgLinePlot(const std::string& path, const std::string& title,
                      const std::string& xLabel, const std::string& yLabel,
                      const std::vector<SvgSeries>& series, int width = 900,
                      int height = 420);

}  // namespace uuvlab
