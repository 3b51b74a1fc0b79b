#pragma once

#include <array>
#include <vector>

#include "uuvlab/quat.hpp"
#include "uuvlab/trace.hpp"

namespace uuvlab {

/// Sum of wrapped absolute per-axis angle differences, rad.
double compoundError(const EulerAngles& actual, const EulerAngles& desired);

struct MetricsReport {
  std::array<double, 3> msePerAxis{};  // rad^2, [roll, pitch, yaw]
  double mseTotal = 0.0;               // mean of the axis MSEs
  std::vector<std::pair<double, double>> compoundErrorSeries;  // (t, rad)
  double compoundMean = 0.0;
  double compoundStd = 0.0;
  double depthMse = 0.0;  // m^2, informational
};

/// Metrics over one trace; per-axis errors are wrapped before squaring.
MetricsReport metricsFromTrace(const std::vector<TraceRow>& rows);

/// Pools per-axis MSE and compound stats over several runs (equal weight
/// per sample).
MetricsReport aggregateMetrics(const std::vector<MetricsReport>& reports);

}  // namespace uuvlab
