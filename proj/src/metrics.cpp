#include "uuvlab/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace uuvlab {

double compoundError(const EulerAngles& actual, const EulerAngles& desired) {
  return std::abs(wrapAngle(actual.roll - desired.roll)) +
         std::abs(wrapAngle(actual.pitch - desired.pitch)) +
         std::abs(wrapAngle(actual.yaw - desired.yaw));
}

MetricsReport metricsFromTrace(const std::vector<TraceRow>& rows) {
  MetricsReport rep;
  if (rows.empty()) throw std::invalid_argument("metricsFromTrace: empty trace");
  double sq[3] = {0.0, 0.0, 0.0};
  double sumC = 0.0, sumC2 = 0.0, sumD = 0.0;
  rep.compoundErrorSeries.reserve(rows.size());
  for (const auto& r : rows) {
    const double er = wrapAngle(r.roll - r.refRoll);
    const double ep = wrapAngle(r.pitch - r.refPitch);
    const double ey = wrapAngle(r.yaw - r.refYaw);
    sq[0] += er * er;
    sq[1] += ep * ep;
    sq[2] += ey * ey;
    const double c = std::abs(er) + std::abs(ep) + std::abs(ey);
    rep.compoundErrorSeries.emplace_back(r.time, c);
    sumC += c;
    sumC2 += c * c;
    const double ed = r.depth - r.refDepth;
    sumD += ed * ed;
  }
  const double n = static_cast<double>(rows.size());
  for (int i = 0; i < 3; ++i) rep.msePerAxis[i] = sq[i] / n;
  rep.mseTotal = (rep.msePerAxis[0] + rep.msePerAxis[1] + rep.msePerAxis[2]) / 3.0;
  rep.compoundMean = sumC / n;
  const double var = std::max(0.0, sumC2 / n - rep.compoundMean * rep.compoundMean);
  rep.compoundStd = std::sqrt(var);
  rep.depthMse = sumD / n;
  return rep;
}

MetricsReport aggregateMetrics(const std::vector<MetricsReport>& reports) {
  MetricsReport rep;
  if (reports.empty()) throw std::invalid_argument("aggregateMetrics: empty");
  double totalN = 0.0;
  double sumC = 0.0, sumC2 = 0.0;
  for (const auto& r : reports) {
    const double n = static_cast<double>(r.compoundErrorSeries.size());
    totalN += n;
    for (int i = 0; i < 3; ++i) rep.msePerAxis[i] += r.msePerAxis[i] * n;
    rep.depthMse += r.depthMse * n;
    sumC += r.compoundMean * n;
    sumC2 += (r.compoundStd * r.compoundStd +
              r.compoundMean * r.compoundMean) * n;
    for (const auto& p : r.compoundErrorSeries)
      rep.compoundErrorSeries.push_back(p);
  }
  for (int i = 0; i < 3; ++i) rep.msePerAxis[i] /= totalN;
  rep.depthMse /= totalN;
  rep.mseTotal = (rep.msePerAxis[0] + rep.msePerAxis[1] + rep.msePerAxis[2]) / 3.0;
  rep.compoundMean = sumC / totalN;
  const double var = std::max(0.0, sumC2 / totalN - rep.compoundMean * rep.compoundMean);
  rep.compoundStd = std::sqrt(var);
  return rep;
}

}  // namespace uuvlab
