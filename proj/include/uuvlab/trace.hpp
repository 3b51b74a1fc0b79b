#pragma once

#include <array>
#include <string>
#include <vector>

namespace uuvlab {

/// One control-step record of a simulation run.
struct TraceRow {
  double time = 0.0;
  double roll = 0.0, pitch = 0.0, yaw = 0.0, depth = 0.0;
  double refRoll = 0.0, refPitch = 0.0, refYaw = 0.0, refDepth = 0.0;
  std::array<double, 6> wrench{};    // Fx Fy Fz Tx Ty Tz (commanded)
  std::array<double, 8> commands{};  // normalized thruster commands
  double rewardQ = 0.0, rewardP = 0.0, rewardZ = 0.0, reward = 0.0;
};

std::string traceHeader();
std::string toCsv(const TraceRow& row);

void writeTraceCsv(const std::string& path, const std::vector<TraceRow>& rows);

/// Parses a trace CSV. Throws std::runtime_error naming the line on
/// malformed rows.
std::vector<TraceRow> readTraceCsv(const std::string& path);

}  // namespace uuvlab
