#include "uuvlab/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace uuvlab {

std::string traceHeader() {
  return "time,roll,pitch,yaw,depth,refRoll,refPitch,refYaw,refDepth,"
         "fx,fy,fz,tx,ty,tz,"
         "cmd0,cmd1,cmd2,cmd3,cmd4,cmd5,cmd6,cmd7,"
         "rewardQ,rewardP,rewardZ,reward";
}

std::string toCsv(const TraceRow& r) {
  char buf[1024];
  int n = std::snprintf(
      buf, sizeof(buf),
      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
      "%.17g,%.17g,%.17g,%.17g",
      r.time, r.roll, r.pitch, r.yaw, r.depth, r.refRoll, r.refPitch, r.refYaw,
      r.refDepth, r.wrench[0], r.wrench[1], r.wrench[2], r.wrench[3],
      r.wrench[4], r.wrench[5], r.commands[0], r.commands[1], r.commands[2],
      r.commands[3], r.commands[4], r.commands[5], r.commands[6], r.commands[7],
      r.rewardQ, r.rewardP, r.rewardZ, r.reward);
  return std::string(buf, static_cast<size_t>(n));
}

void writeTraceCsv(const std::string& path, const std::vector<TraceRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trace file: " + path);
  out << traceHeader() << "\n";
  for (const auto& r : rows) out << toCsv(r) << "\n";
}

std::vector<TraceRow> readTraceCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty trace: " + path);
  if (line != traceHeader()) {
    throw std::runtime_error("bad trace header in " + path);
  }
  std::vector<TraceRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    double vals[27];
    int i = 0;
    while (std::getline(ss, cell, ',')) {
      if (i >= 27) break;
      try {
        size_t pos = 0;
        vals[i] = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw std::runtime_error("malformed trace value at " + path + ":" +
                                 std::to_string(lineno));
      }
      ++i;
    }
    if (i != 27) {
      throw std::runtime_error("truncated trace row at " + path + ":" +
                               std::to_string(lineno));
    }
    TraceRow r;
    r.time = vals[0];
    r.roll = vals[1]; r.pitch = vals[2]; r.yaw = vals[3]; r.depth = vals[4];
    r.refRoll = vals[5]; r.refPitch = vals[6]; r.refYaw = vals[7];
    r.refDepth = vals[8];
    for (int k = 0; k < 6; ++k) r.wrench[k] = vals[9 + k];
    for (int k = 0; k < 8; ++k) r.commands[k] = vals[15 + k];
    r.rewardQ = vals[23]; r.rewardP = vals[24]; r.rewardZ = vals[25];
    r.reward = vals[26];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace uuvlab
