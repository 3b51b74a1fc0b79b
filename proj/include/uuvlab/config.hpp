#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uuvlab/env.hpp"
#include "uuvlab/ppo.hpp"
#include "uuvlab/task.hpp"
#include "uuvlab/tuner.hpp"

namespace uuvlab {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Full run description: every block optional, defaults to the nominal
/// setup. Unknown keys anywhere are a ConfigError.
struct RunConfig {
  std::uint64_t seed = 0;
  std::string outputDir = "runs/out";
  ControllerKind controller = ControllerKind::ASSurface;
  VehicleParams vehicle = VehicleParams::nominal();
  DomainRandomizationConfig dr;
  EpisodeConfig episode;
  RewardConfig reward;
  PPOConfig ppo;
  TaskSpec task = TaskSpec::task2();
  TunerRules tunerRules;
  int tunerRounds = 2;
  double tunerWindowSeconds = 10.0;
};

RunConfig parseRunConfig(const nlohmann::json& j);
RunConfig loadRunConfig(const std::string& path);

/// Canonical JSON form of the parsed config (not the raw input file).
nlohmann::json runConfigToJson(const RunConfig& c);

/// FNV-1a hex digest of the canonical config dump.
std::string runConfigHash(const RunConfig& c);

struct RunManifest {
  std::string configHash;
  std::string codeVersion;
  std::uint64_t seed = 0;
  std::string startTime;  // ISO 8601 UTC
  std::string endTime;
  std::vector<std::string> artifacts;
};

/// Atomic write (temp file + rename) of the manifest JSON.
void writeManifest(const std::string& path, const RunManifest& m);

std::string isoTimestampUtc();

inline constexpr const char* kCodeVersion = "uuvlab 0.1.0";

}  // namespace uuvlab
