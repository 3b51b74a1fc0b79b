#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uuvlab/env.hpp"
#include "uuvlab/metrics.hpp"
#include "uuvlab/ppo.hpp"

namespace uuvlab {

struct EvalOptions {
  int episodes = 4;
  std::uint64_t seed = 0;
  EpisodeConfig episode;      // horizon is derived from task duration
  RewardConfig reward;
  int workers = 1;
  bool keepTraces = false;
};

struct EvalResult {
  MetricsReport report;
  std::vector<std::vector<TraceRow>> traces;  // per episode, if kept
  int faults = 0;
};

/// Deterministic evaluation episodes (mean action, no sampling). A null
/// policy runs the bare controller (the no-RL arm).
EvalResult evaluatePolicy(const PolicyParams* policy, ControllerKind kind,
                          const TaskSpec& task, const VehicleParams& params,
                          const EvalOptions& opts);

enum class BuoyancyCondition { InDomain, Positive, Negative };
std::string toString(BuoyancyCondition c);

/// Vehicle with volume scaled at fixed mass so the vehicle density is
/// 0.95x (Positive) or 1.05x (Negative) of the fluid density.
VehicleParams buoyancyShifted(const VehicleParams& nominal,
                              BuoyancyCondition cond);

struct DrTableEntry {
  DRLevel level;
  BuoyancyCondition condition;
  TaskKind task;
  double mseTotal = 0.0;
};

/// In-domain / positive / negative buoyancy evaluation grid over the three
/// DR-level policies, per task.
std::vector<DrTableEntry> drGeneralizationProtocol(
    const std::map<DRLevel, const PolicyParams*>& policies,
    const std::vector<TaskSpec>& tasks, ControllerKind kind,
    const VehicleParams& nominal, const EvalOptions& opts);

void writeDrTableCsv(const std::string& path,
                     const std::vector<DrTableEntry>& table);

}  // namespace uuvlab
