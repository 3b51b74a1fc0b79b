#include "uuvlab/eval.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace uuvlab {

std::string toString(BuoyancyCondition c) {
  switch (c) {
    case BuoyancyCondition::InDomain: return "in_domain";
    case BuoyancyCondition::Positive: return "pos_buoy";
    case BuoyancyCondition::Negative: return "neg_buoy";
  }
  return "?";
}

VehicleParams buoyancyShifted(const VehicleParams& nominal,
                              BuoyancyCondition cond) {
  VehicleParams p = nominal;
  if (cond == BuoyancyCondition::Positive) {
    p.volume = p.mass / (0.95 * p.fluidDensity);
  } else if (cond == BuoyancyCondition::Negative) {
    p.volume = p.mass / (1.05 * p.fluidDensity);
  }
  return p;
}

EvalResult evaluatePolicy(const PolicyParams* policy, ControllerKind kind,
                          const TaskSpec& task, const VehicleParams& params,
                          const EvalOptions& opts) {
  EvalResult result;
  EpisodeConfig episode = opts.episode;
  episode.randomStartTime = false;
  episode.horizon = std::max(
      1, static_cast<int>(std::llround(task.duration / episode.controlDt)));

  DomainRandomizationConfig ndr;
  ndr.level = DRLevel::NDR;
  ndr.seed = opts.seed;

  const int n = std::max(1, opts.episodes);
  std::vector<MetricsReport> reports(n);
  std::vector<std::vector<TraceRow>> traces(n);
  std::vector<int> faults(n, 0);

  auto runEpisode = [&](int e) {
    Env env(params, ndr, episode, task, opts.reward,
            AttitudeController::withDefaults(kind));
    env.enableTrace(true);
    Observation obs = env.reset(static_cast<std::uint64_t>(e), 0);
    Eigen::Matrix<double, 1, 9> row;
    while (!env.done()) {
      Action a;  // zero action for the no-RL arm
      if (policy != nullptr) {
        for (int d = 0; d < 9; ++d) row(0, d) = obs.v[d];
        const Eigen::MatrixXd mu = policy->actionMean(row);
        for (int d = 0; d < 4; ++d) a.raw[d] = mu(0, d);
      }
      const EnvStepResult res = env.step(a);
      if (res.fault) ++faults[e];
      obs = res.obs;
    }
    reports[e] = metricsFromTrace(env.trace());
    if (opts.keepTraces) traces[e] = env.trace();
  };

  const int workers = std::max(1, std::min(opts.workers, n));
  if (workers == 1) {
    for (int e = 0; e < n; ++e) runEpisode(e);
  } else {
    std::vector<std::thread> threads;
    auto shard = [&](int w) {
      for (int e = w; e < n; e += workers) runEpisode(e);
    };
    for (int w = 1; w < workers; ++w) threads.emplace_back(shard, w);
    shard(0);
    for (auto& t : threads) t.join();
  }

  result.report = aggregateMetrics(reports);
  if (opts.keepTraces) result.traces = std::move(traces);
  for (int f : faults) result.faults += f;
  return result;
}

std::vector<DrTableEntry> drGeneralizationProtocol(
    const std::map<DRLevel, const PolicyParams*>& policies,
    const std::vector<TaskSpec>& tasks, ControllerKind kind,
    const VehicleParams& nominal, const EvalOptions& opts) {
  std::vector<DrTableEntry> table;
  const BuoyancyCondition conds[] = {BuoyancyCondition::InDomain,
                                     BuoyancyCondition::Positive,
                                     BuoyancyCondition::Negative};
  for (const auto& task : tasks) {
    for (const auto cond : conds) {
      const VehicleParams params = buoyancyShifted(nominal, cond);
      for (const auto& [level, policy] : policies) {
        DrTableEntry entry;
        entry.level = level;
        entry.condition = cond;
        entry.task = task.kind;
        entry.mseTotal =
            evaluatePolicy(policy, kind, task, params, opts).report.mseTotal;
        table.push_back(entry);
      }
    }
  }
  return table;
}

void writeDrTableCsv(const std::string& path,
                     const std::vector<DrTableEntry>& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write DR table: " + path);
  out << "task,condition,level,mseTotal\n";
  for (const auto& e : table) {
    out << toString(e.task) << "," << toString(e.condition) << ","
        << toString(e.level) << "," << e.mseTotal << "\n";
  }
}

}  // namespace uuvlab
