#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "uuvlab/config.hpp"
#include "uuvlab/eval.hpp"
#include "uuvlab/svg.hpp"

namespace fs = std::filesystem;
using namespace uuvlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOpts {
  std::string configPath;
  std::optional<std::uint64_t> seed;
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  std::string outDir;
  bool dryRun = false;
};

void addCommon(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.configPath, "Run config JSON path");
  cmd->add_option("--seed", o.seed, "Override config seed");
  cmd->add_option("--workers", o.workers, "Worker thread count");
  cmd->add_option("--out", o.outDir, "Override output directory");
  cmd->add_flag("--dry-run", o.dryRun, "Validate config and exit");
}

RunConfig loadConfigOrDefault(const CommonOpts& o) {
  RunConfig c = o.configPath.empty() ? RunConfig{} : loadRunConfig(o.configPath);
  if (o.seed) {
    c.seed = *o.seed;
    c.dr.seed = *o.seed;
  }
  if (!o.outDir.empty()) c.outputDir = o.outDir;
  return c;
}

class RunDir {
 public:
  RunDir(const RunConfig& c) : dir_(c.outputDir) {
    fs::create_directories(dir_);
    manifest_.configHash = runConfigHash(c);
    manifest_.codeVersion = kCodeVersion;
    manifest_.seed = c.seed;
    manifest_.startTime = isoTimestampUtc();
    const std::string cfgPath = (dir_ / "config.json").string();
    std::ofstream out(cfgPath);
    out << runConfigToJson(c).dump(2) << "\n";
    add("config.json");
  }

  std::string path(const std::string& name) const {
    return (dir_ / name).string();
  }
  void add(const std::string& name) { manifest_.artifacts.push_back(name); }

  void finish() {
    manifest_.endTime = isoTimestampUtc();
    manifest_.artifacts.push_back("manifest.json");
    writeManifest(path("manifest.json"), manifest_);
  }

 private:
  fs::path dir_;
  RunManifest manifest_;
};

std::vector<SvgSeries> trackingSeries(const std::vector<TraceRow>& trace) {
  SvgSeries yaw{"yaw", "#1f77b4", {}}, ref{"yaw ref", "#d62728", {}};
  SvgSeries pitch{"pitch", "#2ca02c", {}}, roll{"roll", "#9467bd", {}};
  for (const auto& r : trace) {
    yaw.points.emplace_back(r.time, r.yaw);
    ref.points.emplace_back(r.time, r.refYaw);
    pitch.points.emplace_back(r.time, r.pitch);
    roll.points.emplace_back(r.time, r.roll);
  }
  return {roll, pitch, yaw, ref};
}

void writeMetricsCsvRow(std::ofstream& out, const std::string& label,
                        const MetricsReport& m) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                label.c_str(), m.msePerAxis[0], m.msePerAxis[1],
                m.msePerAxis[2], m.mseTotal, m.compoundMean, m.depthMse);
  out << buf;
}

int cmdTrain(const CommonOpts& o, const std::string& resume) {
  const RunConfig c = loadConfigOrDefault(o);
  if (o.dryRun) {
    std::cout << "config ok (hash " << runConfigHash(c) << ")\n";
    return kExitOk;
  }
  RunDir run(c);
  TrainSetup setup;
  setup.vehicle = c.vehicle;
  setup.drc = c.dr;
  setup.episode = c.episode;
  setup.task = c.task;
  setup.reward = c.reward;
  setup.controllerKind = c.controller;
  setup.ppo = c.ppo;
  setup.seed = c.seed;
  setup.workers = std::max(1, o.workers);
  setup.checkpointPath = run.path("checkpoint.json");
  setup.curvePath = run.path("curve.csv");
  const TrainResult result = train(setup, resume);
  run.add("checkpoint.json");
  run.add("curve.csv");
  run.finish();
  if (result.fault) {
    std::cerr << "training fault: " << result.faultWhat << "\n";
    return kExitRuntime;
  }
  if (!result.curve.empty()) {
    const auto& last = result.curve.back();
    std::cout << "trained " << toString(c.controller) << " for " << last.steps
              << " steps, final mean reward " << last.meanReward
              << ", probe mse " << last.mseProbe << "\n";
  }
  return kExitOk;
}

int cmdEval(const CommonOpts& o, const std::string& checkpointPath,
            bool plot, bool keepTrace) {
  const RunConfig c = loadConfigOrDefault(o);
  if (o.dryRun) {
    std::cout << "config ok (hash " << runConfigHash(c) << ")\n";
    return kExitOk;
  }
  std::optional<PolicyParams> policy;
  if (!checkpointPath.empty()) {
    Checkpoint ckpt = loadCheckpoint(checkpointPath);
    policy.emplace(std::move(ckpt.params));
  }
  RunDir run(c);
  EvalOptions opts;
  opts.seed = c.seed;
  opts.episode = c.episode;
  opts.reward = c.reward;
  opts.workers = std::max(1, o.workers);
  opts.keepTraces = plot || keepTrace;

  std::ofstream table(run.path("mse_table.csv"));
  table << "cell,mseRoll,msePitch,mseYaw,mseTotal,compoundMean,depthMse\n";
  run.add("mse_table.csv");
  const std::vector<TaskSpec> tasks = {TaskSpec::task1(), TaskSpec::task2()};
  for (const auto& task : tasks) {
    for (const bool withRl : {false, true}) {
      if (withRl && !policy) continue;
      const EvalResult res =
          evaluatePolicy(withRl ? &*policy : nullptr, c.controller, task,
                         c.vehicle, opts);
      const std::string cell = toString(task.kind) + std::string("_") +
                               toString(c.controller) +
                               (withRl ? "_rl" : "_norl");
      writeMetricsCsvRow(table, cell, res.report);
      if (opts.keepTraces && !res.traces.empty()) {
        if (keepTrace) {
          writeTraceCsv(run.path(cell + "_trace.csv"), res.traces[0]);
          run.add(cell + "_trace.csv");
        }
        if (plot) {
          writeSvgLinePlot(run.path(cell + ".svg"), cell, "time [s]",
                           "angle [rad]", trackingSeries(res.traces[0]));
          run.add(cell + ".svg");
        }
      }
      if (res.faults > 0)
        std::cerr << "warning: " << res.faults << " faulted steps in " << cell
                  << "\n";
    }
  }
  table.close();
  run.finish();
  std::cout << "wrote " << run.path("mse_table.csv") << "\n";
  return kExitOk;
}

int cmdTune(const CommonOpts& o, const std::string& backendName,
            int roundsFlag, const std::string& mockScript) {
  RunConfig c = loadConfigOrDefault(o);
  if (roundsFlag >= 0) c.tunerRounds = roundsFlag;
  if (o.dryRun) {
    std::cout << "config ok (hash " << runConfigHash(c) << ")\n";
    return kExitOk;
  }
  std::unique_ptr<ChatBackend> backend;
  if (backendName == "http") {
    backend = HttpChatBackend::fromEnvironment();
    if (!backend) {
      std::cerr << "http backend requires UUVLAB_LLM_ENDPOINT\n";
      return kExitConfig;
    }
  } else if (backendName == "mock") {
    if (mockScript.empty()) {
      std::cerr << "mock backend requires --mock-script FILE\n";
      return kExitConfig;
    }
    backend = std::make_unique<MockChatBackend>(mockScript);
  } else if (backendName != "rule") {
    std::cerr << "unknown backend \"" << backendName << "\"\n";
    return kExitConfig;
  }

  RunDir run(c);
  TuningScenario scenario = TuningScenario::turbulenceDefault();
  scenario.seed = c.seed;
  const TuningTranscript t =
      runTuningSession(scenario, backend.get(), c.tunerRounds, c.tunerRules);

  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& r : t.rounds) {
    nlohmann::json decisions = nlohmann::json::array();
    for (const auto& d : r.decisions) {
      decisions.push_back({{"channel", toString(d.channel)},
                           {"parameter", toString(d.parameter)},
                           {"direction", toString(d.direction)},
                           {"scale", d.scale},
                           {"rationale", d.rationale}});
    }
    rounds.push_back({{"decisions", decisions},
                      {"mse", r.mse},
                      {"usedFallback", r.usedFallback},
                      {"warnings", r.warnings}});
  }
  const nlohmann::json transcript = {{"baselineMse", t.baselineMse},
                                     {"rounds", rounds},
                                     {"exchangeLog", t.exchangeLog}};
  {
    std::ofstream out(run.path("tuning_transcript.json"));
    out << transcript.dump(2) << "\n";
  }
  run.add("tuning_transcript.json");
  run.finish();

  std::cout << "baseline yaw mse " << t.baselineMse[2] << "\n";
  for (size_t i = 0; i < t.rounds.size(); ++i) {
    std::cout << "round " << (i + 1) << ": yaw mse " << t.rounds[i].mse[2]
              << (t.rounds[i].usedFallback ? " (fallback)" : "") << "\n";
  }
  return kExitOk;
}

int cmdReplay(const std::string& tracePath, const std::string& outDir,
              bool plot) {
  const std::vector<TraceRow> trace = readTraceCsv(tracePath);
  if (trace.empty()) {
    std::cerr << "empty trace: " << tracePath << "\n";
    return kExitRuntime;
  }
  const MetricsReport m = metricsFromTrace(trace);
  std::printf("rows %zu\n", trace.size());
  std::printf("mse roll %.6g pitch %.6g yaw %.6g total %.6g\n",
              m.msePerAxis[0], m.msePerAxis[1], m.msePerAxis[2], m.mseTotal);
  std::printf("compound mean %.6g std %.6g, depth mse %.6g\n", m.compoundMean,
              m.compoundStd, m.depthMse);
  if (plot || !outDir.empty()) {
    const fs::path dir = outDir.empty() ? fs::path(".") : fs::path(outDir);
    fs::create_directories(dir);
    writeSvgLinePlot((dir / "replay_tracking.svg").string(), "tracking replay",
                     "time [s]", "angle [rad]", trackingSeries(trace));
    SvgSeries compound{"compound error", "#d62728", m.compoundErrorSeries};
    writeSvgLinePlot((dir / "replay_compound.svg").string(),
                     "compound attitude error", "time [s]", "error [rad]",
                     {compound});
    std::cout << "wrote " << (dir / "replay_tracking.svg").string() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UUV attitude-control simulation toolkit"};
  app.require_subcommand(1);

  CommonOpts trainOpts, evalOpts, tuneOpts;
  std::string resume, checkpoint, backend = "rule", mockScript, tracePath;
  std::string replayOut;
  int rounds = -1;
  bool plot = false, keepTrace = false, replayPlot = false;

  CLI::App* trainCmd = app.add_subcommand("train", "Train a PPO policy");
  addCommon(trainCmd, trainOpts);
  trainCmd->add_option("--resume", resume, "Checkpoint to resume from");

  CLI::App* evalCmd = app.add_subcommand("eval", "Evaluate tracking tasks");
  addCommon(evalCmd, evalOpts);
  evalCmd->add_option("--checkpoint", checkpoint, "Policy checkpoint (omit for the no-RL arm)");
  evalCmd->add_flag("--plot", plot, "Write tracking SVG plots");
  evalCmd->add_flag("--trace", keepTrace, "Write per-cell trace CSVs");

  CLI::App* tuneCmd = app.add_subcommand("tune", "Run the online tuning scenario");
  addCommon(tuneCmd, tuneOpts);
  tuneCmd->add_option("--backend", backend, "rule | http | mock")
      ->check(CLI::IsMember({"rule", "http", "mock"}));
  tuneCmd->add_option("--rounds", rounds, "Tuning rounds");
  tuneCmd->add_option("--mock-script", mockScript, "Scripted replies for the mock backend");

  CLI::App* replayCmd = app.add_subcommand("replay", "Recompute metrics from a trace CSV");
  replayCmd->add_option("trace", tracePath, "Trace CSV path")->required();
  replayCmd->add_option("--out", replayOut, "Output directory for plots");
  replayCmd->add_flag("--plot", replayPlot, "Write SVG plots");

  CLI11_PARSE(app, argc, argv);

  try {
    if (trainCmd->parsed()) return cmdTrain(trainOpts, resume);
    if (evalCmd->parsed()) return cmdEval(evalOpts, checkpoint, plot, keepTrace);
    if (tuneCmd->parsed()) return cmdTune(tuneOpts, backend, rounds, mockScript);
    if (replayCmd->parsed()) return cmdReplay(tracePath, replayOut, replayPlot);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
