#include "uuvlab/config.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <initializer_list>

namespace uuvlab {

namespace {

using nlohmann::json;

void checkObject(const json& j, const std::string& ctx) {
  if (!j.is_object())
    throw ConfigError(ctx + ": expected a JSON object");
}

void checkKeys(const json& j, const std::string& ctx,
               std::initializer_list<const char*> allowed) {
  checkObject(j, ctx);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return it.key() == k;
        }) == allowed.end()) {
      throw ConfigError(ctx + ": unknown key \"" + it.key() + "\"");
    }
  }
}

double getNumber(const json& j, const std::string& ctx, const char* key,
                 double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(ctx + "." + key + ": expected a number");
  return v.get<double>();
}

int getInt(const json& j, const std::string& ctx, const char* key,
           int fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer())
    throw ConfigError(ctx + "." + key + ": expected an integer");
  return v.get<int>();
}

std::int64_t getInt64(const json& j, const std::string& ctx, const char* key,
                      std::int64_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer())
    throw ConfigError(ctx + "." + key + ": expected an integer");
  return v.get<std::int64_t>();
}

bool getBool(const json& j, const std::string& ctx, const char* key,
             bool fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean())
    throw ConfigError(ctx + "." + key + ": expected a boolean");
  return v.get<bool>();
}

std::string getString(const json& j, const std::string& ctx, const char* key,
                      const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_string())
    throw ConfigError(ctx + "." + key + ": expected a string");
  return v.get<std::string>();
}

Vec3 getVec3(const json& j, const std::string& ctx, const char* key,
             const Vec3& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 3 ||
      !std::all_of(v.begin(), v.end(),
                   [](const json& e) { return e.is_number(); })) {
    throw ConfigError(ctx + "." + key + ": expected an array of 3 numbers");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

void parseVehicle(const json& j, const std::string& ctx, VehicleParams& p) {
  checkKeys(j, ctx,
            {"mass", "volume", "halfDims", "inertiaDiag", "cobOffset",
             "fluidDensity", "viscosity", "gravity"});
  p.mass = getNumber(j, ctx, "mass", p.mass);
  p.volume = getNumber(j, ctx, "volume", p.volume);
  if (j.contains("halfDims")) {
    const Vec3 half = getVec3(j, ctx, "halfDims", {});
    p.inertiaDiag = VehicleParams::solidBoxInertia(p.mass, half);
  }
  p.inertiaDiag = getVec3(j, ctx, "inertiaDiag", p.inertiaDiag);
  p.cobOffset = getVec3(j, ctx, "cobOffset", p.cobOffset);
  p.fluidDensity = getNumber(j, ctx, "fluidDensity", p.fluidDensity);
  p.viscosity = getNumber(j, ctx, "viscosity", p.viscosity);
  p.gravity = getNumber(j, ctx, "gravity", p.gravity);
}

void parseDr(const json& j, const std::string& ctx,
             DomainRandomizationConfig& d) {
  checkKeys(j, ctx,
            {"level", "cobOffsetLo", "cobOffsetHi", "volumeLo", "volumeHi",
             "gainLo", "gainHi"});
  if (j.contains("level")) {
    try {
      d.level = drLevelFromString(getString(j, ctx, "level", "ndr"));
    } catch (const std::exception& e) {
      throw ConfigError(ctx + ".level: " + e.what());
    }
  }
  d.cobOffsetLo = getNumber(j, ctx, "cobOffsetLo", d.cobOffsetLo);
  d.cobOffsetHi = getNumber(j, ctx, "cobOffsetHi", d.cobOffsetHi);
  d.volumeLo = getNumber(j, ctx, "volumeLo", d.volumeLo);
  d.volumeHi = getNumber(j, ctx, "volumeHi", d.volumeHi);
  d.gainLo = getNumber(j, ctx, "gainLo", d.gainLo);
  d.gainHi = getNumber(j, ctx, "gainHi", d.gainHi);
}

void parseDisturbance(const json& j, const std::string& ctx,
                      DisturbanceConfig& d) {
  checkKeys(j, ctx,
            {"kind", "sigmaForce", "sigmaTorque", "correlationTime", "times",
             "impulseForce", "impulseTorque"});
  const std::string kind = getString(j, ctx, "kind", "none");
  if (kind == "none") d.kind = DisturbanceConfig::Kind::None;
  else if (kind == "turbulence") d.kind = DisturbanceConfig::Kind::Turbulence;
  else if (kind == "transient") d.kind = DisturbanceConfig::Kind::Transient;
  else throw ConfigError(ctx + ".kind: unknown disturbance \"" + kind + "\"");
  d.sigmaForce = getNumber(j, ctx, "sigmaForce", d.sigmaForce);
  d.sigmaTorque = getNumber(j, ctx, "sigmaTorque", d.sigmaTorque);
  d.correlationTime = getNumber(j, ctx, "correlationTime", d.correlationTime);
  if (j.contains("times")) {
    const json& v = j.at("times");
    if (!v.is_array())
      throw ConfigError(ctx + ".times: expected an array of numbers");
    d.times.clear();
    for (const json& e : v) {
      if (!e.is_number())
        throw ConfigError(ctx + ".times: expected an array of numbers");
      d.times.push_back(e.get<double>());
    }
  }
  d.impulse.force = getVec3(j, ctx, "impulseForce", d.impulse.force);
  d.impulse.torque = getVec3(j, ctx, "impulseTorque", d.impulse.torque);
}

void parseReward(const json& j, const std::string& ctx, RewardConfig& r) {
  checkKeys(j, ctx, {"wq", "wp", "wz", "b"});
  r.wq = getNumber(j, ctx, "wq", r.wq);
  r.wp = getNumber(j, ctx, "wp", r.wp);
  r.wz = getNumber(j, ctx, "wz", r.wz);
  r.b = getNumber(j, ctx, "b", r.b);
}

void parseEnv(const json& j, const std::string& ctx, RunConfig& c) {
  checkKeys(j, ctx,
            {"dr", "horizon", "controlDt", "physicsSubsteps",
             "policyDecimation", "terminationAngle", "initialAttitudeRange",
             "randomStartTime", "disturbance", "reward"});
  if (j.contains("dr")) parseDr(j.at("dr"), ctx + ".dr", c.dr);
  c.episode.horizon = getInt(j, ctx, "horizon", c.episode.horizon);
  c.episode.controlDt = getNumber(j, ctx, "controlDt", c.episode.controlDt);
  c.episode.physicsSubsteps =
      getInt(j, ctx, "physicsSubsteps", c.episode.physicsSubsteps);
  c.episode.policyDecimation =
      getInt(j, ctx, "policyDecimation", c.episode.policyDecimation);
  c.episode.terminationAngle =
      getNumber(j, ctx, "terminationAngle", c.episode.terminationAngle);
  c.episode.initialAttitudeRange = getNumber(j, ctx, "initialAttitudeRange",
                                             c.episode.initialAttitudeRange);
  c.episode.randomStartTime =
      getBool(j, ctx, "randomStartTime", c.episode.randomStartTime);
  if (j.contains("disturbance"))
    parseDisturbance(j.at("disturbance"), ctx + ".disturbance",
                     c.episode.disturbance);
  if (j.contains("reward")) parseReward(j.at("reward"), ctx + ".reward", c.reward);
}

void parsePpo(const json& j, const std::string& ctx, PPOConfig& p) {
  checkKeys(j, ctx,
            {"gamma", "lambda", "clipRatio", "epochs", "minibatches", "lr",
             "entropyCoef", "valueCoef", "maxGradNorm", "numEnvs", "horizon",
             "totalSteps", "hidden", "logStdInit", "logStdMin", "logStdMax"});
  p.gamma = getNumber(j, ctx, "gamma", p.gamma);
  p.lambda = getNumber(j, ctx, "lambda", p.lambda);
  p.clipRatio = getNumber(j, ctx, "clipRatio", p.clipRatio);
  p.epochs = getInt(j, ctx, "epochs", p.epochs);
  p.minibatches = getInt(j, ctx, "minibatches", p.minibatches);
  p.lr = getNumber(j, ctx, "lr", p.lr);
  p.entropyCoef = getNumber(j, ctx, "entropyCoef", p.entropyCoef);
  p.valueCoef = getNumber(j, ctx, "valueCoef", p.valueCoef);
  p.maxGradNorm = getNumber(j, ctx, "maxGradNorm", p.maxGradNorm);
  p.numEnvs = getInt(j, ctx, "numEnvs", p.numEnvs);
  p.horizon = getInt(j, ctx, "horizon", p.horizon);
  p.totalSteps = getInt64(j, ctx, "totalSteps", p.totalSteps);
  if (j.contains("hidden")) {
    const json& v = j.at("hidden");
    if (!v.is_array() || v.empty())
      throw ConfigError(ctx + ".hidden: expected a non-empty integer array");
    p.hidden.clear();
    for (const json& e : v) {
      if (!e.is_number_integer() || e.get<int>() <= 0)
        throw ConfigError(ctx + ".hidden: expected positive integers");
      p.hidden.push_back(e.get<int>());
    }
  }
  p.logStdInit = getNumber(j, ctx, "logStdInit", p.logStdInit);
  p.logStdMin = getNumber(j, ctx, "logStdMin", p.logStdMin);
  p.logStdMax = getNumber(j, ctx, "logStdMax", p.logStdMax);
}

void parseTask(const json& j, const std::string& ctx, TaskSpec& t) {
  checkKeys(j, ctx, {"kind", "duration", "amplitude", "frequencies"});
  if (j.contains("kind")) {
    try {
      t = TaskSpec::make(taskKindFromString(getString(j, ctx, "kind", "")));
    } catch (const std::exception& e) {
      throw ConfigError(ctx + ".kind: " + e.what());
    }
  }
  t.duration = getNumber(j, ctx, "duration", t.duration);
  if (j.contains("amplitude")) {
    const Vec3 a = getVec3(j, ctx, "amplitude", {});
    t.amplitude = {a.x, a.y, a.z};
  }
  if (j.contains("frequencies")) {
    const json& v = j.at("frequencies");
    if (!v.is_array() || v.size() != 3)
      throw ConfigError(ctx + ".frequencies: expected 3 arrays of numbers");
    for (int axis = 0; axis < 3; ++axis) {
      const json& f = v[axis];
      if (!f.is_array())
        throw ConfigError(ctx + ".frequencies: expected 3 arrays of numbers");
      t.frequencies[axis].clear();
      for (const json& e : f) {
        if (!e.is_number())
          throw ConfigError(ctx + ".frequencies: expected numbers");
        t.frequencies[axis].push_back(e.get<double>());
      }
    }
  }
}

void parseTuner(const json& j, const std::string& ctx, RunConfig& c) {
  checkKeys(j, ctx,
            {"targetMse", "severeFactor", "oscillationHigh", "biasFraction",
             "rounds", "windowSeconds"});
  c.tunerRules.targetMse = getNumber(j, ctx, "targetMse", c.tunerRules.targetMse);
  c.tunerRules.severeFactor =
      getNumber(j, ctx, "severeFactor", c.tunerRules.severeFactor);
  c.tunerRules.oscillationHigh =
      getNumber(j, ctx, "oscillationHigh", c.tunerRules.oscillationHigh);
  c.tunerRules.biasFraction =
      getNumber(j, ctx, "biasFraction", c.tunerRules.biasFraction);
  c.tunerRounds = getInt(j, ctx, "rounds", c.tunerRounds);
  c.tunerWindowSeconds =
      getNumber(j, ctx, "windowSeconds", c.tunerWindowSeconds);
}

json vec3Json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

}  // namespace

RunConfig parseRunConfig(const json& j) {
  RunConfig c;
  checkKeys(j, "config",
            {"seed", "output", "controller", "vehicle", "env", "ppo", "task",
             "tuner"});
  c.seed = static_cast<std::uint64_t>(getInt64(j, "config", "seed", 0));
  c.outputDir = getString(j, "config", "output", c.outputDir);
  if (j.contains("controller")) {
    try {
      c.controller =
          controllerKindFromString(getString(j, "config", "controller", ""));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config.controller: ") + e.what());
    }
  }
  if (j.contains("vehicle"))
    parseVehicle(j.at("vehicle"), "config.vehicle", c.vehicle);
  if (j.contains("env")) parseEnv(j.at("env"), "config.env", c);
  if (j.contains("ppo")) parsePpo(j.at("ppo"), "config.ppo", c.ppo);
  if (j.contains("task")) parseTask(j.at("task"), "config.task", c.task);
  if (j.contains("tuner")) parseTuner(j.at("tuner"), "config.tuner", c);
  c.dr.seed = c.seed;
  try {
    c.vehicle.validate();
  } catch (const ParamError& e) {
    throw ConfigError(std::string("config.vehicle: ") + e.what());
  }
  if (c.episode.horizon <= 0)
    throw ConfigError("config.env.horizon: must be positive");
  if (!(c.episode.controlDt > 0.0))
    throw ConfigError("config.env.controlDt: must be positive");
  if (c.episode.physicsSubsteps <= 0)
    throw ConfigError("config.env.physicsSubsteps: must be positive");
  if (c.episode.policyDecimation <= 0)
    throw ConfigError("config.env.policyDecimation: must be positive");
  if (c.ppo.numEnvs <= 0 || c.ppo.horizon <= 0 || c.ppo.totalSteps <= 0)
    throw ConfigError("config.ppo: numEnvs, horizon and totalSteps must be positive");
  if (c.ppo.epochs <= 0 || c.ppo.minibatches <= 0)
    throw ConfigError("config.ppo: epochs and minibatches must be positive");
  if (c.tunerRounds < 0)
    throw ConfigError("config.tuner.rounds: must be non-negative");
  return c;
}

RunConfig loadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return parseRunConfig(j);
}

json runConfigToJson(const RunConfig& c) {
  json env = {
      {"dr",
       {{"level", toString(c.dr.level)},
        {"cobOffsetLo", c.dr.cobOffsetLo},
        {"cobOffsetHi", c.dr.cobOffsetHi},
        {"volumeLo", c.dr.volumeLo},
        {"volumeHi", c.dr.volumeHi},
        {"gainLo", c.dr.gainLo},
        {"gainHi", c.dr.gainHi}}},
      {"horizon", c.episode.horizon},
      {"controlDt", c.episode.controlDt},
      {"physicsSubsteps", c.episode.physicsSubsteps},
      {"policyDecimation", c.episode.policyDecimation},
      {"terminationAngle", c.episode.terminationAngle},
      {"initialAttitudeRange", c.episode.initialAttitudeRange},
      {"randomStartTime", c.episode.randomStartTime},
      {"reward",
       {{"wq", c.reward.wq},
        {"wp", c.reward.wp},
        {"wz", c.reward.wz},
        {"b", c.reward.b}}},
  };
  const DisturbanceConfig& d = c.episode.disturbance;
  const char* dKind = d.kind == DisturbanceConfig::Kind::None ? "none"
                      : d.kind == DisturbanceConfig::Kind::Turbulence
                          ? "turbulence"
                          : "transient";
  env["disturbance"] = {{"kind", dKind},
                        {"sigmaForce", d.sigmaForce},
                        {"sigmaTorque", d.sigmaTorque},
                        {"correlationTime", d.correlationTime},
                        {"times", d.times},
                        {"impulseForce", vec3Json(d.impulse.force)},
                        {"impulseTorque", vec3Json(d.impulse.torque)}};
  json task = {{"kind", toString(c.task.kind)},
               {"duration", c.task.duration},
               {"amplitude", c.task.amplitude},
               {"frequencies",
                json::array({c.task.frequencies[0], c.task.frequencies[1],
                             c.task.frequencies[2]})}};
  return json{
      {"seed", c.seed},
      {"output", c.outputDir},
      {"controller", toString(c.controller)},
      {"vehicle",
       {{"mass", c.vehicle.mass},
        {"volume", c.vehicle.volume},
        {"inertiaDiag", vec3Json(c.vehicle.inertiaDiag)},
        {"cobOffset", vec3Json(c.vehicle.cobOffset)},
        {"fluidDensity", c.vehicle.fluidDensity},
        {"viscosity", c.vehicle.viscosity},
        {"gravity", c.vehicle.gravity}}},
      {"env", env},
      {"ppo",
       {{"gamma", c.ppo.gamma},
        {"lambda", c.ppo.lambda},
        {"clipRatio", c.ppo.clipRatio},
        {"epochs", c.ppo.epochs},
        {"minibatches", c.ppo.minibatches},
        {"lr", c.ppo.lr},
        {"entropyCoef", c.ppo.entropyCoef},
        {"valueCoef", c.ppo.valueCoef},
        {"maxGradNorm", c.ppo.maxGradNorm},
        {"numEnvs", c.ppo.numEnvs},
        {"horizon", c.ppo.horizon},
        {"totalSteps", c.ppo.totalSteps},
        {"hidden", c.ppo.hidden},
        {"logStdInit", c.ppo.logStdInit},
        {"logStdMin", c.ppo.logStdMin},
        {"logStdMax", c.ppo.logStdMax}}},
      {"task", task},
      {"tuner",
       {{"targetMse", c.tunerRules.targetMse},
        {"severeFactor", c.tunerRules.severeFactor},
        {"oscillationHigh", c.tunerRules.oscillationHigh},
        {"biasFraction", c.tunerRules.biasFraction},
        {"rounds", c.tunerRounds},
        {"windowSeconds", c.tunerWindowSeconds}}},
  };
}

std::string runConfigHash(const RunConfig& c) {
  const std::string dump = runConfigToJson(c).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string isoTimestampUtc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void writeManifest(const std::string& path, const RunManifest& m) {
  const json j = {{"configHash", m.configHash},
                  {"codeVersion", m.codeVersion},
                  {"seed", m.seed},
                  {"startTime", m.startTime},
                  {"endTime", m.endTime},
                  {"artifacts", m.artifacts}};
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write manifest: " + tmp);
    out << j.dump(2) << "\n";
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot finalize manifest: " + path);
}

}  // namespace uuvlab
