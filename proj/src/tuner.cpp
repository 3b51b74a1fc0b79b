#include "uuvlab/tuner.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include <httplib.h>

namespace uuvlab {

std::string toString(Channel c) {
  switch (c) {
    case Channel::Roll: return "roll";
    case Channel::Pitch: return "pitch";
    case Channel::Yaw: return "yaw";
    case Channel::Depth: return "depth";
  }
  return "?";
}

std::string toString(TuneParameter p) {
  switch (p) {
    case TuneParameter::Zeta1: return "zeta1";
    case TuneParameter::Zeta2: return "zeta2";
    case TuneParameter::Alpha: return "alpha";
  }
  return "?";
}

std::string toString(TuneDirection d) {
  switch (d) {
    case TuneDirection::Increase: return "increase";
    case TuneDirection::Decrease: return "decrease";
    case TuneDirection::Hold: return "hold";
  }
  return "?";
}

bool isFuzzyScale(double s) {
  for (double f : kFuzzyScales) {
    if (std::abs(s - f) < 1e-9) return true;
  }
  return false;
}

ControlLogSummary summarize(const std::vector<TraceRow>& trace,
                            double windowStart, double windowEnd,
                            const AttitudeController& gains) {
  ControlLogSummary s;
  s.windowStart = windowStart;
  s.windowEnd = windowEnd;

  std::vector<const TraceRow*> rows;
  for (const auto& r : trace) {
    if (r.time >= windowStart && r.time <= windowEnd) rows.push_back(&r);
  }
  if (rows.size() < 2) {
    throw std::invalid_argument("summarize: window contains no trace data");
  }

  const double duration = rows.back()->time - rows.front()->time;
  auto errorOf = [](const TraceRow& r, int axis) {
    switch (axis) {
      case 0: return wrapAngle(r.roll - r.refRoll);
      case 1: return wrapAngle(r.pitch - r.refPitch);
      case 2: return wrapAngle(r.yaw - r.refYaw);
      default: return r.depth - r.refDepth;
    }
  };

  int saturatedRows = 0;
  for (const auto* r : rows) {
    bool sat = true;
    for (double c : r->commands) {
      if (std::abs(c) < 1.0 - 1e-9) { sat = false; break; }
    }
    if (sat) ++saturatedRows;
  }
  const double satFraction =
      static_cast<double>(saturatedRows) / static_cast<double>(rows.size());

  for (int axis = 0; axis < 4; ++axis) {
    AxisSummary& a = s.perAxis[axis];
    double sq = 0.0, absSum = 0.0, sum = 0.0;
    int crossings = 0;
    double prevDeriv = 0.0;
    bool havePrevDeriv = false;
    double prevErr = errorOf(*rows[0], axis);
    for (size_t i = 0; i < rows.size(); ++i) {
      const double e = errorOf(*rows[i], axis);
      sq += e * e;
      absSum += std::abs(e);
      sum += e;
      if (i > 0) {
        const double dt = rows[i]->time - rows[i - 1]->time;
        if (dt > 0.0) {
          const double deriv = (e - prevErr) / dt;
          if (havePrevDeriv && deriv * prevDeriv < 0.0) ++crossings;
          prevDeriv = deriv;
          havePrevDeriv = true;
        }
        prevErr = e;
      }
    }
    const double n = static_cast<double>(rows.size());
    a.mse = sq / n;
    a.meanAbsError = absSum / n;
    a.meanSignedError = sum / n;
    a.oscillationScore = duration > 0.0 ? crossings / duration : 0.0;
    a.saturationFraction = satFraction;
  }

  for (int i = 0; i < 4; ++i) {
    const auto& ch = gains.channels[i];
    s.currentGains[i] = {ch.zeta1, ch.zeta2, ch.alpha};
  }
  return s;
}

std::vector<TuningDecision> ruleDecide(const ControlLogSummary& s,
                                       const TunerRules& rules) {
  std::vector<TuningDecision> out;
  const Channel channels[4] = {Channel::Roll, Channel::Pitch, Channel::Yaw,
                               Channel::Depth};
  for (int i = 0; i < 4; ++i) {
    const AxisSummary& a = s.perAxis[i];
    TuningDecision d;
    d.channel = channels[i];
    if (a.mse <= rules.targetMse) {
      d.direction = TuneDirection::Hold;
      d.scale = 1.0;
      d.rationale = "within target";
    } else if (a.oscillationScore > rules.oscillationHigh) {
      // Oscillatory: add damping.
      d.parameter = TuneParameter::Zeta2;
      d.direction = TuneDirection::Increase;
      d.scale = a.mse > rules.severeFactor * rules.targetMse ? 2.0 : 1.5;
      d.rationale = "high oscillation, raising rate damping";
    } else if (a.mse <= rules.severeFactor * rules.targetMse &&
               a.meanAbsError > 0.0 &&
               std::abs(a.meanSignedError) >
                   rules.biasFraction * a.meanAbsError) {
      // Persistent one-sided error: let the adaptive bias work harder.
      d.parameter = TuneParameter::Alpha;
      d.direction = TuneDirection::Increase;
      d.scale = 1.5;
      d.rationale = "persistent signed bias, raising adaptation rate";
    } else {
      d.parameter = TuneParameter::Zeta1;
      d.direction = TuneDirection::Increase;
      d.scale = a.mse > rules.severeFactor * rules.targetMse ? 2.0 : 1.5;
      d.rationale = "tracking error above target, raising error gain";
    }
    out.push_back(d);
  }
  return out;
}

// ---- backends ----

HttpChatBackend::HttpChatBackend(std::string endpoint, std::string apiKey,
                                 double timeoutSeconds)
    : endpoint_(std::move(endpoint)),
      apiKey_(std::move(apiKey)),
      timeoutSeconds_(timeoutSeconds) {}

std::unique_ptr<HttpChatBackend> HttpChatBackend::fromEnvironment() {
  const char* ep = std::getenv("UUVLAB_LLM_ENDPOINT");
  if (ep == nullptr || *ep == '\0') return nullptr;
  const char* key = std::getenv("UUVLAB_LLM_KEY");
  return std::make_unique<HttpChatBackend>(ep, key ? key : "");
}

ChatBackend::Reply HttpChatBackend::complete(const std::string& systemPrompt,
                                             const std::string& userPrompt) {
  Reply reply;
  // Split endpoint into host and path.
  std::string url = endpoint_;
  std::string scheme = "http://";
  if (url.rfind("http://", 0) == 0) {
    url = url.substr(7);
  } else if (url.rfind("https://", 0) == 0) {
    reply.error = "https endpoints are not supported by this build";
    return reply;
  }
  const auto slash = url.find('/');
  const std::string host = slash == std::string::npos ? url : url.substr(0, slash);
  const std::string path = slash == std::string::npos ? "/" : url.substr(slash);

  httplib::Client client(scheme + host);
  client.set_connection_timeout(static_cast<int>(timeoutSeconds_));
  client.set_read_timeout(static_cast<int>(timeoutSeconds_));

  nlohmann::json body;
  body["messages"] = {{{"role", "system"}, {"content", systemPrompt}},
                      {{"role", "user"}, {"content", userPrompt}}};
  httplib::Headers headers;
  if (!apiKey_.empty()) {
    headers.emplace("Authorization", "Bearer " + apiKey_);
  }
  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    reply.error = "request failed: " + httplib::to_string(res.error());
    return reply;
  }
  if (res->status != 200) {
    reply.error = "http status " + std::to_string(res->status);
    return reply;
  }
  // Accept either a raw reply or an OpenAI-style envelope.
  reply.content = res->body;
  try {
    auto j = nlohmann::json::parse(res->body);
    if (j.contains("choices")) {
      reply.content =
          j["choices"].at(0).at("message").at("content").get<std::string>();
    } else if (j.contains("content") && j["content"].is_string()) {
      reply.content = j["content"].get<std::string>();
    }
  } catch (const nlohmann::json::exception&) {
    // keep raw body
  }
  reply.ok = true;
  return reply;
}

MockChatBackend::MockChatBackend(const std::string& scriptPath) {
  std::ifstream in(scriptPath);
  if (!in) throw std::runtime_error("cannot open mock script: " + scriptPath);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) responses_.push_back(line);
  }
}

MockChatBackend::MockChatBackend(std::vector<std::string> responses)
    : responses_(std::move(responses)) {}

ChatBackend::Reply MockChatBackend::complete(const std::string&,
                                             const std::string&) {
  Reply reply;
  if (next_ >= responses_.size()) {
    reply.error = "mock script exhausted";
    return reply;
  }
  const std::string& r = responses_[next_++];
  if (r == "ERROR") {
    reply.error = "scripted transport error";
    return reply;
  }
  reply.ok = true;
  reply.content = r;
  return reply;
}

// ---- prompt + parsing ----

std::string renderTuningPrompt(const ControlLogSummary& s) {
  std::ostringstream os;
  os << "Control window " << s.windowStart << "s to " << s.windowEnd << "s.\n";
  const char* names[4] = {"roll", "pitch", "yaw", "depth"};
  for (int i = 0; i < 4; ++i) {
    const auto& a = s.perAxis[i];
    const auto& g = s.currentGains[i];
    os << names[i] << ": mse=" << a.mse << " meanAbsErr=" << a.meanAbsError
       << " bias=" << a.meanSignedError
       << " oscillation=" << a.oscillationScore
       << " saturation=" << a.saturationFraction << " gains(zeta1=" << g.zeta1
       << ", zeta2=" << g.zeta2 << ", alpha=" << g.alpha << ")\n";
  }
  if (!s.tuningHistory.empty()) {
    os << "Tuning history:\n";
    for (const auto& h : s.tuningHistory) {
      os << "  " << toString(h.decision.channel) << " "
         << toString(h.decision.parameter) << " "
         << toString(h.decision.direction) << " x" << h.decision.scale
         << " -> mse " << h.resultingMse << "\n";
    }
  }
  os << "Respond with one JSON object: {\"channel\": roll|pitch|yaw|depth, "
        "\"parameter\": zeta1|zeta2|alpha, \"direction\": "
        "increase|decrease|hold, \"scale\": one of 2.0, 1.5, 1.0, 0.67, 0.5, "
        "\"rationale\": string}.";
  return os.str();
}

namespace {

std::optional<TuningDecision> decisionFromJson(const nlohmann::json& j) {
  TuningDecision d;
  try {
    const std::string ch = j.at("channel").get<std::string>();
    if (ch == "roll") d.channel = Channel::Roll;
    else if (ch == "pitch") d.channel = Channel::Pitch;
    else if (ch == "yaw") d.channel = Channel::Yaw;
    else if (ch == "depth") d.channel = Channel::Depth;
    else return std::nullopt;

    const std::string p = j.at("parameter").get<std::string>();
    if (p == "zeta1") d.parameter = TuneParameter::Zeta1;
    else if (p == "zeta2") d.parameter = TuneParameter::Zeta2;
    else if (p == "alpha") d.parameter = TuneParameter::Alpha;
    else return std::nullopt;

    const std::string dir = j.at("direction").get<std::string>();
    if (dir == "increase") d.direction = TuneDirection::Increase;
    else if (dir == "decrease") d.direction = TuneDirection::Decrease;
    else if (dir == "hold") d.direction = TuneDirection::Hold;
    else return std::nullopt;

    if (!j.at("scale").is_number()) return std::nullopt;
    d.scale = j.at("scale").get<double>();
    if (!isFuzzyScale(d.scale)) return std::nullopt;
    if (d.direction == TuneDirection::Hold && std::abs(d.scale - 1.0) > 1e-9)
      return std::nullopt;
    if (j.contains("rationale") && j["rationale"].is_string())
      d.rationale = j["rationale"].get<std::string>();
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
  return d;
}

}  // namespace

std::optional<std::vector<TuningDecision>> parseDecisions(
    const std::string& content) {
  // Find the first JSON value in the reply (models often wrap it in prose).
  const auto start = content.find_first_of("[{");
  if (start == std::string::npos) return std::nullopt;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(content.substr(start), nullptr, true, true);
  } catch (const nlohmann::json::exception&) {
    // Retry on just the first balanced object.
    try {
      j = nlohmann::json::parse(content.substr(start, content.rfind('}') -
                                                          start + 1));
    } catch (const nlohmann::json::exception&) {
      return std::nullopt;
    }
  }
  std::vector<TuningDecision> out;
  if (j.is_array()) {
    for (const auto& item : j) {
      auto d = decisionFromJson(item);
      if (!d) return std::nullopt;
      out.push_back(*d);
    }
  } else if (j.is_object()) {
    auto d = decisionFromJson(j);
    if (!d) return std::nullopt;
    out.push_back(*d);
  } else {
    return std::nullopt;
  }
  return out;
}

LlmDecideResult llmDecide(const ControlLogSummary& s, ChatBackend& client,
                          const TunerRules& rules) {
  LlmDecideResult result;
  const std::string systemPrompt =
      "You tune the gains of an underwater vehicle attitude controller. "
      "Output only the requested JSON decision.";
  const std::string userPrompt = renderTuningPrompt(s);
  result.exchangeLog.push_back("PROMPT: " + userPrompt);

  for (int attempt = 0; attempt < 2; ++attempt) {
    const auto reply = client.complete(systemPrompt, userPrompt);
    if (!reply.ok) {
      result.warnings.push_back("backend error: " + reply.error);
      result.exchangeLog.push_back("ERROR: " + reply.error);
      break;  // transport failure: no point retrying the same transport
    }
    result.exchangeLog.push_back("REPLY: " + reply.content);
    auto decisions = parseDecisions(reply.content);
    if (decisions) {
      result.decisions = std::move(*decisions);
      return result;
    }
    result.warnings.push_back(attempt == 0
                                  ? "invalid decision schema, retrying"
                                  : "invalid decision schema after retry");
  }

  result.usedFallback = true;
  result.warnings.push_back("falling back to rule backend");
  result.decisions = ruleDecide(s, rules);
  return result;
}

AttitudeController applyDecision(const AttitudeController& c,
                                 const TuningDecision& d) {
  AttitudeController out = c;
  if (d.direction == TuneDirection::Hold) return out;
  ChannelControllerState& ch = out.channel(d.channel);
  double* target = nullptr;
  switch (d.parameter) {
    case TuneParameter::Zeta1: target = &ch.zeta1; break;
    case TuneParameter::Zeta2: target = &ch.zeta2; break;
    case TuneParameter::Alpha: target = &ch.alpha; break;
  }
  const double factor =
      d.direction == TuneDirection::Increase ? d.scale : 1.0 / d.scale;
  double v = *target * factor;
  if (d.parameter == TuneParameter::Alpha) {
    v = std::clamp(v, 0.0, 0.2);
  } else {
    v = std::clamp(v, 0.1, 50.0);
  }
  *target = v;
  return out;
}

// ---- scenario loop ----

TuningScenario TuningScenario::turbulenceDefault() {
  TuningScenario sc;
  sc.vehicle = VehicleParams::nominal();
  sc.task = TaskSpec::holdAttitude();
  sc.task.duration = 10.0;
  sc.episode.horizon = 500;  // 10 s at 0.02 s
  sc.episode.disturbance.kind = DisturbanceConfig::Kind::Turbulence;
  sc.episode.disturbance.sigmaForce = 2.0;
  sc.episode.disturbance.sigmaTorque = 0.6;
  sc.episode.disturbance.correlationTime = 0.5;
  sc.episode.initialAttitudeRange = 0.3;
  // Turbulence realization with a pronounced low-frequency yaw component,
  // so the weak-yaw starting point has something to fight.
  sc.seed = 7;
  sc.controller = AttitudeController::withDefaults(ControllerKind::ASSurface);
  // Deliberately weak yaw channel: the canonical tuning exercise.
  sc.controller.channel(Channel::Yaw).zeta1 = 0.4;
  sc.controller.channel(Channel::Yaw).zeta2 = 0.3;
  return sc;
}

namespace {

std::array<double, 4> runScenarioEpisode(const TuningScenario& sc,
                                         const AttitudeController& ctrl,
                                         ControlLogSummary* summaryOut,
                                         const std::vector<HistoryEntry>& hist) {
  DomainRandomizationConfig ndr;
  ndr.level = DRLevel::NDR;
  ndr.seed = sc.seed;
  Env env(sc.vehicle, ndr, sc.episode, sc.task, sc.reward, ctrl);
  env.enableTrace(true);
  env.reset(0, 0);
  while (!env.done()) env.step(Action{});
  const auto& trace = env.trace();
  ControlLogSummary s = summarize(trace, trace.front().time,
                                  trace.back().time, ctrl);
  s.tuningHistory = hist;
  if (summaryOut) *summaryOut = s;
  return {s.perAxis[0].mse, s.perAxis[1].mse, s.perAxis[2].mse,
          s.perAxis[3].mse};
}

}  // namespace

TuningTranscript runTuningSession(const TuningScenario& scenario,
                                  ChatBackend* backend, int rounds,
                                  const TunerRules& rules) {
  TuningTranscript transcript;
  AttitudeController ctrl = scenario.controller;
  std::vector<HistoryEntry> history;

  ControlLogSummary summary;
  transcript.baselineMse =
      runScenarioEpisode(scenario, ctrl, &summary, history);

  for (int r = 0; r < rounds; ++r) {
    TuningRound round;
    if (backend != nullptr) {
      auto res = llmDecide(summary, *backend, rules);
      round.decisions = std::move(res.decisions);
      round.usedFallback = res.usedFallback;
      round.warnings = std::move(res.warnings);
      for (auto& line : res.exchangeLog)
        transcript.exchangeLog.push_back(std::move(line));
    } else {
      round.decisions = ruleDecide(summary, rules);
    }
    for (const auto& d : round.decisions) ctrl = applyDecision(ctrl, d);

    round.mse = runScenarioEpisode(scenario, ctrl, &summary, history);
    for (const auto& d : round.decisions) {
      history.push_back({d, round.mse[static_cast<int>(d.channel)]});
    }
    summary.tuningHistory = history;
    transcript.rounds.push_back(std::move(round));
  }
  return transcript;
}

}  // namespace uuvlab
