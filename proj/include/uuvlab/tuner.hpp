#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "uuvlab/control.hpp"
#include "uuvlab/env.hpp"
#include "uuvlab/trace.hpp"

namespace uuvlab {

enum class TuneParameter { Zeta1, Zeta2, Alpha };
enum class TuneDirection { Increase, Decrease, Hold };

std::string toString(Channel c);
std::string toString(TuneParameter p);
std::string toString(TuneDirection d);

/// The fuzzy scale set: 2x / 0.5x for major changes, 1.5x / 0.67x for finer
/// refinements, 1.0 for hold.
inline constexpr std::array<double, 5> kFuzzyScales{2.0, 1.5, 1.0, 0.67, 0.5};
bool isFuzzyScale(double s);

struct TuningDecision {
  Channel channel = Channel::Yaw;
  TuneParameter parameter = TuneParameter::Zeta1;
  TuneDirection direction = TuneDirection::Hold;
  double scale = 1.0;
  std::string rationale;
};

struct AxisSummary {
  double mse = 0.0;             // rad^2 (m^2 for depth)
  double meanAbsError = 0.0;    // rad (m)
  double meanSignedError = 0.0; // rad (m), bias indicator
  double oscillationScore = 0.0;  // error-derivative zero crossings per second
  double saturationFraction = 0.0;
};

struct GainSnapshot {
  double zeta1 = 0.0, zeta2 = 0.0, alpha = 0.0;
};

struct HistoryEntry {
  TuningDecision decision;
  double resultingMse = 0.0;
};

struct ControlLogSummary {
  double windowStart = 0.0, windowEnd = 0.0;  // s
  std::array<AxisSummary, 4> perAxis{};       // roll, pitch, yaw, depth
  std::array<GainSnapshot, 4> currentGains{};
  std::vector<HistoryEntry> tuningHistory;
};

/// Windowed metrics over trace rows in [windowStart, windowEnd].
/// Throws on an empty window.
ControlLogSummary summarize(const std::vector<TraceRow>& trace,
                            double windowStart, double windowEnd,
                            const AttitudeController& gains);

struct TunerRules {
  double targetMse = 0.02;          // rad^2 per axis
  double severeFactor = 4.0;        // mse > severeFactor*target => big step
  double oscillationHigh = 8.0;     // crossings per second
  double biasFraction = 0.6;        // |meanSigned| / meanAbs for alpha rule
};

/// Deterministic fuzzy rule table; at most one decision per channel.
std::vector<TuningDecision> ruleDecide(const ControlLogSummary& s,
                                       const TunerRules& rules = {});

/// Chat-completion transport. complete() is blocking with a deadline.
class ChatBackend {
 public:
  struct Reply {
    bool ok = false;
    std::string content;
    std::string error;
  };
  virtual ~ChatBackend() = default;
  virtual Reply complete(const std::string& systemPrompt,
                         const std::string& userPrompt) = 0;
};

/// POSTs {"messages": [...]} to UUVLAB_LLM_ENDPOINT with a bearer token
/// from UUVLAB_LLM_KEY.
class HttpChatBackend : public ChatBackend {
 public:
  HttpChatBackend(std::string endpoint, std::string apiKey,
                  double timeoutSeconds = 10.0);
  static std::unique_ptr<HttpChatBackend> fromEnvironment();
  Reply complete(const std::string& systemPrompt,
                 const std::string& userPrompt) override;

 private:
  std::string endpoint_;
  std::string apiKey_;
  double timeoutSeconds_;
};

/// Replays scripted responses from a file (one JSON string or object per
/// line; a line reading "ERROR" simulates a transport failure).
class MockChatBackend : public ChatBackend {
 public:
  explicit MockChatBackend(const std::string& scriptPath);
  explicit MockChatBackend(std::vector<std::string> responses);
  Reply complete(const std::string& systemPrompt,
                 const std::string& userPrompt) override;

 private:
  std::vector<std::string> responses_;
  size_t next_ = 0;
};

std::string renderTuningPrompt(const ControlLogSummary& s);

/// Extracts and validates decisions from a model reply. Decisions with
/// unknown fields or scales outside the fuzzy set are rejected wholesale.
std::optional<std::vector<TuningDecision>> parseDecisions(
    const std::string& content);

struct LlmDecideResult {
  std::vector<TuningDecision> decisions;
  bool usedFallback = false;
  std::vector<std::string> warnings;
  std::vector<std::string> exchangeLog;  // raw prompts and replies
};

/// Prompts the backend; schema-invalid replies are retried once, then the
/// deterministic rules take over. Every returned decision is validated.
LlmDecideResult llmDecide(const ControlLogSummary& s, ChatBackend& client,
                          const TunerRules& rules = {});

/// parameter <- parameter * scale (increase) or / scale (decrease), clamped
/// to [0.1, 50] for zeta and [0, 0.2] for alpha.
AttitudeController applyDecision(const AttitudeController& c,
                                 const TuningDecision& d);

// ---- Scenario loop (used by the CLI tune command) ----

struct TuningScenario {
  VehicleParams vehicle;
  EpisodeConfig episode;
  TaskSpec task;
  RewardConfig reward;
  AttitudeController controller;  // possibly detuned starting point
  std::uint64_t seed = 0;

  /// Turbulence scenario with a deliberately weak yaw channel.
  static TuningScenario turbulenceDefault();
};

struct TuningRound {
  std::vector<TuningDecision> decisions;
  std::array<double, 4> mse{};  // after applying the decisions
  bool usedFallback = false;
  std::vector<std::string> warnings;
};

struct TuningTranscript {
  std::array<double, 4> baselineMse{};
  std::vector<TuningRound> rounds;
  std::vector<std::string> exchangeLog;
};

/// Runs the scenario once per round, deciding and applying between runs.
/// backend == nullptr selects the deterministic rule backend.
TuningTranscript runTuningSession(const TuningScenario& scenario,
                                  ChatBackend* backend, int rounds,
                                  const TunerRules& rules = {});

}  // namespace uuvlab
