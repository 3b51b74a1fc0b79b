#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uuvlab/control.hpp"
#include "uuvlab/hydro.hpp"
#include "uuvlab/params.hpp"
#include "uuvlab/rigid_body.hpp"
#include "uuvlab/rng.hpp"
#include "uuvlab/task.hpp"
#include "uuvlab/trace.hpp"

namespace uuvlab {

enum class DRLevel { NDR, SDR, LDR };

DRLevel drLevelFromString(const std::string& s);
std::string toString(DRLevel level);

/// Per-episode randomization of COB offset, displaced volume and controller
/// gains. LDR ranges match the published configuration; SDR uses the same
/// midpoints at half the width; NDR leaves everything nominal.
struct DomainRandomizationConfig {
  DRLevel level = DRLevel::NDR;
  double cobOffsetLo = 0.075, cobOffsetHi = 0.15;  // magnitude, m
  double volumeLo = 1.5e-3, volumeHi = 3.0e-3;     // m^3
  double gainLo = 0.15, gainHi = 0.30;             // relative perturbation
  std::uint64_t seed = 0;

  /// Active (lo, hi) for the configured level; NDR collapses to the nominal
  /// value supplied by the caller.
  std::pair<double, double> levelRange(double lo, double hi) const {
    if (level == DRLevel::LDR) return {lo, hi};
    const double mid = 0.5 * (lo + hi), half = 0.25 * (hi - lo);
    return {mid - half, mid + half};
  }
};

struct RewardConfig {
  double wq = 1.0;
  double wp = 0.1;
  double wz = 0.5;
  double b = 1.0;  // action-penalty exponent
};

struct DisturbanceConfig {
  enum class Kind { None, Turbulence, Transient };
  Kind kind = Kind::None;
  // Turbulence: Ornstein-Uhlenbeck wrench noise.
  double sigmaForce = 0.0;        // N
  double sigmaTorque = 0.0;       // N*m
  double correlationTime = 1.0;   // s
  // Transient: impulse wrench applied for one control step at each time.
  std::vector<double> times;      // s
  Wrench impulse;
};

struct EpisodeConfig {
  int horizon = 500;            // control steps
  double controlDt = 0.02;      // s
  int physicsSubsteps = 2;      // physics dt = controlDt / substeps
  int policyDecimation = 2;     // control steps per policy action
  double terminationAngle = kPi;  // geodesic attitude error bound, rad
  double initialAttitudeRange = 0.3;  // rad, uniform per axis
  bool randomStartTime = false;  // sample episode time origin (training)
  DisturbanceConfig disturbance;
};

/// Flattened 9-vector: current attitude, desired attitude, depth error.
struct Observation {
  std::array<double, 9> v{};
};

struct Action {
  std::array<double, 4> raw{};  // [droll, dpitch, dyaw, ddepth], each [-1,1]
  static constexpr std::array<double, 4> kScale{0.5, 0.5, 0.5, 0.5};

  std::array<double, 4> scaled() const {
    std::array<double, 4> s{};
    for (int i = 0; i < 4; ++i) {
      double r = raw[i];
      r = r < -1.0 ? -1.0 : (r > 1.0 ? 1.0 : r);
      s[i] = r * kScale[i];
    }
    return s;
  }
};

struct RewardComponents {
  double rq = 0.0, rp = 0.0, rz = 0.0;
  double total = 0.0;
};

RewardComponents computeReward(const UnitQuat& q, const UnitQuat& qDes,
                               const Action& a, double dz,
                               const RewardConfig& cfg);

struct EnvStepResult {
  Observation obs;
  double reward = 0.0;
  RewardComponents components;
  bool done = false;
  bool truncated = false;   // time-limit end, value may be bootstrapped
  bool fault = false;
  std::string faultWhat;
};

/// Single simulated episode stream: owns vehicle state, randomized params,
/// controller, disturbance process and task clock. Each instance is used by
/// one worker at a time; no shared mutable state between instances.
class Env {
 public:
  Env(const VehicleParams& nominal, const DomainRandomizationConfig& drc,
      const EpisodeConfig& episode, const TaskSpec& task,
      const RewardConfig& reward, const AttitudeController& controller);

  /// Starts episode (envIndex, episodeIndex) deterministically from the DR
  /// seed. Same tuple, same episode, regardless of call order.
  Observation reset(std::uint64_t envIndex, std::uint64_t episodeIndex);

  /// Advances policyDecimation control steps under one action.
  EnvStepResult step(const Action& action);

  bool done() const { return done_; }
  double time() const { return t_; }
  const RigidBodyState& state() const { return state_; }
  const VehicleParams& params() const { return params_; }
  const AttitudeController& controller() const { return controller_; }
  AttitudeController& controller() { return controller_; }
  const TaskSpec& task() const { return task_; }
  const EpisodeConfig& episodeConfig() const { return episode_; }
  int controlStepsDone() const { return controlStep_; }

  UnitQuat desiredAttitude() const;
  Observation observe() const;

  void enableTrace(bool on) { traceEnabled_ = on; }
  const std::vector<TraceRow>& trace() const { return trace_; }

 private:
  void sampleEpisode(Rng& rng);
  Wrench sampleDisturbance();

  VehicleParams nominal_;
  DomainRandomizationConfig drc_;
  EpisodeConfig episode_;
  TaskSpec task_;
  RewardConfig reward_;
  AttitudeController baseController_;

  VehicleParams params_;
  AttitudeController controller_;
  RigidBodyState state_;
  EquivalentBox box_;

  double t_ = 0.0;
  double t0_ = 0.0;
  int controlStep_ = 0;
  bool done_ = true;
  Rng disturbanceRng_{0};
  Wrench ouState_;

  bool traceEnabled_ = false;
  std::vector<TraceRow> trace_;
};

/// Steps a set of environments, optionally across threads. Results are
/// index-addressed and bit-identical for any worker count.
std::vector<EnvStepResult> batchStep(std::vector<Env>& envs,
                                     const std::vector<Action>& actions,
                                     int workers);

}  // namespace uuvlab
