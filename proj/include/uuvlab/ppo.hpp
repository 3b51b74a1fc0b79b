#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "uuvlab/env.hpp"
#include "uuvlab/mlp.hpp"

namespace uuvlab {

struct PPOConfig {
  double gamma = 0.99;
  double lambda = 0.95;
  double clipRatio = 0.2;
  int epochs = 4;
  int minibatches = 4;
  double lr = 3e-4;
  double entropyCoef = 0.0;
  double valueCoef = 0.5;
  double maxGradNorm = 1.0;
  int numEnvs = 64;
  int horizon = 250;             // policy steps per rollout (= one episode)
  std::int64_t totalSteps = 1000000;
  std::vector<int> hidden{64, 64};
  double logStdInit = -0.5;
  double logStdMin = -5.0;
  double logStdMax = 1.0;
};

/// Gaussian actor (tanh-squashed mean, state-independent log-std) plus a
/// separate value head.
struct PolicyParams {
  Mlp actor;               // obs -> pre-squash action mean
  Eigen::VectorXd logStd;  // per-action-dim
  Mlp critic;              // obs -> value

  static PolicyParams init(const PPOConfig& cfg, std::uint64_t seed);

  /// Deterministic mean action in (-1, 1)^4. Thread-safe (const).
  Eigen::MatrixXd actionMean(const Eigen::MatrixXd& obs) const;
  Eigen::VectorXd values(const Eigen::MatrixXd& obs) const;

  bool isFinite() const;
};

/// Stateless inference pass that does not touch the training caches.
Eigen::MatrixXd mlpInfer(const Mlp& net, const Eigen::MatrixXd& input);

struct RolloutBuffer {
  int numEnvs = 0;
  int horizon = 0;
  Eigen::MatrixXd obs;        // (T*N) x 9, index t*N + i
  Eigen::MatrixXd actions;    // (T*N) x 4 (pre-clamp samples)
  Eigen::VectorXd logProb;
  Eigen::VectorXd value;
  Eigen::VectorXd reward;
  Eigen::VectorXd done;       // hard termination (divergence/fault), not time limit
  Eigen::VectorXd mask;       // 1 = valid sample
  Eigen::VectorXd advantages;
  Eigen::VectorXd returns;

  void resize(int numEnvsIn, int horizonIn, int obsDim, int actDim);
  Eigen::Index idx(int t, int i) const {
    return static_cast<Eigen::Index>(t) * numEnvs + i;
  }
};

/// Reverse-recursive generalized advantage estimation with done masking;
/// returns = advantages + values. bootstrapValues are V(s_T) per env (zero
/// for hard-terminated episodes).
void computeGAE(RolloutBuffer& buffer, double gamma, double lambda,
                const Eigen::VectorXd& bootstrapValues);

struct UpdateStats {
  double policyLoss = 0.0;
  double valueLoss = 0.0;
  double approxKL = 0.0;
  double clipFraction = 0.0;
  double entropy = 0.0;
  bool aborted = false;
};

/// Adam over a flat list of parameter tensors.
class Adam {
 public:
  Adam() = default;
  explicit Adam(double lr) : lr_(lr) {}

  void step(const std::vector<double*>& params,
            const std::vector<const double*>& grads,
            const std::vector<std::int64_t>& sizes);

  double lr() const { return lr_; }
  void setLr(double lr) { lr_ = lr; }
  std::int64_t iterations() const { return t_; }

  // Serialized state, concatenated in parameter order.
  std::vector<double> moment1() const { return m_; }
  std::vector<double> moment2() const { return v_; }
  void restore(const std::vector<double>& m1, const std::vector<double>& m2,
               std::int64_t t);

 private:
  double lr_ = 3e-4;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  std::int64_t t_ = 0;
  std::vector<double> m_, v_;
};

/// Views over every trainable tensor of a policy, in a fixed order.
struct ParamViews {
  std::vector<double*> params;
  std::vector<const double*> grads;
  std::vector<std::int64_t> sizes;
};
ParamViews paramViews(PolicyParams& p);

/// One clipped-surrogate PPO update over the buffer. Deterministic given
/// buffer and shuffleSeed. Non-finite losses abort the update (params left
/// unchanged for the offending minibatch onward, stats.aborted set).
UpdateStats ppoUpdate(PolicyParams& params, Adam& adam, RolloutBuffer& buffer,
                      const PPOConfig& cfg, std::uint64_t shuffleSeed);

struct LearningCurvePoint {
  int iteration = 0;
  std::int64_t steps = 0;
  double meanReward = 0.0;
  double mseProbe = 0.0;
  double approxKL = 0.0;
  double clipFraction = 0.0;
};

struct TrainSetup {
  VehicleParams vehicle;
  DomainRandomizationConfig drc;
  EpisodeConfig episode;
  TaskSpec task;
  RewardConfig reward;
  ControllerKind controllerKind = ControllerKind::ASSurface;
  PPOConfig ppo;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string checkpointPath;   // empty = no checkpoint files
  std::string curvePath;        // empty = no curve CSV
  int checkpointEvery = 0;      // iterations; 0 = only final
};

struct TrainResult {
  PolicyParams params;
  std::vector<LearningCurvePoint> curve;
  bool fault = false;
  std::string faultWhat;
};

/// collect -> GAE -> update loop. Bit-deterministic for a given setup,
/// independent of worker count; resumable from a checkpoint.
TrainResult train(const TrainSetup& setup,
                  const std::string& resumeCheckpoint = "");

void saveCheckpoint(const std::string& path, const PolicyParams& params,
                    const Adam& adam, int iteration, const PPOConfig& cfg);
struct Checkpoint {
  PolicyParams params;
  std::vector<double> adamM1, adamM2;
  std::int64_t adamT = 0;
  int iteration = 0;
  PPOConfig cfg;
};
Checkpoint loadCheckpoint(const std::string& path);

void writeCurveCsv(const std::string& path,
                   const std::vector<LearningCurvePoint>& curve);

}  // namespace uuvlab
