#include "uuvlab/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "uuvlab/metrics.hpp"
#include <json.hpp>

namespace uuvlab {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)
}

Eigen::MatrixXd mlpInfer(const Mlp& net, const Eigen::MatrixXd& input) {
  Eigen::MatrixXd x = input;
  const auto& W = net.weights();
  const auto& b = net.biases();
  for (size_t l = 0; l < W.size(); ++l) {
    Eigen::MatrixXd z = (x * W[l].transpose()).rowwise() + b[l].transpose();
    if (l + 1 < W.size()) z = z.array().tanh();
    x = std::move(z);
  }
  return x;
}

PolicyParams PolicyParams::init(const PPOConfig& cfg, std::uint64_t seed) {
  PolicyParams p;
  p.actor = Mlp(9, cfg.hidden, 4);
  p.critic = Mlp(9, cfg.hidden, 1);
  Rng rngA(seed, 0xAC, 0, 0);
  Rng rngC(seed, 0xCC, 0, 0);
  p.actor.initialize(rngA);
  p.critic.initialize(rngC);
  p.logStd = Eigen::VectorXd::Constant(4, cfg.logStdInit);
  return p;
}

Eigen::MatrixXd PolicyParams::actionMean(const Eigen::MatrixXd& obs) const {
  return mlpInfer(actor, obs).array().tanh();
}

Eigen::VectorXd PolicyParams::values(const Eigen::MatrixXd& obs) const {
  return mlpInfer(critic, obs).col(0);
}

bool PolicyParams::isFinite() const {
  auto finite = [](const Mlp& m) {
    for (const auto& W : m.weights())
      if (!W.allFinite()) return false;
    for (const auto& b : m.biases())
      if (!b.allFinite()) return false;
    return true;
  };
  return finite(actor) && finite(critic) && logStd.allFinite();
}

void RolloutBuffer::resize(int numEnvsIn, int horizonIn, int obsDim,
                           int actDim) {
  numEnvs = numEnvsIn;
  horizon = horizonIn;
  const Eigen::Index n = static_cast<Eigen::Index>(numEnvs) * horizon;
  obs.setZero(n, obsDim);
  actions.setZero(n, actDim);
  logProb.setZero(n);
  value.setZero(n);
  reward.setZero(n);
  done.setZero(n);
  mask.setZero(n);
  advantages.setZero(n);
  returns.setZero(n);
}

void computeGAE(RolloutBuffer& b, double gamma, double lambda,
                const Eigen::VectorXd& bootstrapValues) {
  const int T = b.horizon, N = b.numEnvs;
  for (int i = 0; i < N; ++i) {
    double gae = 0.0;
    double nextValue = bootstrapValues(i);
    for (int t = T - 1; t >= 0; --t) {
      const Eigen::Index k = b.idx(t, i);
      if (b.mask(k) == 0.0) {
        gae = 0.0;
        nextValue = 0.0;
        continue;
      }
      // done(k) = 1 means the transition at step k ended in a terminal
      // state, so neither the bootstrap nor the chain crosses it.
      const double notTerminal = 1.0 - b.done(k);
      const double delta =
          b.reward(k) + gamma * nextValue * notTerminal - b.value(k);
      gae = delta + gamma * lambda * notTerminal * gae;
      b.advantages(k) = gae;
      b.returns(k) = gae + b.value(k);
      nextValue = b.value(k);
    }
  }
}

void Adam::step(const std::vector<double*>& params,
                const std::vector<const double*>& grads,
                const std::vector<std::int64_t>& sizes) {
  std::int64_t total = std::accumulate(sizes.begin(), sizes.end(),
                                       std::int64_t{0});
  if (m_.empty()) {
    m_.assign(total, 0.0);
    v_.assign(total, 0.0);
  } else if (static_cast<std::int64_t>(m_.size()) != total) {
    throw std::logic_error("Adam state size mismatch");
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  std::int64_t off = 0;
  for (size_t p = 0; p < params.size(); ++p) {
    double* x = params[p];
    const double* g = grads[p];
    for (std::int64_t i = 0; i < sizes[p]; ++i) {
      double& m = m_[off + i];
      double& v = v_[off + i];
      m = beta1_ * m + (1.0 - beta1_) * g[i];
      v = beta2_ * v + (1.0 - beta2_) * g[i] * g[i];
      x[i] -= lr_ * (m / bc1) / (std::sqrt(v / bc2) + eps_);
    }
    off += sizes[p];
  }
}

void Adam::restore(const std::vector<double>& m1, const std::vector<double>& m2,
                   std::int64_t t) {
  m_ = m1;
  v_ = m2;
  t_ = t;
}

ParamViews paramViews(PolicyParams& p) {
  ParamViews v;
  auto add = [&](double* data, const double* grad, std::int64_t n) {
    v.params.push_back(data);
    v.grads.push_back(grad);
    v.sizes.push_back(n);
  };
  auto addMlp = [&](Mlp& m) {
    for (size_t l = 0; l < m.weights().size(); ++l) {
      add(m.weights()[l].data(), m.weightGrads()[l].data(),
          m.weights()[l].size());
      add(m.biases()[l].data(), m.biasGrads()[l].data(), m.biases()[l].size());
    }
  };
  addMlp(p.actor);
  addMlp(p.critic);
  // logStd grad is handled by the caller via a scratch buffer.
  return v;
}

UpdateStats ppoUpdate(PolicyParams& params, Adam& adam, RolloutBuffer& b,
                      const PPOConfig& cfg, std::uint64_t shuffleSeed) {
  UpdateStats stats;
  const Eigen::Index n = b.obs.rows();

  std::vector<Eigen::Index> valid;
  valid.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (b.mask(i) != 0.0) valid.push_back(i);
  if (valid.empty()) return stats;

  // Advantage normalization over valid samples.
  double mean = 0.0;
  for (auto i : valid) mean += b.advantages(i);
  mean /= static_cast<double>(valid.size());
  double var = 0.0;
  for (auto i : valid) {
    const double d = b.advantages(i) - mean;
    var += d * d;
  }
  var /= static_cast<double>(valid.size());
  const double std = std::sqrt(var) + 1e-8;
  for (auto i : valid) b.advantages(i) = (b.advantages(i) - mean) / std;

  Rng shuffleRng(shuffleSeed, 0x5F, 0, 0);
  Eigen::VectorXd logStdGrad(4);

  double klSum = 0.0, clipSum = 0.0, plSum = 0.0, vlSum = 0.0, entSum = 0.0;
  std::int64_t batchCount = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<Eigen::Index> order = valid;
    std::shuffle(order.begin(), order.end(), shuffleRng.engine());
    const Eigen::Index mbSize =
        (static_cast<Eigen::Index>(order.size()) + cfg.minibatches - 1) /
        cfg.minibatches;
    for (Eigen::Index start = 0; start < static_cast<Eigen::Index>(order.size());
         start += mbSize) {
      const Eigen::Index count = std::min(
          mbSize, static_cast<Eigen::Index>(order.size()) - start);
      Eigen::MatrixXd obs(count, b.obs.cols());
      Eigen::MatrixXd act(count, 4);
      Eigen::VectorXd oldLp(count), adv(count), ret(count);
      for (Eigen::Index r = 0; r < count; ++r) {
        const Eigen::Index k = order[start + r];
        obs.row(r) = b.obs.row(k);
        act.row(r) = b.actions.row(k);
        oldLp(r) = b.logProb(k);
        adv(r) = b.advantages(k);
        ret(r) = b.returns(k);
      }

      // Forward.
      params.actor.zeroGrads();
      params.critic.zeroGrads();
      logStdGrad.setZero();
      const Eigen::MatrixXd pre = params.actor.forward(obs);
      const Eigen::MatrixXd mu = pre.array().tanh();
      const Eigen::VectorXd sigma = params.logStd.array().exp();
      const Eigen::MatrixXd vOut = params.critic.forward(obs);

      Eigen::VectorXd newLp = Eigen::VectorXd::Zero(count);
      for (Eigen::Index r = 0; r < count; ++r) {
        for (int d = 0; d < 4; ++d) {
          const double z = (act(r, d) - mu(r, d)) / sigma(d);
          newLp(r) += -0.5 * z * z - params.logStd(d) - 0.5 * kLog2Pi;
        }
      }

      const double invCount = 1.0 / static_cast<double>(count);
      Eigen::MatrixXd dMu = Eigen::MatrixXd::Zero(count, 4);
      Eigen::VectorXd dV = Eigen::VectorXd::Zero(count);
      double policyLoss = 0.0, valueLoss = 0.0;
      double klAcc = 0.0;
      Eigen::Index clipped = 0;

      for (Eigen::Index r = 0; r < count; ++r) {
        const double logRatio = newLp(r) - oldLp(r);
        const double ratio = std::exp(logRatio);
        const double a = adv(r);
        const double unclipped = ratio * a;
        const double clippedRatio =
            std::clamp(ratio, 1.0 - cfg.clipRatio, 1.0 + cfg.clipRatio);
        const double clippedTerm = clippedRatio * a;
        const bool useClipped = clippedTerm < unclipped;
        policyLoss += -std::min(unclipped, clippedTerm) * invCount;
        if (std::abs(ratio - 1.0) > cfg.clipRatio) ++clipped;
        klAcc += (ratio - 1.0) - logRatio;

        double dLdLp = 0.0;
        if (!useClipped) dLdLp = -a * ratio * invCount;
        // else gradient through the clipped constant is zero.

        for (int d = 0; d < 4; ++d) {
          const double z = (act(r, d) - mu(r, d)) / sigma(d);
          // dlogp/dmu = z / sigma ; dlogp/dlogstd = z^2 - 1.
          dMu(r, d) += dLdLp * z / sigma(d);
          logStdGrad(d) += dLdLp * (z * z - 1.0);
        }

        const double vErr = vOut(r, 0) - ret(r);
        valueLoss += 0.5 * vErr * vErr * invCount;
        dV(r) = cfg.valueCoef * vErr * invCount;
      }
      // Entropy bonus acts on logStd only (state-independent Gaussian).
      const double entropy =
          params.logStd.sum() + 2.0 * (1.0 + kLog2Pi);  // 4 dims: 0.5*4*(1+log2pi)
      for (int d = 0; d < 4; ++d) logStdGrad(d) += -cfg.entropyCoef;

      if (!std::isfinite(policyLoss) || !std::isfinite(valueLoss)) {
        stats.aborted = true;
        return stats;
      }

      // Backward through tanh squash.
      const Eigen::MatrixXd dPre =
          dMu.array() * (1.0 - mu.array().square());
      params.actor.backward(dPre);
      params.critic.backward(cfg.valueCoef == 0.0
                                 ? Eigen::MatrixXd::Zero(count, 1)
                                 : Eigen::MatrixXd(dV));

      // Global-norm clip over every tensor including logStd.
      ParamViews views = paramViews(params);
      views.params.push_back(params.logStd.data());
      views.grads.push_back(logStdGrad.data());
      views.sizes.push_back(4);

      double norm2 = 0.0;
      for (size_t p = 0; p < views.grads.size(); ++p) {
        for (std::int64_t i = 0; i < views.sizes[p]; ++i) {
          norm2 += views.grads[p][i] * views.grads[p][i];
        }
      }
      const double norm = std::sqrt(norm2);
      std::vector<std::vector<double>> scaled;
      if (cfg.maxGradNorm > 0.0 && norm > cfg.maxGradNorm) {
        const double s = cfg.maxGradNorm / norm;
        scaled.resize(views.grads.size());
        for (size_t p = 0; p < views.grads.size(); ++p) {
          scaled[p].assign(views.grads[p], views.grads[p] + views.sizes[p]);
          for (double& g : scaled[p]) g *= s;
          views.grads[p] = scaled[p].data();
        }
      }
      adam.step(views.params, views.grads, views.sizes);
      for (int d = 0; d < 4; ++d) {
        params.logStd(d) =
            std::clamp(params.logStd(d), cfg.logStdMin, cfg.logStdMax);
      }

      plSum += policyLoss;
      vlSum += valueLoss;
      klSum += klAcc * invCount;
      clipSum += static_cast<double>(clipped) * invCount;
      entSum += entropy;
      ++batchCount;
    }
  }

  if (batchCount > 0) {
    stats.policyLoss = plSum / batchCount;
    stats.valueLoss = vlSum / batchCount;
    stats.approxKL = klSum / batchCount;
    stats.clipFraction = clipSum / batchCount;
    stats.entropy = entSum / batchCount;
  }
  return stats;
}

namespace {

struct RolloutOutput {
  Eigen::VectorXd bootstrapValues;
  double meanReward = 0.0;
  bool fault = false;
  std::string faultWhat;
};

/// dV/dx for value-loss backward is dense; critic backward input must be a
/// column matrix.
RolloutOutput collectRollout(std::vector<Env>& envs, const PolicyParams& policy,
                             const PPOConfig& cfg, RolloutBuffer& buffer,
                             std::uint64_t seed, int iteration, int workers) {
  const int N = static_cast<int>(envs.size());
  const int T = cfg.horizon;
  buffer.resize(N, T, 9, 4);
  RolloutOutput out;
  out.bootstrapValues.setZero(N);
  std::vector<std::string> faults(N);

  auto runEnv = [&](int i) {
    Rng actRng(seed, static_cast<std::uint64_t>(i),
               static_cast<std::uint64_t>(iteration), 0x33ULL);
    Observation obs = envs[i].reset(static_cast<std::uint64_t>(i),
                                    static_cast<std::uint64_t>(iteration));
    Eigen::Matrix<double, 1, 9> row;
    bool finished = false;
    for (int t = 0; t < T; ++t) {
      if (finished) break;
      for (int d = 0; d < 9; ++d) row(0, d) = obs.v[d];
      const Eigen::MatrixXd mu = policy.actionMean(row);
      const double v = policy.values(row)(0);

      Action action;
      double logp = 0.0;
      for (int d = 0; d < 4; ++d) {
        const double sigma = std::exp(policy.logStd(d));
        const double eps = actRng.normal();
        const double a = mu(0, d) + sigma * eps;
        action.raw[d] = a;  // clamped inside the env / Action::scaled
        logp += -0.5 * eps * eps - policy.logStd(d) - 0.5 * kLog2Pi;
      }

      const EnvStepResult res = envs[i].step(action);
      const Eigen::Index k = buffer.idx(t, i);
      buffer.obs.row(k) = row;
      for (int d = 0; d < 4; ++d) buffer.actions(k, d) = action.raw[d];
      buffer.logProb(k) = logp;
      buffer.value(k) = v;
      buffer.reward(k) = res.reward;
      const bool hardDone = res.done && !res.truncated;
      buffer.done(k) = hardDone ? 1.0 : 0.0;
      buffer.mask(k) = 1.0;
      if (res.fault) faults[i] = res.faultWhat;
      obs = res.obs;
      if (res.done) {
        if (res.truncated && t == T - 1) {
          for (int d = 0; d < 9; ++d) row(0, d) = obs.v[d];
          out.bootstrapValues(i) = policy.values(row)(0);
        }
        finished = true;
      }
    }
  };

  if (workers <= 1 || N == 1) {
    for (int i = 0; i < N; ++i) runEnv(i);
  } else {
    const int W = std::min(workers, N);
    std::vector<std::thread> threads;
    threads.reserve(W - 1);
    auto shard = [&](int w) {
      for (int i = w; i < N; i += W) runEnv(i);
    };
    for (int w = 1; w < W; ++w) threads.emplace_back(shard, w);
    shard(0);
    for (auto& t : threads) t.join();
  }

  double sumR = 0.0, sumM = 0.0;
  for (Eigen::Index k = 0; k < buffer.reward.size(); ++k) {
    sumR += buffer.reward(k) * buffer.mask(k);
    sumM += buffer.mask(k);
  }
  out.meanReward = sumM > 0.0 ? sumR / sumM : 0.0;
  for (int i = 0; i < N; ++i) {
    if (!faults[i].empty()) {
      out.fault = true;
      out.faultWhat = faults[i];
    }
  }
  return out;
}

double mseProbe(const TrainSetup& setup, const PolicyParams& policy,
                int iteration) {
  DomainRandomizationConfig ndr = setup.drc;
  ndr.level = DRLevel::NDR;
  EpisodeConfig ep = setup.episode;
  ep.randomStartTime = false;
  Env env(setup.vehicle, ndr, ep, setup.task, setup.reward,
          AttitudeController::withDefaults(setup.controllerKind));
  env.enableTrace(true);
  Observation obs = env.reset(0xFFFFFFULL, static_cast<std::uint64_t>(iteration));
  Eigen::Matrix<double, 1, 9> row;
  while (!env.done()) {
    for (int d = 0; d < 9; ++d) row(0, d) = obs.v[d];
    const Eigen::MatrixXd mu = policy.actionMean(row);
    Action a;
    for (int d = 0; d < 4; ++d) a.raw[d] = mu(0, d);
    obs = env.step(a).obs;
  }
  return metricsFromTrace(env.trace()).mseTotal;
}

}  // namespace

TrainResult train(const TrainSetup& setup, const std::string& resumeCheckpoint) {
  TrainResult result;
  PPOConfig cfg = setup.ppo;

  EpisodeConfig episode = setup.episode;
  // Rollouts are whole episodes; keep the two horizons consistent.
  episode.horizon = cfg.horizon * episode.policyDecimation;

  DomainRandomizationConfig drc = setup.drc;
  drc.seed = setup.seed;

  PolicyParams policy = PolicyParams::init(cfg, setup.seed);
  Adam adam(cfg.lr);
  int startIteration = 0;
  if (!resumeCheckpoint.empty()) {
    Checkpoint ck = loadCheckpoint(resumeCheckpoint);
    policy = std::move(ck.params);
    adam.setLr(cfg.lr);
    adam.restore(ck.adamM1, ck.adamM2, ck.adamT);
    startIteration = ck.iteration;
  }

  const std::int64_t stepsPerIter =
      static_cast<std::int64_t>(cfg.numEnvs) * cfg.horizon;
  const int iterations =
      static_cast<int>(cfg.totalSteps / std::max<std::int64_t>(1, stepsPerIter));

  std::vector<Env> envs;
  envs.reserve(cfg.numEnvs);
  const AttitudeController ctrl =
      AttitudeController::withDefaults(setup.controllerKind);
  for (int i = 0; i < cfg.numEnvs; ++i) {
    envs.emplace_back(setup.vehicle, drc, episode, setup.task, setup.reward,
                      ctrl);
  }

  RolloutBuffer buffer;
  for (int iter = startIteration; iter < iterations; ++iter) {
    RolloutOutput ro = collectRollout(envs, policy, cfg, buffer, setup.seed,
                                      iter, setup.workers);
    if (ro.fault) {
      result.fault = true;
      result.faultWhat = ro.faultWhat;
    }
    computeGAE(buffer, cfg.gamma, cfg.lambda, ro.bootstrapValues);
    const std::uint64_t shuffleSeed =
        splitmix64(setup.seed ^ (0x9e37ULL + static_cast<std::uint64_t>(iter)));
    const UpdateStats us = ppoUpdate(policy, adam, buffer, cfg, shuffleSeed);

    LearningCurvePoint pt;
    pt.iteration = iter + 1;
    pt.steps = static_cast<std::int64_t>(iter + 1) * stepsPerIter;
    pt.meanReward = ro.meanReward;
    pt.mseProbe = mseProbe(setup, policy, 0);
    pt.approxKL = us.approxKL;
    pt.clipFraction = us.clipFraction;
    result.curve.push_back(pt);

    if (!setup.checkpointPath.empty() && setup.checkpointEvery > 0 &&
        (iter + 1) % setup.checkpointEvery == 0) {
      saveCheckpoint(setup.checkpointPath, policy, adam, iter + 1, cfg);
    }
  }

  if (!setup.checkpointPath.empty()) {
    saveCheckpoint(setup.checkpointPath, policy, adam, iterations, cfg);
  }
  if (!setup.curvePath.empty()) {
    writeCurveCsv(setup.curvePath, result.curve);
  }
  result.params = std::move(policy);
  return result;
}

namespace {

nlohmann::json mlpToJson(const Mlp& m) {
  nlohmann::json layers = nlohmann::json::array();
  for (size_t l = 0; l < m.weights().size(); ++l) {
    const auto& W = m.weights()[l];
    nlohmann::json jl;
    jl["rows"] = W.rows();
    jl["cols"] = W.cols();
    jl["w"] = std::vector<double>(W.data(), W.data() + W.size());
    const auto& b = m.biases()[l];
    jl["b"] = std::vector<double>(b.data(), b.data() + b.size());
    layers.push_back(std::move(jl));
  }
  return layers;
}

Mlp mlpFromJson(const nlohmann::json& layers) {
  std::vector<int> hidden;
  const int inputSize = layers.at(0).at("cols").get<int>();
  for (size_t l = 0; l + 1 < layers.size(); ++l) {
    hidden.push_back(layers.at(l).at("rows").get<int>());
  }
  const int outputSize = layers.back().at("rows").get<int>();
  Mlp m(inputSize, hidden, outputSize);
  for (size_t l = 0; l < layers.size(); ++l) {
    auto w = layers.at(l).at("w").get<std::vector<double>>();
    auto b = layers.at(l).at("b").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(w.size()) != m.weights()[l].size() ||
        static_cast<Eigen::Index>(b.size()) != m.biases()[l].size()) {
      throw std::runtime_error("checkpoint layer size mismatch");
    }
    std::copy(w.begin(), w.end(), m.weights()[l].data());
    std::copy(b.begin(), b.end(), m.biases()[l].data());
  }
  return m;
}

}  // namespace

void saveCheckpoint(const std::string& path, const PolicyParams& params,
                    const Adam& adam, int iteration, const PPOConfig& cfg) {
  nlohmann::json j;
  j["version"] = 1;
  j["iteration"] = iteration;
  j["hidden"] = cfg.hidden;
  j["actor"] = mlpToJson(params.actor);
  j["critic"] = mlpToJson(params.critic);
  j["logStd"] = std::vector<double>(params.logStd.data(),
                                    params.logStd.data() + params.logStd.size());
  j["adam"] = {{"m", adam.moment1()}, {"v", adam.moment2()},
               {"t", adam.iterations()}};
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << j.dump();
  }
  std::rename(tmp.c_str(), path.c_str());
}

Checkpoint loadCheckpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  nlohmann::json j;
  in >> j;
  if (j.at("version").get<int>() != 1) {
    throw std::runtime_error("unsupported checkpoint version in " + path);
  }
  Checkpoint ck;
  ck.iteration = j.at("iteration").get<int>();
  ck.cfg.hidden = j.at("hidden").get<std::vector<int>>();
  ck.params.actor = mlpFromJson(j.at("actor"));
  ck.params.critic = mlpFromJson(j.at("critic"));
  auto ls = j.at("logStd").get<std::vector<double>>();
  ck.params.logStd = Eigen::Map<Eigen::VectorXd>(ls.data(), ls.size());
  ck.adamM1 = j.at("adam").at("m").get<std::vector<double>>();
  ck.adamM2 = j.at("adam").at("v").get<std::vector<double>>();
  ck.adamT = j.at("adam").at("t").get<std::int64_t>();
  return ck;
}

void writeCurveCsv(const std::string& path,
                   const std::vector<LearningCurvePoint>& curve) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write curve CSV: " + path);
  out << "iteration,steps,meanReward,mseProbe,approxKL,clipFraction\n";
  char buf[192];
  for (const auto& p : curve) {
    std::snprintf(buf, sizeof(buf), "%d,%lld,%.17g,%.17g,%.17g,%.17g\n",
                  p.iteration, static_cast<long long>(p.steps), p.meanReward,
                  p.mseProbe, p.approxKL, p.clipFraction);
    out << buf;
  }
}

}  // namespace uuvlab
