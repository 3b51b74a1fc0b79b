#include "uuvlab/env.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace uuvlab {

DRLevel drLevelFromString(const std::string& s) {
  if (s == "ndr") return DRLevel::NDR;
  if (s == "sdr") return DRLevel::SDR;
  if (s == "ldr") return DRLevel::LDR;
  throw std::invalid_argument("unknown DR level: " + s);
}

std::string toString(DRLevel level) {
  switch (level) {
    case DRLevel::NDR: return "ndr";
    case DRLevel::SDR: return "sdr";
    case DRLevel::LDR: return "ldr";
  }
  return "?";
}

RewardComponents computeReward(const UnitQuat& q, const UnitQuat& qDes,
                               const Action& a, double dz,
                               const RewardConfig& cfg) {
  RewardComponents rc;
  const UnitQuat err = quatMul(q, qDes.conj());
  rc.rq = std::exp(-err.vec().norm());
  double l1 = 0.0;
  for (double r : a.raw) {
    double c = r < -1.0 ? -1.0 : (r > 1.0 ? 1.0 : r);
    l1 += std::abs(c);
  }
  rc.rp = std::exp(-std::pow(l1, cfg.b));
  rc.rz = std::exp(-dz * dz);
  rc.total = cfg.wq * rc.rq + cfg.wp * rc.rp + cfg.wz * rc.rz;
  return rc;
}

Env::Env(const VehicleParams& nominal, const DomainRandomizationConfig& drc,
         const EpisodeConfig& episode, const TaskSpec& task,
         const RewardConfig& reward, const AttitudeController& controller)
    : nominal_(nominal),
      drc_(drc),
      episode_(episode),
      task_(task),
      reward_(reward),
      baseController_(controller) {
  nominal_.validate();
  if (episode_.horizon <= 0) throw std::invalid_argument("horizon must be positive");
  if (!(episode_.controlDt > 0.0 && episode_.controlDt <= 0.2))
    throw std::invalid_argument("controlDt out of range");
  if (episode_.physicsSubsteps <= 0 || episode_.policyDecimation <= 0)
    throw std::invalid_argument("substeps/decimation must be positive");
}

void Env::sampleEpisode(Rng& rng) {
  params_ = nominal_;
  controller_ = baseController_;

  if (drc_.level != DRLevel::NDR) {
    const auto [cobLo, cobHi] = drc_.levelRange(drc_.cobOffsetLo, drc_.cobOffsetHi);
    const auto [volLo, volHi] = drc_.levelRange(drc_.volumeLo, drc_.volumeHi);
    const auto [gLo, gHi] = drc_.levelRange(drc_.gainLo, drc_.gainHi);

    const double mag = rng.uniform(cobLo, cobHi);
    params_.cobOffset = mag * rng.unitSphere();
    params_.volume = rng.uniform(volLo, volHi);

    auto perturb = [&](double g) {
      const double u = rng.uniform(gLo, gHi);
      const double s = rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
      return g * (1.0 + s * u);
    };
    for (auto& ch : controller_.channels) {
      ch.zeta1 = perturb(ch.zeta1);
      ch.zeta2 = perturb(ch.zeta2);
      ch.alpha = perturb(ch.alpha);
      ch.kp = perturb(ch.kp);
      ch.ki = perturb(ch.ki);
      ch.kd = perturb(ch.kd);
    }
  }
  box_ = equivalentBox(params_.mass, params_.inertiaDiag);

  EulerAngles init;
  init.roll = rng.uniform(-episode_.initialAttitudeRange, episode_.initialAttitudeRange);
  init.pitch = rng.uniform(-episode_.initialAttitudeRange, episode_.initialAttitudeRange);
  init.yaw = rng.uniform(-episode_.initialAttitudeRange, episode_.initialAttitudeRange);
  state_ = RigidBodyState{};
  state_.orientation = eulerToQuat(init);

  t0_ = 0.0;
  if (episode_.randomStartTime) {
    t0_ = rng.uniform(0.0, std::max(1e-9, task_.duration));
  }
  t_ = t0_;
  ouState_ = Wrench{};
}

Observation Env::reset(std::uint64_t envIndex, std::uint64_t episodeIndex) {
  Rng rng(drc_.seed, envIndex, episodeIndex, 0x11ULL);
  sampleEpisode(rng);
  disturbanceRng_ = Rng(drc_.seed, envIndex, episodeIndex, 0x22ULL);
  controlStep_ = 0;
  done_ = false;
  trace_.clear();
  return observe();
}

UnitQuat Env::desiredAttitude() const {
  return eulerToQuat(referenceAngles(task_, t_));
}

Observation Env::observe() const {
  Observation o;
  const UnitQuat q = state_.orientation;
  const UnitQuat qd = desiredAttitude();
  o.v = {q.w, q.x, q.y, q.z, qd.w, qd.x, qd.y, qd.z, -state_.position.z};
  return o;
}

Wrench Env::sampleDisturbance() {
  const auto& d = episode_.disturbance;
  if (d.kind == DisturbanceConfig::Kind::None) return {};
  if (d.kind == DisturbanceConfig::Kind::Transient) {
    const double t = t_ - t0_;
    for (double ti : d.times) {
      if (t >= ti && t < ti + episode_.controlDt) return d.impulse;
    }
    return {};
  }
  // Ornstein-Uhlenbeck at the control rate.
  const double dt = episode_.controlDt;
  const double tau = std::max(1e-6, d.correlationTime);
  const double decay = dt / tau;
  const double kick = std::sqrt(2.0 * dt / tau);
  auto advance = [&](double x, double sigma) {
    return x - decay * x + sigma * kick * disturbanceRng_.normal();
  };
  ouState_.force = {advance(ouState_.force.x, d.sigmaForce),
                    advance(ouState_.force.y, d.sigmaForce),
                    advance(ouState_.force.z, d.sigmaForce)};
  ouState_.torque = {advance(ouState_.torque.x, d.sigmaTorque),
                     advance(ouState_.torque.y, d.sigmaTorque),
                     advance(ouState_.torque.z, d.sigmaTorque)};
  return ouState_;
}

EnvStepResult Env::step(const Action& action) {
  if (done_) throw std::logic_error("step() on a finished episode");
  EnvStepResult out;

  const auto deltas = action.scaled();
  const double physDt = episode_.controlDt / episode_.physicsSubsteps;

  EulerAngles ref = referenceAngles(task_, t_);
  Setpoints sp;
  sp.roll = ref.roll + deltas[0];
  sp.pitch = ref.pitch + deltas[1];
  sp.yaw = ref.yaw + deltas[2];
  sp.depth = 0.0 + deltas[3];

  for (int c = 0; c < episode_.policyDecimation && !done_; ++c) {
    auto ctl = controllerStep(controller_, sp, state_, episode_.controlDt);
    controller_ = ctl.controller;
    const AllocationResult alloc = params_.layout->allocate(ctl.wrench);
    const Wrench thrust = params_.layout->wrenchFromCommand(alloc.command);
    const Wrench dist = sampleDisturbance();

    for (int k = 0; k < episode_.physicsSubsteps; ++k) {
      const Wrench drag = dragWrench(box_, state_.linVel, state_.angVel,
                                     params_.fluidDensity);
      const Wrench visc = viscousWrench(box_, state_.linVel, state_.angVel,
                                        params_.viscosity);
      const Wrench rest = restoringWrench(state_, params_);
      const Wrench total = thrust + drag + visc + rest + dist;
      auto res = integrateStep(state_, total.force, total.torque, params_,
                               physDt);
      if (res.fault) {
        out.fault = true;
        out.faultWhat = res.faultWhat;
        done_ = true;
        break;
      }
      state_ = res.state;
    }

    t_ += episode_.controlDt;
    ++controlStep_;

    if (traceEnabled_) {
      TraceRow row;
      row.time = t_ - t0_;
      const EulerAngles att = quatToEuler(state_.orientation).angles;
      row.roll = att.roll;
      row.pitch = att.pitch;
      row.yaw = att.yaw;
      row.depth = state_.position.z;
      const EulerAngles r2 = referenceAngles(task_, t_);
      row.refRoll = r2.roll;
      row.refPitch = r2.pitch;
      row.refYaw = r2.yaw;
      row.refDepth = 0.0;
      row.wrench = {ctl.wrench.force.x,  ctl.wrench.force.y,
                    ctl.wrench.force.z,  ctl.wrench.torque.x,
                    ctl.wrench.torque.y, ctl.wrench.torque.z};
      row.commands = alloc.command.a;
      trace_.push_back(row);
    }

    if (controlStep_ >= episode_.horizon) {
      done_ = true;
      out.truncated = true;
    }
  }

  const UnitQuat qDes = desiredAttitude();
  const double dz = 0.0 - state_.position.z;  // depth reference is 0
  out.components = computeReward(state_.orientation, qDes, action, dz, reward_);
  out.reward = out.components.total;

  if (!out.fault) {
    const double errAngle = quatAngle(state_.orientation, qDes);
    if (errAngle > episode_.terminationAngle) {
      done_ = true;
    }
  }
  out.done = done_;
  out.obs = observe();

  if (traceEnabled_ && !trace_.empty()) {
    auto& row = trace_.back();
    row.rewardQ = out.components.rq;
    row.rewardP = out.components.rp;
    row.rewardZ = out.components.rz;
    row.reward = out.components.total;
  }
  return out;
}

std::vector<EnvStepResult> batchStep(std::vector<Env>& envs,
                                     const std::vector<Action>& actions,
                                     int workers) {
  if (envs.size() != actions.size()) {
    throw std::invalid_argument("batchStep: envs/actions size mismatch");
  }
  std::vector<EnvStepResult> out(envs.size());
  const int n = static_cast<int>(envs.size());
  if (workers < 1) workers = 1;
  workers = std::min(workers, n);

  auto work = [&](int w) {
    for (int i = w; i < n; i += workers) {
      out[i] = envs[i].step(actions[i]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) threads.emplace_back(work, w);
    work(0);
    for (auto& t : threads) t.join();
  }
  return out;
}

}  // namespace uuvlab
