#pragma once

#include <array>
#include <string>

#include "uuvlab/quat.hpp"
#include "uuvlab/rigid_body.hpp"
#include "uuvlab/wrench.hpp"

namespace uuvlab {

enum class ControllerKind { PID, SSurface, ASSurface };

ControllerKind controllerKindFromString(const std::string& s);
std::string toString(ControllerKind k);

struct ChannelError {
  double e = 0.0;     // rad or m
  double eDot = 0.0;  // rad/s or m/s
};

/// Per-channel controller state. The S-Surface family uses zeta1/zeta2 and,
/// for the adaptive variant, the compensation bias du with learning rate
/// alpha. PID uses kp/ki/kd with an anti-windup integrator.
struct ChannelControllerState {
  ControllerKind kind = ControllerKind::ASSurface;
  double zeta1 = 4.0;
  double zeta2 = 2.0;
  double alpha = 0.02;
  double du = 0.0;
  double duMax = 0.5;
  double kp = 3.0;
  double ki = 0.2;
  double kd = 1.5;
  double integrator = 0.0;
  double iMax = 0.5;
  double outputScale = 2.0;  // N or N*m per unit of normalized output
};

/// Eq-style sigmoid law: u = 2 / (1 + exp(-z1 e - z2 edot)) - 1 + du.
/// du is identically zero for the plain S-Surface.
double sSurfaceOutput(const ChannelControllerState& st, const ChannelError& err);

/// du <- clamp(du + alpha * e * sign(u), +-duMax); sign(0) = 0.
ChannelControllerState adaptUpdate(const ChannelControllerState& st,
                                   const ChannelError& err, double u);

/// kp e + ki * integrator + kd * edot, integrator clamped to +-iMax,
/// output clamped to [-1, 1].
double pidOutput(ChannelControllerState& st, const ChannelError& err, double dt);

enum class Channel { Roll = 0, Pitch = 1, Yaw = 2, Depth = 3 };

struct Setpoints {
  double roll = 0.0;   // rad
  double pitch = 0.0;  // rad
  double yaw = 0.0;    // rad
  double depth = 0.0;  // m
};

struct AttitudeController {
  std::array<ChannelControllerState, 4> channels;  // roll, pitch, yaw, depth

  static AttitudeController withDefaults(ControllerKind kind);

  ChannelControllerState& channel(Channel c) {
    return channels[static_cast<int>(c)];
  }
  const ChannelControllerState& channel(Channel c) const {
    return channels[static_cast<int>(c)];
  }
};

struct ControllerStepResult {
  Wrench wrench;
  AttitudeController controller;
  std::array<double, 4> outputs{};  // normalized per-channel outputs
  bool gimbalProximity = false;
};

/// One control cycle: per-channel errors (wrapped Euler differences, body
/// rates mapped to Euler rates, depth), channel law, adaptive update, and
/// scaling into torques (roll->Tx, pitch->Ty, yaw->Tz) plus heave force.
ControllerStepResult controllerStep(const AttitudeController& c,
                                    const Setpoints& setpoints,
                                    const RigidBodyState& s, double dt);

}  // namespace uuvlab
