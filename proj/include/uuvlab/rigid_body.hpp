#pragma once

#include <string>

#include "uuvlab/params.hpp"
#include "uuvlab/quat.hpp"
#include "uuvlab/vec3.hpp"
#include "uuvlab/wrench.hpp"

namespace uuvlab {

/// Pose plus body-frame velocities. World z points down (positive depth).
struct RigidBodyState {
  Vec3 position;          // m, world frame
  UnitQuat orientation;   // body -> world
  Vec3 linVel;            // m/s, body frame
  Vec3 angVel;            // rad/s, body frame

  bool isFinite() const {
    return position.isFinite() && orientation.isFinite() &&
           linVel.isFinite() && angVel.isFinite();
  }
};

struct IntegrateResult {
  RigidBodyState state;
  bool fault = false;
  std::string faultWhat;
};

/// Semi-implicit Euler step of the Newton-Euler equations in the body frame:
/// velocities first (with Coriolis w x mv and gyroscopic w x Iw terms),
/// then pose; orientation advanced by qdot = 1/2 q (0, w) and renormalized.
IntegrateResult integrateStep(const RigidBodyState& s, const Vec3& force,
                              const Vec3& torque, const VehicleParams& p,
                              double dt);

}  // namespace uuvlab
