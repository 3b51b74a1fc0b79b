#include "uuvlab/control.hpp"

#include <cmath>
#include <stdexcept>

namespace uuvlab {

ControllerKind controllerKindFromString(const std::string& s) {
  if (s == "pid") return ControllerKind::PID;
  if (s == "ssurface") return ControllerKind::SSurface;
  if (s == "assurface") return ControllerKind::ASSurface;
  throw std::invalid_argument("unknown controller kind: " + s);
}

std::string toString(ControllerKind k) {
  switch (k) {
    case ControllerKind::PID: return "pid";
    case ControllerKind::SSurface: return "ssurface";
    case ControllerKind::ASSurface: return "assurface";
  }
  return "?";
}

double sSurfaceOutput(const ChannelControllerState& st,
                      const ChannelError& err) {
  const double z = st.zeta1 * err.e + st.zeta2 * err.eDot;
  const double u = 2.0 / (1.0 + std::exp(-z)) - 1.0;
  return st.kind == ControllerKind::ASSurface ? u + st.du : u;
}

ChannelControllerState adaptUpdate(const ChannelControllerState& st,
                                   const ChannelError& err, double u) {
  ChannelControllerState n = st;
  const double sgn = u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
  double du = st.du + st.alpha * err.e * sgn;
  if (du > st.duMax) du = st.duMax;
  if (du < -st.duMax) du = -st.duMax;
  n.du = du;
  return n;
}

double pidOutput(ChannelControllerState& st, const ChannelError& err,
                 double dt) {
  double integ = st.integrator + err.e * dt;
  if (integ > st.iMax) integ = st.iMax;
  if (integ < -st.iMax) integ = -st.iMax;
  st.integrator = integ;
  double u = st.kp * err.e + st.ki * integ + st.kd * err.eDot;
  if (u > 1.0) u = 1.0;
  if (u < -1.0) u = -1.0;
  return u;
}

AttitudeController AttitudeController::withDefaults(ControllerKind kind) {
  AttitudeController c;
  for (auto& ch : c.channels) ch.kind = kind;
  // Depth channel: softer surface, more rate damping, stronger authority.
  auto& depth = c.channel(Channel::Depth);
  depth.zeta1 = 2.0;
  depth.zeta2 = 3.0;
  depth.outputScale = 15.0;
  return c;
}

ControllerStepResult controllerStep(const AttitudeController& c,
                                    const Setpoints& setpoints,
                                    const RigidBodyState& s, double dt) {
  ControllerStepResult out;
  out.controller = c;

  const EulerResult er = quatToEuler(s.orientation);
  out.gimbalProximity = er.gimbalProximity;
  const EulerAngles& att = er.angles;

  // Body rates -> Euler angle rates; raw body rates near the singularity.
  double rollRate, pitchRate, yawRate;
  const Vec3& w = s.angVel;
  if (!er.gimbalProximity) {
    const double sr = std::sin(att.roll), cr = std::cos(att.roll);
    const double cp = std::cos(att.pitch), tp = std::tan(att.pitch);
    rollRate = w.x + sr * tp * w.y + cr * tp * w.z;
    pitchRate = cr * w.y - sr * w.z;
    yawRate = (sr * w.y + cr * w.z) / cp;
  } else {
    rollRate = w.x;
    pitchRate = w.y;
    yawRate = w.z;
  }

  const double depth = s.position.z;
  const double depthRate = s.orientation.rotate(s.linVel).z;

  const ChannelError errs[4] = {
      {wrapAngle(setpoints.roll - att.roll), -rollRate},
      {wrapAngle(setpoints.pitch - att.pitch), -pitchRate},
      {wrapAngle(setpoints.yaw - att.yaw), -yawRate},
      {setpoints.depth - depth, -depthRate}};

  double scaled[4];
  for (int i = 0; i < 4; ++i) {
    ChannelControllerState& st = out.controller.channels[i];
    double u;
    if (st.kind == ControllerKind::PID) {
      u = pidOutput(st, errs[i], dt);
    } else {
      u = sSurfaceOutput(st, errs[i]);
      if (st.kind == ControllerKind::ASSurface) {
        st = adaptUpdate(st, errs[i], u);
      }
    }
    out.outputs[i] = u;
    scaled[i] = st.outputScale * u;
  }

  out.wrench.torque = {scaled[0], scaled[1], scaled[2]};
  out.wrench.force = {0.0, 0.0, scaled[3]};
  return out;
}

}  // namespace uuvlab
