#include "uuvlab/rigid_body.hpp"

namespace uuvlab {

IntegrateResult integrateStep(const RigidBodyState& s, const Vec3& force,
                              const Vec3& torque, const VehicleParams& p,
                              double dt) {
  IntegrateResult out;
  const Vec3 I = p.inertiaDiag;

  // Body-frame accelerations.
  const Vec3 vDot = force / p.mass - s.angVel.cross(s.linVel);
  const Vec3 Iw{I.x * s.angVel.x, I.y * s.angVel.y, I.z * s.angVel.z};
  const Vec3 gyro = s.angVel.cross(Iw);
  const Vec3 wDot{(torque.x - gyro.x) / I.x, (torque.y - gyro.y) / I.y,
                  (torque.z - gyro.z) / I.z};

  RigidBodyState n = s;
  n.linVel = s.linVel + dt * vDot;
  n.angVel = s.angVel + dt * wDot;

  // Pose from the updated velocities.
  n.position = s.position + dt * s.orientation.rotate(n.linVel);
  const UnitQuat& q = s.orientation;
  const Vec3& w = n.angVel;
  const UnitQuat qDot{
      0.5 * (-q.x * w.x - q.y * w.y - q.z * w.z),
      0.5 * (q.w * w.x + q.y * w.z - q.z * w.y),
      0.5 * (q.w * w.y - q.x * w.z + q.z * w.x),
      0.5 * (q.w * w.z + q.x * w.y - q.y * w.x)};
  UnitQuat qn{q.w + dt * qDot.w, q.x + dt * qDot.x, q.y + dt * qDot.y,
              q.z + dt * qDot.z};
  n.orientation = qn.normalized();

  out.state = n;
  if (!n.isFinite()) {
    out.fault = true;
    if (!n.linVel.isFinite()) out.faultWhat = "linVel non-finite";
    else if (!n.angVel.isFinite()) out.faultWhat = "angVel non-finite";
    else if (!n.orientation.isFinite()) out.faultWhat = "orientation non-finite";
    else out.faultWhat = "position non-finite";
  }
  return out;
}

}  // namespace uuvlab
