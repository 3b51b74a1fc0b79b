#include "uuvlab/hydro.hpp"

#include <cmath>
#include <string>

namespace uuvlab {

EquivalentBox equivalentBox(double mass, const Vec3& inertiaDiag) {
  const double I[3] = {inertiaDiag.x, inertiaDiag.y, inertiaDiag.z};
  const char* axes = "xyz";
  double r[3];
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    const double arg = 1.5 / mass * (I[j] + I[k] - I[i]);
    if (!(arg > 0.0)) {
      throw ParamError(
          std::string("equivalent box is degenerate on axis ") + axes[i]);
    }
    r[i] = std::sqrt(arg);
  }
  EquivalentBox box;
  box.r = {r[0], r[1], r[2]};
  box.rEq = (r[0] + r[1] + r[2]) / 3.0;
  return box;
}

Wrench dragWrench(const EquivalentBox& box, const Vec3& v, const Vec3& w,
                  double rho) {
  const double r[3] = {box.r.x, box.r.y, box.r.z};
  const double vv[3] = {v.x, v.y, v.z};
  const double ww[3] = {w.x, w.y, w.z};
  double f[3], g[3];
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    f[i] = -2.0 * rho * r[j] * r[k] * std::abs(vv[i]) * vv[i];
    const double rj4 = r[j] * r[j] * r[j] * r[j];
    const double rk4 = r[k] * r[k] * r[k] * r[k];
    g[i] = -0.5 * rho * r[i] * (rj4 + rk4) * std::abs(ww[i]) * ww[i];
  }
  return {{f[0], f[1], f[2]}, {g[0], g[1], g[2]}};
}

Wrench viscousWrench(const EquivalentBox& box, const Vec3& v, const Vec3& w,
                     double beta) {
  const double kf = -6.0 * beta * kPi * box.rEq;
  const double kg = -8.0 * beta * kPi * box.rEq * box.rEq * box.rEq;
  return {kf * v, kg * w};
}

Wrench restoringWrench(const RigidBodyState& s, const VehicleParams& p) {
  // World z is down: gravity +z, buoyancy -z.
  const double fg = p.mass * p.gravity;
  const double fb = p.fluidDensity * p.volume * p.gravity;
  const Vec3 downBody = s.orientation.rotateInverse({0.0, 0.0, 1.0});
  const Vec3 gravity = fg * downBody;
  const Vec3 buoyancy = -fb * downBody;
  return {gravity + buoyancy, p.cobOffset.cross(buoyancy)};
}

}  // namespace uuvlab
