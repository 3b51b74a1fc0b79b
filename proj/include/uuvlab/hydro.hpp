#pragma once

#include "uuvlab/params.hpp"
#include "uuvlab/rigid_body.hpp"
#include "uuvlab/vec3.hpp"
#include "uuvlab/wrench.hpp"

namespace uuvlab {

/// Equivalent inertia box: half-dimensions recovered from mass and the
/// inertia diagonal, plus their mean.
struct EquivalentBox {
  Vec3 r;           // half-dimensions, m
  double rEq = 0.0; // (rx + ry + rz) / 3
};

/// r_i = sqrt(3/(2m) (I_jj + I_kk - I_ii)). Throws ParamError naming the
/// axis when the triangle inequality fails.
EquivalentBox equivalentBox(double mass, const Vec3& inertiaDiag);

/// Componentwise quadratic drag:
/// f_i = -2 rho r_j r_k |v_i| v_i,  g_i = -1/2 rho r_i (r_j^4 + r_k^4) |w_i| w_i.
Wrench dragWrench(const EquivalentBox& box, const Vec3& v, const Vec3& w,
                  double rho);

/// Linear damping: f_i = -6 beta pi r_eq v_i,  g_i = -8 beta pi r_eq^3 w_i.
Wrench viscousWrench(const EquivalentBox& box, const Vec3& v, const Vec3& w,
                     double beta);

/// Gravity at the COM plus buoyancy at COM + cobOffset, in the body frame.
Wrench restoringWrench(const RigidBodyState& s, const VehicleParams& p);

}  // namespace uuvlab
