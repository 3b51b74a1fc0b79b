#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "uuvlab/actuation.hpp"
#include "uuvlab/vec3.hpp"

namespace uuvlab {

class ParamError : public std::runtime_error {
 public:
  explicit ParamError(const std::string& what) : std::runtime_error(what) {}
};

/// Physical parameters of the vehicle. The inertia tensor is restricted to
/// its principal-axis diagonal.
struct VehicleParams {
  double mass = 2.25;                      // kg
  Vec3 inertiaDiag;                        // kg*m^2, principal axes
  double volume = 2.25e-3;                 // m^3 (2.25 L, neutral in water)
  Vec3 cobOffset{0.0, 0.0, -0.02};         // m, COB minus COM, body frame
  double fluidDensity = 1000.0;            // kg/m^3
  double viscosity = 1.0e-3;               // Pa*s
  double gravity = 9.81;                   // m/s^2
  std::shared_ptr<const ThrusterLayout> layout;

  /// Uniform solid box inertia from half-dimensions.
  static Vec3 solidBoxInertia(double m, const Vec3& halfDims) {
    const double rx2 = halfDims.x * halfDims.x;
    const double ry2 = halfDims.y * halfDims.y;
    const double rz2 = halfDims.z * halfDims.z;
    return {m * (ry2 + rz2) / 3.0, m * (rx2 + rz2) / 3.0,
            m * (rx2 + ry2) / 3.0};
  }

  /// Nominal vehicle: 2.25 kg, neutral at 1000 kg/m^3, solid-box inertia
  /// with half-dims (0.15, 0.125, 0.10) m, COB 2 cm above COM.
  static VehicleParams nominal() {
    VehicleParams p;
    p.inertiaDiag = solidBoxInertia(p.mass, {0.15, 0.125, 0.10});
    p.layout = std::make_shared<const ThrusterLayout>(
        ThrusterLayout::defaultLayout());
    return p;
  }

  void validate() const {
    if (!(mass > 0.0)) throw ParamError("mass must be positive");
    if (!(volume > 0.0)) throw ParamError("volume must be positive");
    if (!(fluidDensity > 0.0)) throw ParamError("fluidDensity must be positive");
    if (viscosity < 0.0) throw ParamError("viscosity must be non-negative");
    if (!(inertiaDiag.x > 0.0 && inertiaDiag.y > 0.0 && inertiaDiag.z > 0.0))
      throw ParamError("inertia diagonal must be positive");
    const char* axes = "xyz";
    const double I[3] = {inertiaDiag.x, inertiaDiag.y, inertiaDiag.z};
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3, k = (i + 2) % 3;
      if (!(I[j] + I[k] > I[i])) {
        throw ParamError(std::string("inertia triangle inequality violated on axis ") +
                         axes[i]);
      }
    }
  }
};

}  // namespace uuvlab
