#pragma once

#include <array>
#include <vector>

#include "uuvlab/vec3.hpp"
#include "uuvlab/wrench.hpp"

namespace uuvlab {

// T200-at-16V piecewise quadratic thrust curve. Coefficients follow the
// published fit verbatim; the upper branch is slightly negative on
// (0.08, 0.0853) and the inverse only targets the monotone region beyond
// the branch zero.
inline constexpr double kDeadband = 0.08;
inline constexpr double kPosA2 = 29.54, kPosA1 = 26.10, kPosA0 = -2.44;
inline constexpr double kNegA2 = -21.75, kNegA1 = 21.75, kNegA0 = 2.07;

/// Normalized command in [-1, 1] to thrust in N.
inline double thrustFromCommand(double a) {
  if (a > 1.0) a = 1.0;
  if (a < -1.0) a = -1.0;
  if (a > kDeadband) return (kPosA2 * a + kPosA1) * a + kPosA0;
  if (a < -kDeadband) return (kNegA2 * a + kNegA1) * a + kNegA0;
  return 0.0;
}

/// Zero of the upper branch (thrust crosses 0 going positive).
double positiveBranchZero();
/// Zero of the lower branch (thrust crosses 0 going negative).
double negativeBranchZero();
double maxForwardThrust();
double maxReverseThrust();

/// Inverse of thrustFromCommand on its monotone regions; thrust beyond the
/// attainable range clamps to +-1 and |tau| below 1 mN maps to 0.
double commandFromThrust(double tau);

struct Thruster {
  Vec3 position;   // m, body frame
  Vec3 direction;  // unit, body frame
};

struct ThrusterCommand {
  std::array<double, 8> a{};  // each in [-1, 1]

  void clamp() {
    for (double& v : a) v = v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v);
  }
};

struct ThrustVector {
  std::array<double, 8> tau{};  // N
};

struct AllocationResult {
  ThrusterCommand command;
  std::array<double, 8> forces{};  // pre-saturation per-thruster forces, N
  double saturationFraction = 0.0;  // fraction of thrusters at command clamp
};

/// Fixed 8-thruster layout with precomputed 6x8 allocation matrix
/// (rows [Fx Fy Fz Tx Ty Tz]) and its minimum-norm pseudo-inverse.
class ThrusterLayout {
 public:
  explicit ThrusterLayout(const std::vector<Thruster>& thrusters);

  /// 4 horizontal thrusters vectored 45 deg at (+-0.12, +-0.10, 0) and
  /// 4 verticals at the same corners pointing body-z.
  static ThrusterLayout defaultLayout();

  const std::vector<Thruster>& thrusters() const { return thrusters_; }

  /// Minimum-norm per-thruster forces for a commanded wrench, converted to
  /// normalized commands through the inverse thrust curve.
  AllocationResult allocate(const Wrench& w) const;

  /// Body wrench produced by a command vector through the thrust curve.
  Wrench wrenchFromCommand(const ThrusterCommand& cmd) const;

  /// allocationMatrix * f for residual checks.
  std::array<double, 6> composeWrench(const std::array<double, 8>& f) const;

  const std::array<std::array<double, 8>, 6>& allocationMatrix() const {
    return alloc_;
  }
  const std::array<std::array<double, 6>, 8>& pseudoInverse() const {
    return pinv_;
  }

 private:
  std::vector<Thruster> thrusters_;
  std::array<std::array<double, 8>, 6> alloc_{};  // 6x8
  std::array<std::array<double, 6>, 8> pinv_{};   // 8x6
};

}  // namespace uuvlab
