#include "uuvlab/actuation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace uuvlab {

double positiveBranchZero() {
  // (kPosA2 a + kPosA1) a + kPosA0 = 0, root just above the deadband.
  const double d = kPosA1 * kPosA1 - 4.0 * kPosA2 * kPosA0;
  return (-kPosA1 + std::sqrt(d)) / (2.0 * kPosA2);
}

double negativeBranchZero() {
  const double d = kNegA1 * kNegA1 - 4.0 * kNegA2 * kNegA0;
  // Quadratic opens downward; the root just below the deadband.
  return (-kNegA1 + std::sqrt(d)) / (2.0 * kNegA2);
}

double maxForwardThrust() { return thrustFromCommand(1.0); }
double maxReverseThrust() { return thrustFromCommand(-1.0); }

double commandFromThrust(double tau) {
  // Forces below a millinewton sit inside the dead zone of any real ESC;
  // commanding the branch-zero PWM for them would buy nothing.
  if (std::abs(tau) < 1e-3) return 0.0;
  if (tau > 0.0) {
    if (tau >= maxForwardThrust()) return 1.0;
    const double d = kPosA1 * kPosA1 - 4.0 * kPosA2 * (kPosA0 - tau);
    return (-kPosA1 + std::sqrt(d)) / (2.0 * kPosA2);
  }
  if (tau <= maxReverseThrust()) return -1.0;
  const double d = kNegA1 * kNegA1 - 4.0 * kNegA2 * (kNegA0 - tau);
  // Downward-opening quadratic: the in-range root for tau < 0.
  return (-kNegA1 + std::sqrt(d)) / (2.0 * kNegA2);
}

ThrusterLayout::ThrusterLayout(const std::vector<Thruster>& thrusters)
    : thrusters_(thrusters) {
  if (thrusters_.size() != 8) {
    throw std::invalid_argument("ThrusterLayout requires exactly 8 thrusters");
  }
  Eigen::Matrix<double, 6, 8> A;
  for (int i = 0; i < 8; ++i) {
    const Vec3 d = thrusters_[i].direction.normalized();
    thrusters_[i].direction = d;
    const Vec3 t = thrusters_[i].position.cross(d);
    A(0, i) = d.x;
    A(1, i) = d.y;
    A(2, i) = d.z;
    A(3, i) = t.x;
    A(4, i) = t.y;
    A(5, i) = t.z;
  }
  Eigen::FullPivLU<Eigen::Matrix<double, 6, 6>> lu(A * A.transpose());
  if (lu.rank() < 6) {
    throw std::invalid_argument("thruster layout is not fully actuated");
  }
  const Eigen::Matrix<double, 8, 6> P = A.transpose() * lu.inverse();
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 8; ++c) alloc_[r][c] = A(r, c);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 6; ++c) pinv_[r][c] = P(r, c);
}

ThrusterLayout ThrusterLayout::defaultLayout() {
  const double c = std::sqrt(0.5);
  std::vector<Thruster> t;
  // Horizontal, vectored 45 deg: surge/sway/yaw.
  t.push_back({{0.12, -0.10, 0.0}, {c, c, 0.0}});
  t.push_back({{0.12, 0.10, 0.0}, {c, -c, 0.0}});
  t.push_back({{-0.12, -0.10, 0.0}, {c, -c, 0.0}});
  t.push_back({{-0.12, 0.10, 0.0}, {c, c, 0.0}});
  // Vertical: heave/roll/pitch (body z points down).
  t.push_back({{0.12, -0.10, 0.0}, {0.0, 0.0, 1.0}});
  t.push_back({{0.12, 0.10, 0.0}, {0.0, 0.0, 1.0}});
  t.push_back({{-0.12, -0.10, 0.0}, {0.0, 0.0, 1.0}});
  t.push_back({{-0.12, 0.10, 0.0}, {0.0, 0.0, 1.0}});
  return ThrusterLayout(t);
}

AllocationResult ThrusterLayout::allocate(const Wrench& w) const {
  AllocationResult out;
  const std::array<double, 6> wv{w.force.x,  w.force.y,  w.force.z,
                                 w.torque.x, w.torque.y, w.torque.z};
  int saturated = 0;
  for (int i = 0; i < 8; ++i) {
    double f = 0.0;
    for (int j = 0; j < 6; ++j) f += pinv_[i][j] * wv[j];
    out.forces[i] = f;
    const double a = commandFromThrust(f);
    out.command.a[i] = a;
    if (std::abs(a) >= 1.0 - 1e-12 && std::abs(f) > 1e-12) {
      // Clamped only when the requested force is outside the attainable range.
      if (f > maxForwardThrust() || f < maxReverseThrust()) ++saturated;
    }
  }
  out.saturationFraction = saturated / 8.0;
  return out;
}

Wrench ThrusterLayout::wrenchFromCommand(const ThrusterCommand& cmd) const {
  std::array<double, 8> f{};
  for (int i = 0; i < 8; ++i) f[i] = thrustFromCommand(cmd.a[i]);
  const auto wv = composeWrench(f);
  return {{wv[0], wv[1], wv[2]}, {wv[3], wv[4], wv[5]}};
}

std::array<double, 6> ThrusterLayout::composeWrench(
    const std::array<double, 8>& f) const {
  std::array<double, 6> wv{};
  for (int r = 0; r < 6; ++r) {
    double s = 0.0;
    for (int c = 0; c < 8; ++c) s += alloc_[r][c] * f[c];
    wv[r] = s;
  }
  return wv;
}

}  // namespace uuvlab
