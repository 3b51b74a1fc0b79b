#include <doctest.h>

#include <cmath>

#include "uuvlab/actuation.hpp"
#include "uuvlab/quat.hpp"
#include "uuvlab/rng.hpp"

using namespace uuvlab;

namespace {

// Frozen 20-point table of the published curve, (command, thrust N).
// Values computed once from the printed coefficients by hand.
constexpr double kCurveTable[20][2] = {
    {-1.00, -41.43},   {-0.90, -35.1225}, {-0.80, -29.25},
    {-0.70, -23.8125}, {-0.60, -18.81},   {-0.50, -14.2425},
    {-0.40, -10.11},   {-0.30, -6.4125},  {-0.20, -3.15},
    {-0.10, -0.3225},  {-0.08, 0.0},      {0.00, 0.0},
    {0.08, 0.0},       {0.10, 0.4654},    {0.20, 3.9616},
    {0.40, 12.7264},   {0.60, 23.8544},   {0.80, 37.3456},
    {0.90, 44.9774},   {1.00, 53.20},
};

}  // namespace

TEST_CASE("thrust curve matches the printed coefficients on a frozen table") {
  for (const auto& row : kCurveTable) {
    CHECK(thrustFromCommand(row[0]) == doctest::Approx(row[1]).epsilon(1e-9));
  }
  // Spot recompute of one interior point per branch against the raw fit.
  CHECK(thrustFromCommand(0.5) ==
        doctest::Approx(29.54 * 0.25 + 26.10 * 0.5 - 2.44));
  CHECK(thrustFromCommand(-0.5) ==
        doctest::Approx(-21.75 * 0.25 + 21.75 * -0.5 + 2.07));
}

TEST_CASE("deadband and clamping") {
  CHECK(thrustFromCommand(0.0) == 0.0);
  CHECK(thrustFromCommand(0.05) == 0.0);
  CHECK(thrustFromCommand(-0.079) == 0.0);
  CHECK(thrustFromCommand(2.0) == thrustFromCommand(1.0));
  CHECK(thrustFromCommand(-2.0) == thrustFromCommand(-1.0));
}

TEST_CASE("branch zeros bracket the deadband") {
  const double aPos = positiveBranchZero();
  const double aNeg = negativeBranchZero();
  CHECK(aPos == doctest::Approx(0.0853).epsilon(1e-2));
  CHECK(aNeg == doctest::Approx(-0.0875).epsilon(1e-2));
  CHECK(aPos > kDeadband);
  CHECK(aNeg < -kDeadband);
  CHECK(std::abs(thrustFromCommand(aPos)) < 1e-9);
  CHECK(std::abs(thrustFromCommand(aNeg)) < 1e-9);
  CHECK(maxForwardThrust() == doctest::Approx(53.20));
  CHECK(maxReverseThrust() == doctest::Approx(-41.43));
}

TEST_CASE("commandFromThrust inverts the monotone regions") {
  CHECK(commandFromThrust(0.0) == 0.0);
  CHECK(commandFromThrust(53.20) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(commandFromThrust(100.0) == 1.0);
  CHECK(commandFromThrust(-41.43) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(commandFromThrust(-100.0) == -1.0);

  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const double tau = rng.uniform(-41.0, 53.0);
    const double a = commandFromThrust(tau);
    CHECK(a >= -1.0);
    CHECK(a <= 1.0);
    if (std::abs(tau) > 0.5) {
      CHECK(thrustFromCommand(a) == doctest::Approx(tau).epsilon(1e-9));
    }
  }
  // Round trip from the command side on the invertible intervals.
  for (int i = 0; i < 500; ++i) {
    const double a = rng.uniform(positiveBranchZero() + 1e-6, 1.0);
    CHECK(commandFromThrust(thrustFromCommand(a)) ==
          doctest::Approx(a).epsilon(1e-9));
    const double an = rng.uniform(-1.0, negativeBranchZero() - 1e-6);
    CHECK(commandFromThrust(thrustFromCommand(an)) ==
          doctest::Approx(an).epsilon(1e-9));
  }
}

TEST_CASE("default layout is full rank with a consistent pseudo-inverse") {
  const ThrusterLayout layout = ThrusterLayout::defaultLayout();
  REQUIRE(layout.thrusters().size() == 8);
  // pinv must be a right inverse of the allocation matrix: A * A^+ = I6.
  const auto& alloc = layout.allocationMatrix();
  const auto& pinv = layout.pseudoInverse();
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) {
      double sum = 0.0;
      for (int k = 0; k < 8; ++k) sum += alloc[r][k] * pinv[k][c];
      CHECK(sum == doctest::Approx(r == c ? 1.0 : 0.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("rank-deficient layouts are rejected") {
  std::vector<Thruster> all;
  for (int i = 0; i < 8; ++i) {
    all.push_back({{0.1 * i, 0, 0}, {0, 0, 1}});  // all parallel: rank < 6
  }
  CHECK_THROWS(ThrusterLayout(all));
  CHECK_THROWS(ThrusterLayout({}));  // wrong count
}

TEST_CASE("pure heave splits evenly over the vertical thrusters") {
  const ThrusterLayout layout = ThrusterLayout::defaultLayout();
  const double fz = 12.0;
  const AllocationResult r = layout.allocate({{0, 0, fz}, {}});
  CHECK(r.saturationFraction == 0.0);
  int verticals = 0;
  for (int i = 0; i < 8; ++i) {
    const Vec3 d = layout.thrusters()[i].direction;
    if (std::abs(d.z) > 0.5) {
      ++verticals;
      CHECK(r.forces[i] == doctest::Approx(fz / 4.0).epsilon(1e-9));
    } else {
      CHECK(std::abs(r.forces[i]) < 1e-9);
      CHECK(r.command.a[i] == 0.0);
    }
  }
  CHECK(verticals == 4);
}

TEST_CASE("pure yaw torque engages only the horizontal ring") {
  const ThrusterLayout layout = ThrusterLayout::defaultLayout();
  const AllocationResult r = layout.allocate({{}, {0, 0, 0.8}});
  double sum = 0.0;
  for (int i = 0; i < 8; ++i) {
    const Vec3 d = layout.thrusters()[i].direction;
    if (std::abs(d.z) > 0.5) {
      CHECK(std::abs(r.forces[i]) < 1e-9);
    } else {
      sum += r.forces[i];
      CHECK(std::abs(r.forces[i]) > 1e-6);
    }
  }
  // Anti-symmetric pattern: no net horizontal force.
  CHECK(std::abs(sum) < 1e-9);
}

TEST_CASE("allocation reconstructs feasible wrenches") {
  const ThrusterLayout layout = ThrusterLayout::defaultLayout();
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const Wrench w{{rng.uniform(-10, 10), rng.uniform(-10, 10),
                    rng.uniform(-10, 10)},
                   {rng.uniform(-1, 1), rng.uniform(-1, 1),
                    rng.uniform(-1, 1)}};
    const AllocationResult r = layout.allocate(w);
    const auto composed = layout.composeWrench(r.forces);
    CHECK(composed[0] == doctest::Approx(w.force.x).epsilon(1e-9));
    CHECK(composed[1] == doctest::Approx(w.force.y).epsilon(1e-9));
    CHECK(composed[2] == doctest::Approx(w.force.z).epsilon(1e-9));
    CHECK(composed[3] == doctest::Approx(w.torque.x).epsilon(1e-9));
    CHECK(composed[4] == doctest::Approx(w.torque.y).epsilon(1e-9));
    CHECK(composed[5] == doctest::Approx(w.torque.z).epsilon(1e-9));
  }
}

TEST_CASE("deadband-sized forces map to zero command") {
  const ThrusterLayout layout = ThrusterLayout::defaultLayout();
  const AllocationResult r = layout.allocate({{0, 0, 1e-4}, {}});
  for (double a : r.command.a) CHECK(a == 0.0);
}

TEST_CASE("wrenchFromCommand applies the thrust curve per thruster") {
  const ThrusterLayout layout = ThrusterLayout::defaultLayout();
  ThrusterCommand cmd;
  cmd.a = {0.5, 0.5, 0.5, 0.5, 0, 0, 0, 0};  // horizontal ring forward
  const Wrench w = layout.wrenchFromCommand(cmd);
  CHECK(std::abs(w.force.z) < 1e-12);
  // 4 thrusters at 45 degrees, each 12.7 N: net surge 4 * tau * cos45.
  const double tau = thrustFromCommand(0.5);
  CHECK(w.force.x == doctest::Approx(4.0 * tau * std::cos(kPi / 4)));
}
