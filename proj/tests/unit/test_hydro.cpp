#include <doctest.h>

#include <cmath>

#include "uuvlab/hydro.hpp"
#include "uuvlab/rng.hpp"

using namespace uuvlab;

TEST_CASE("equivalentBox inverts the solid-box inertia") {
  const Vec3 half{0.15, 0.125, 0.10};
  const double m = 2.25;
  const EquivalentBox box =
      equivalentBox(m, VehicleParams::solidBoxInertia(m, half));
  CHECK(box.r.x == doctest::Approx(half.x).epsilon(1e-12));
  CHECK(box.r.y == doctest::Approx(half.y).epsilon(1e-12));
  CHECK(box.r.z == doctest::Approx(half.z).epsilon(1e-12));
  CHECK(box.rEq == doctest::Approx((half.x + half.y + half.z) / 3.0));
}

TEST_CASE("equivalentBox of a solid sphere gives R*sqrt(3/5)") {
  const double m = 3.0, R = 0.2;
  const double I = 0.4 * m * R * R;
  const EquivalentBox box = equivalentBox(m, {I, I, I});
  const double want = R * std::sqrt(3.0 / 5.0);
  CHECK(box.r.x == doctest::Approx(want).epsilon(1e-12));
  CHECK(box.r.y == doctest::Approx(want).epsilon(1e-12));
  CHECK(box.r.z == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("degenerate inertia triggers a validation error naming the axis") {
  CHECK_THROWS_AS(equivalentBox(1.0, {3.0, 1.0, 1.0}), ParamError);
  try {
    equivalentBox(1.0, {1.0, 5.0, 1.0});
    FAIL("expected ParamError");
  } catch (const ParamError& e) {
    CHECK(std::string(e.what()).find('y') != std::string::npos);
  }
}

TEST_CASE("dragWrench evaluates the published formula") {
  EquivalentBox box{{0.1, 0.1, 0.1}, 0.1};
  const Wrench w = dragWrench(box, {1, 0, 0}, {}, 1000.0);
  CHECK(w.force.x == doctest::Approx(-20.0));
  CHECK(w.force.y == 0.0);
  CHECK(w.force.z == 0.0);
  CHECK(w.torque.norm() == 0.0);

  // Quadratic scaling: doubling velocity quadruples the force.
  const Wrench w2 = dragWrench(box, {2, 0, 0}, {}, 1000.0);
  CHECK(w2.force.x == doctest::Approx(4.0 * w.force.x));

  // Rotational drag with distinct half-dims.
  EquivalentBox boxAniso{{0.15, 0.125, 0.10}, 0.125};
  const Wrench g = dragWrench(boxAniso, {}, {0, 0, 2.0}, 1000.0);
  const double want =
      -0.5 * 1000.0 * 0.10 *
      (std::pow(0.15, 4) + std::pow(0.125, 4)) * 2.0 * 2.0;
  CHECK(g.torque.z == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("viscousWrench evaluates the published formula") {
  EquivalentBox box{{0.1, 0.1, 0.1}, 0.1};
  const Wrench w = viscousWrench(box, {1, 0, 0}, {}, 1e-3);
  CHECK(w.force.x == doctest::Approx(-6.0 * kPi * 1e-3 * 0.1));
  const Wrench g = viscousWrench(box, {}, {0, 3, 0}, 1e-3);
  CHECK(g.torque.y == doctest::Approx(-8.0 * kPi * 1e-3 * 0.001 * 3.0));
  CHECK(viscousWrench(box, {1, 2, 3}, {4, 5, 6}, 0.0).force.norm() == 0.0);

  // Linearity.
  const Wrench a = viscousWrench(box, {0.3, -0.7, 0.2}, {1, -2, 0.5}, 1e-3);
  const Wrench b = viscousWrench(box, {0.6, -1.4, 0.4}, {2, -4, 1.0}, 1e-3);
  CHECK(b.force.x == doctest::Approx(2.0 * a.force.x));
  CHECK(b.torque.y == doctest::Approx(2.0 * a.torque.y));
}

TEST_CASE("hydrodynamic power is dissipative on random states") {
  EquivalentBox box{{0.15, 0.125, 0.10}, 0.125};
  Rng rng(13);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 v{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const Vec3 w{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const Wrench d = dragWrench(box, v, w, 1000.0);
    const Wrench vis = viscousWrench(box, v, w, 1e-3);
    const double power = v.dot(d.force) + w.dot(d.torque) +
                         v.dot(vis.force) + w.dot(vis.torque);
    CHECK(power <= 1e-15);
  }
}

TEST_CASE("restoring wrench vanishes for neutral level attitude") {
  VehicleParams p = VehicleParams::nominal();
  RigidBodyState s;  // level, cobOffset (0,0,-0.02) parallel to buoyancy
  const Wrench w = restoringWrench(s, p);
  CHECK(w.force.norm() < 1e-12);
  CHECK(w.torque.norm() < 1e-12);
}

TEST_CASE("roll of 10 degrees produces the opposing restoring torque") {
  VehicleParams p = VehicleParams::nominal();
  p.cobOffset = {0, 0, -0.1};
  RigidBodyState s;
  const double roll = 10.0 * kPi / 180.0;
  s.orientation = eulerToQuat({roll, 0, 0});
  const Wrench w = restoringWrench(s, p);
  const double want = -p.mass * p.gravity * 0.1 * std::sin(roll);
  CHECK(w.torque.x == doctest::Approx(want).epsilon(1e-9));
  CHECK(w.torque.x == doctest::Approx(-0.3833).epsilon(1e-3));
  CHECK(w.force.norm() < 1e-9);  // still neutrally buoyant
}

TEST_CASE("positive buoyancy gives the net upward world force") {
  VehicleParams p = VehicleParams::nominal();
  p.volume = 1.05 * p.mass / p.fluidDensity;
  Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    RigidBodyState s;
    s.orientation = eulerToQuat({rng.uniform(-1, 1), rng.uniform(-1.2, 1.2),
                                 rng.uniform(-3, 3)});
    const Wrench w = restoringWrench(s, p);
    const Vec3 world = s.orientation.rotate(w.force);
    // World z is down; buoyancy excess pushes up (negative z).
    CHECK(world.z ==
          doctest::Approx(-(1.05 - 1.0) * p.mass * p.gravity).epsilon(1e-9));
    CHECK(std::abs(world.x) < 1e-9);
    CHECK(std::abs(world.y) < 1e-9);
  }
}

TEST_CASE("restoring torque is zero when cobOffset is parallel to buoyancy") {
  VehicleParams p = VehicleParams::nominal();
  Rng rng(19);
  for (int i = 0; i < 50; ++i) {
    RigidBodyState s;
    s.orientation = eulerToQuat({rng.uniform(-1, 1), rng.uniform(-1.2, 1.2),
                                 rng.uniform(-3, 3)});
    // Buoyancy in the body frame points along -downBody; align the offset.
    const Vec3 downBody = s.orientation.rotateInverse({0, 0, 1});
    p.cobOffset = -0.05 * downBody;
    const Wrench w = restoringWrench(s, p);
    CHECK(w.torque.norm() < 1e-12);
  }
}
