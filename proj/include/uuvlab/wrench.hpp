#pragma once

#include "uuvlab/vec3.hpp"

namespace uuvlab {

/// Body-frame force (N) and torque (N*m).
struct Wrench {
  Vec3 force;
  Vec3 torque;

  Wrench operator+(const Wrench& o) const {
    return {force + o.force, torque + o.torque};
  }
  Wrench& operator+=(const Wrench& o) {
    force += o.force;
    torque += o.torque;
    return *this;
  }
  bool isFinite() const { return force.isFinite() && torque.isFinite(); }
};

}  // namespace uuvlab
