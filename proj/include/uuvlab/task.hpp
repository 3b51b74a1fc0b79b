#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "uuvlab/quat.hpp"

namespace uuvlab {

enum class TaskKind { Task1, Task2, HoldAttitude };

TaskKind taskKindFromString(const std::string& s);
std::string toString(TaskKind k);

enum class Axis { Roll = 0, Pitch = 1, Yaw = 2 };

/// Reference-trajectory specification: per-axis amplitude and a set of
/// signed frequencies summed as s(t) = A * sum_f sin(2 pi f t).
struct TaskSpec {
  TaskKind kind = TaskKind::Task2;
  std::array<double, 3> amplitude{};             // rad, [roll, pitch, yaw]
  std::array<std::vector<double>, 3> frequencies;  // Hz, signed
  double duration = 20.0;                        // s

  static TaskSpec task1();
  static TaskSpec task2();
  static TaskSpec holdAttitude();
  static TaskSpec make(TaskKind kind);
};

/// Raw (pre-wrap) reference angle for one axis at time t.
double reference(const TaskSpec& task, Axis axis, double t);

/// All three reference angles at time t.
EulerAngles referenceAngles(const TaskSpec& task, double t);

}  // namespace uuvlab
