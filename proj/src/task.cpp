#include "uuvlab/task.hpp"

#include <stdexcept>

namespace uuvlab {

TaskKind taskKindFromString(const std::string& s) {
  if (s == "task1") return TaskKind::Task1;
  if (s == "task2") return TaskKind::Task2;
  if (s == "hold") return TaskKind::HoldAttitude;
  throw std::invalid_argument("unknown task kind: " + s);
}

std::string toString(TaskKind k) {
  switch (k) {
    case TaskKind::Task1: return "task1";
    case TaskKind::Task2: return "task2";
    case TaskKind::HoldAttitude: return "hold";
  }
  return "?";
}

TaskSpec TaskSpec::task2() {
  TaskSpec t;
  t.kind = TaskKind::Task2;
  t.amplitude = {0.95, 1.10, 1.35};
  t.frequencies[static_cast<int>(Axis::Roll)] = {0.15, 0.3, 0.5, -0.9, 1.8, -3.0};
  t.frequencies[static_cast<int>(Axis::Pitch)] = {-0.1, 0.2, 0.5, -1.0, 2.0, 3.5};
  t.frequencies[static_cast<int>(Axis::Yaw)] = {-0.1, 0.2, 0.4, 0.8, 1.6, -3.2};
  return t;
}

TaskSpec TaskSpec::task1() {
  // Single smooth sine per axis; amplitudes shared with Task 2, 0.1 Hz.
  TaskSpec t;
  t.kind = TaskKind::Task1;
  t.amplitude = {0.95, 1.10, 1.35};
  for (auto& f : t.frequencies) f = {0.1};
  return t;
}

TaskSpec TaskSpec::holdAttitude() {
  TaskSpec t;
  t.kind = TaskKind::HoldAttitude;
  t.amplitude = {0.0, 0.0, 0.0};
  return t;
}

TaskSpec TaskSpec::make(TaskKind kind) {
  switch (kind) {
    case TaskKind::Task1: return task1();
    case TaskKind::Task2: return task2();
    case TaskKind::HoldAttitude: return holdAttitude();
  }
  return task2();
}

double reference(const TaskSpec& task, Axis axis, double t) {
  const int i = static_cast<int>(axis);
  double s = 0.0;
  for (double f : task.frequencies[i]) {
    s += std::sin(2.0 * kPi * f * t);
  }
  return task.amplitude[i] * s;
}

EulerAngles referenceAngles(const TaskSpec& task, double t) {
  EulerAngles e;
  e.roll = reference(task, Axis::Roll, t);
  e.pitch = reference(task, Axis::Pitch, t);
  e.yaw = reference(task, Axis::Yaw, t);
  return e;
}

}  // namespace uuvlab
