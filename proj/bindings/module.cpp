#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uuvlab/actuation.hpp"
#include "uuvlab/env.hpp"
#include "uuvlab/eval.hpp"
#include "uuvlab/metrics.hpp"
#include "uuvlab/quat.hpp"
#include "uuvlab/trace.hpp"

namespace py = pybind11;
using namespace uuvlab;

namespace {

std::array<double, 4> quatArray(const UnitQuat& q) {
  return {q.w, q.x, q.y, q.z};
}

UnitQuat quatFrom(const std::array<double, 4>& a) {
  return UnitQuat{a[0], a[1], a[2], a[3]}.normalized();
}

/// Env plus nominal plumbing, for scripting single episodes from Python.
class SimEnv {
 public:
  SimEnv(const std::string& controller, const std::string& task,
         const std::string& drLevel, std::uint64_t seed) {
    DomainRandomizationConfig drc;
    drc.level = drLevelFromString(drLevel);
    drc.seed = seed;
    env_.emplace(VehicleParams::nominal(), drc, EpisodeConfig{},
                 TaskSpec::make(taskKindFromString(task)), RewardConfig{},
                 AttitudeController::withDefaults(
                     controllerKindFromString(controller)));
    env_->enableTrace(true);
  }

  std::array<double, 9> reset(std::uint64_t envIndex,
                              std::uint64_t episodeIndex) {
    return env_->reset(envIndex, episodeIndex).v;
  }

  py::tuple step(const std::array<double, 4>& action) {
    Action a;
    a.raw = action;
    const EnvStepResult r = env_->step(a);
    return py::make_tuple(r.obs.v, r.reward, r.done, r.truncated);
  }

  bool done() const { return env_->done(); }
  double time() const { return env_->time(); }

  py::dict metrics() const {
    const MetricsReport m = metricsFromTrace(env_->trace());
    py::dict d;
    d["mse_roll"] = m.msePerAxis[0];
    d["mse_pitch"] = m.msePerAxis[1];
    d["mse_yaw"] = m.msePerAxis[2];
    d["mse_total"] = m.mseTotal;
    d["compound_mean"] = m.compoundMean;
    d["depth_mse"] = m.depthMse;
    return d;
  }

  void writeTrace(const std::string& path) const {
    writeTraceCsv(path, env_->trace());
  }

 private:
  std::optional<Env> env_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "UUV attitude-control simulation core";

  m.def("wrap_angle", &wrapAngle, py::arg("angle"));
  m.def(
      "euler_to_quat",
      [](double roll, double pitch, double yaw) {
        return quatArray(eulerToQuat({roll, pitch, yaw}));
      },
      py::arg("roll"), py::arg("pitch"), py::arg("yaw"),
      "Z-Y-X intrinsic Euler angles to a canonical unit quaternion (w,x,y,z)");
  m.def(
      "quat_to_euler",
      [](const std::array<double, 4>& q) {
        const EulerResult r = quatToEuler(quatFrom(q));
        return py::make_tuple(r.angles.roll, r.angles.pitch, r.angles.yaw,
                              r.gimbalProximity);
      },
      py::arg("q"), "Quaternion (w,x,y,z) to (roll, pitch, yaw, gimbal_flag)");
  m.def(
      "quat_mul",
      [](const std::array<double, 4>& a, const std::array<double, 4>& b) {
        return quatArray(quatMul(quatFrom(a), quatFrom(b)));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "quat_angle",
      [](const std::array<double, 4>& a, const std::array<double, 4>& b) {
        return quatAngle(quatFrom(a), quatFrom(b));
      },
      py::arg("a"), py::arg("b"), "Geodesic rotation angle, [0, pi]");

  m.def("thrust_from_command", &thrustFromCommand, py::arg("a"),
        "T200 thrust (N) for a normalized command in [-1, 1]");
  m.def("command_from_thrust", &commandFromThrust, py::arg("tau"));
  m.def(
      "allocate_wrench",
      [](const std::array<double, 3>& force,
         const std::array<double, 3>& torque) {
        const auto layout = ThrusterLayout::defaultLayout();
        const AllocationResult r = layout.allocate(
            {{force[0], force[1], force[2]},
             {torque[0], torque[1], torque[2]}});
        return py::make_tuple(r.command.a, r.saturationFraction);
      },
      py::arg("force"), py::arg("torque"),
      "Minimum-norm 8-thruster commands for a body wrench");
  m.def(
      "wrench_from_command",
      [](const std::array<double, 8>& cmd) {
        const auto layout = ThrusterLayout::defaultLayout();
        ThrusterCommand c;
        c.a = cmd;
        const Wrench w = layout.wrenchFromCommand(c);
        return py::make_tuple(
            std::array<double, 3>{w.force.x, w.force.y, w.force.z},
            std::array<double, 3>{w.torque.x, w.torque.y, w.torque.z});
      },
      py::arg("commands"));

  m.def(
      "compute_reward",
      [](const std::array<double, 4>& q, const std::array<double, 4>& qDes,
         const std::array<double, 4>& action, double dz) {
        Action a;
        a.raw = action;
        const RewardComponents r =
            computeReward(quatFrom(q), quatFrom(qDes), a, dz, RewardConfig{});
        return py::make_tuple(r.rq, r.rp, r.rz, r.total);
      },
      py::arg("q"), py::arg("q_des"), py::arg("action"), py::arg("dz"));

  py::class_<SimEnv>(m, "SimEnv")
      .def(py::init<const std::string&, const std::string&,
                    const std::string&, std::uint64_t>(),
           py::arg("controller") = "assurface", py::arg("task") = "task2",
           py::arg("dr_level") = "ndr", py::arg("seed") = 0)
      .def("reset", &SimEnv::reset, py::arg("env_index") = 0,
           py::arg("episode_index") = 0)
      .def("step", &SimEnv::step, py::arg("action"))
      .def("done", &SimEnv::done)
      .def("time", &SimEnv::time)
      .def("metrics", &SimEnv::metrics)
      .def("write_trace", &SimEnv::writeTrace, py::arg("path"));
}
