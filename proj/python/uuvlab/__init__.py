"""Python surface of the UUV attitude-control simulation core."""

from uuvlab._core import (
    SimEnv,
    allocate_wrench,
    command_from_thrust,
    compute_reward,
    euler_to_quat,
    quat_angle,
    quat_mul,
    quat_to_euler,
    thrust_from_command,
    wrap_angle,
    wrench_from_command,
)

__all__ = [
    "SimEnv",
    "allocate_wrench",
    "command_from_thrust",
    "compute_reward",
    "euler_to_quat",
    "quat_angle",
    "quat_mul",
    "quat_to_euler",
    "thrust_from_command",
    "wrap_angle",
    "wrench_from_command",
]
