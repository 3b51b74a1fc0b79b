import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "uuvlab._core",
    sorted(glob.glob("src/*.cpp")) + ["bindings/module.cpp"],
    include_dirs=["include", "vendor", "/usr/include/eigen3"],
    cxx_std=20,
)

setup(
    name="uuvlab",
    version="0.1.0",
    description="UUV attitude-control simulation stack "
    "(quaternion dynamics, S-Surface control, PPO)",
    packages=["uuvlab"],
    package_dir={"uuvlab": "python/uuvlab"},
    ext_modules=[ext],
    cmdclass={"build_ext": build_ext},
    python_requires=">=3.9",
)
