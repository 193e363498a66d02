"""CMake-driven build of the polydeq._core extension.

The native build needs GMP, MPFR and Eigen development headers; see the
README. Metadata lives in pyproject.toml.
"""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str, sourcedir: str = "") -> None:
        super().__init__(name, sources=[])
        self.sourcedir = os.fspath(Path(sourcedir).resolve())


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        ext_fullpath = Path.cwd() / self.get_ext_fullpath(ext.name)
        ext_fullpath.parent.mkdir(parents=True, exist_ok=True)

        build_temp = Path(self.build_temp) / ext.name
        build_temp.mkdir(parents=True, exist_ok=True)

        cfg = "Debug" if int(os.environ.get("DEBUG", "0")) else "Release"
        cmake_args = [
            f"-DCMAKE_BUILD_TYPE={cfg}",
            f"-DPython3_EXECUTABLE={sys.executable}",
            "-DPOLYDEQ_BUILD_TESTS=OFF",
        ]
        try:
            import pybind11

            cmake_args.append(f"-Dpybind11_DIR={pybind11.get_cmake_dir()}")
        except ImportError:
            pass

        subprocess.run(
            ["cmake", ext.sourcedir, *cmake_args], cwd=build_temp, check=True
        )
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_core", "--parallel"],
            cwd=build_temp,
            check=True,
        )

        built = sorted((build_temp / "python" / "polydeq").glob("_core*"))
        if not built:
            raise RuntimeError("CMake build produced no _core extension")
        self.copy_file(built[0], ext_fullpath)


setup(
    ext_modules=[CMakeExtension("polydeq._core")],
    cmdclass={"build_ext": CMakeBuild},
)
