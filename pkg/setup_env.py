#!/usr/bin/env python3
"""
siegel_reduce - Environment Setup

Creates the virtual environment, installs the numeric stack and runs the
pre-flight check so the CLI and the test suite work straight away.
"""

import sys
import subprocess
import platform
from pathlib import Path

MIN_PYTHON = (3, 9)


# runs before numpy is installed, so the package cannot be imported here
def sanitize_error_message(error_msg: str) -> str:
    sanitized = str(error_msg).replace(str(Path.home()), "~")
    return sanitized[:200] + "..." if len(sanitized) > 200 else sanitized


class SiegelReduceSetup:
    def __init__(self):
        self.project_root = Path(__file__).parent.resolve()
        self.venv_path = self.project_root / "venv"
        self.requirements_file = self.project_root / "requirements.txt"

    def print_header(self):
        print("=" * 60)
        print(" siegel_reduce Setup")
        print("=" * 60)
        print("Setting up the numeric environment...\n")

    def check_python_version(self):
        print("Checking Python version...")
        if sys.version_info < MIN_PYTHON:
            print(f"Python {MIN_PYTHON[0]}.{MIN_PYTHON[1]}+ required. Current:", sys.version)
            sys.exit(1)
        print(f"Python {sys.version.split()[0]} OK")

    def _inside(self, path: Path, root: Path, what: str) -> Path:
        resolved = path.resolve()
        try:
            resolved.relative_to(root.resolve())
        except ValueError:
            raise ValueError(f"{what} must be inside {root.name}") from None
        return resolved

    def create_virtual_environment(self):
        if self.venv_path.exists():
            print("Virtual environment already exists")
            return
        print("Creating virtual environment...")
        venv = self._inside(self.venv_path, self.project_root, "Virtual environment path")
        subprocess.run([sys.executable, "-m", "venv", str(venv)], check=True, cwd=str(self.project_root))
        print("Virtual environment created")

    def get_bin_path(self, name: str) -> Path:
        if platform.system() == "Windows":
            return self.venv_path / "Scripts" / name
        return self.venv_path / "bin" / name

    def install_dependencies(self):
        print("Installing dependencies (numpy, scipy, pytest, hypothesis)...")
        pip = self._inside(self.get_bin_path("pip"), self.venv_path, "Pip path")
        req = self._inside(self.requirements_file, self.project_root, "Requirements file")
        subprocess.run([str(pip), "install", "--upgrade", "pip"],
                       check=True, capture_output=True, cwd=str(self.project_root))
        subprocess.run([str(pip), "install", "-r", str(req)],
                       check=True, capture_output=True, cwd=str(self.project_root))
        print("Dependencies installed")

    def create_directories(self):
        print("Creating required directories...")
        (self.project_root / "logs").mkdir(mode=0o750, exist_ok=True)
        print("Directories created")

    def run_precheck(self) -> bool:
        print("Running pre-flight check...")
        python = self._inside(self.get_bin_path("python"), self.venv_path, "Interpreter path")
        result = subprocess.run([str(python), str(self.project_root / "precheck.py")], cwd=str(self.project_root))
        return result.returncode == 0

    def show_activation_instructions(self):
        print("\n" + "=" * 60)
        print(" Setup Complete!")
        print("=" * 60)
        activate_cmd = "venv\\Scripts\\activate" if platform.system() == "Windows" else "source venv/bin/activate"
        print("\n Next Steps:")
        print("1. Activate virtual environment:")
        print(f"   {activate_cmd}")
        print("\n2. Reduce the worked example:")
        print("   python -m siegel_reduce reduce --config data/lorentz_plane_vertical.json")
        print("\n3. Run the invariant suite and the tests:")
        print("   python -m siegel_reduce verify --trials 20")
        print("   pytest")

    def run_setup(self):
        try:
            self.print_header()
            self.check_python_version()
            self.create_virtual_environment()
            self.install_dependencies()
            self.create_directories()
            precheck_ok = self.run_precheck()
            self.show_activation_instructions()
            if not precheck_ok:
                print("\n Some checks failed - see messages above")
        except subprocess.CalledProcessError as e:
            print(f" Setup failed: {sanitize_error_message(str(e))}")
            sys.exit(1)
        except KeyboardInterrupt:
            print("\n Setup cancelled by user")
            sys.exit(1)
        except Exception as e:
            print(f" Unexpected error: {sanitize_error_message(str(e))}")
            sys.exit(1)


if __name__ == "__main__":
    SiegelReduceSetup().run_setup()
