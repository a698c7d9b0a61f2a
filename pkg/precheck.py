#!/usr/bin/env python3
"""
siegel_reduce - Pre-flight Check

Validates the interpreter, the numeric stack, the shipped configurations and
a small end-to-end reduction.
"""

import sys
import json
from pathlib import Path
from datetime import datetime

PROJECT_ROOT = Path(__file__).parent.resolve()


def sanitize_error_message(error_msg: str) -> str:
    """Sanitize error messages to prevent information disclosure."""
    sanitized = str(error_msg).replace(str(Path.home()), "~")
    return sanitized[:200] + "..." if len(sanitized) > 200 else sanitized


class SiegelReducePrecheck:
    def __init__(self):
        self.project_root = PROJECT_ROOT
        self.checks_passed = 0
        self.total_checks = 0

    def print_header(self):
        print("=" * 60)
        print("siegel_reduce - Health Check")
        print("=" * 60)
        print(f"Timestamp: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n")

    def check(self, description, test_func):
        """Run a check and track results."""
        self.total_checks += 1
        print(f"Checking {description}...", end=" ")
        try:
            if test_func():
                print("OK")
                self.checks_passed += 1
                return True
            print("FAILED")
            return False
        except Exception as e:
            print(f"FAILED ({sanitize_error_message(str(e))[:50]}...)")
            return False

    def check_python_version(self):
        return sys.version_info >= (3, 9)

    def check_virtual_environment(self):
        return hasattr(sys, 'real_prefix') or (hasattr(sys, 'base_prefix') and sys.base_prefix != sys.prefix)

    def check_dependencies(self):
        try:
            import numpy, scipy, pytest, hypothesis  # noqa: F401
            return True
        except ImportError:
            return False

    def check_package(self):
        sys.path.insert(0, str(self.project_root))
        import siegel_reduce
        return bool(siegel_reduce.__version__)

    def check_directories(self):
        return all((self.project_root / d).exists() for d in ('siegel_reduce', 'tests', 'data', 'logs'))

    def check_sample_configs(self):
        from siegel_reduce.cli import load_config
        configs = sorted((self.project_root / "data").glob("*.json"))
        for path in configs:
            json.loads(path.read_text(encoding='utf-8'))
            load_config(path)
        return len(configs) > 0

    def check_worked_reduction(self):
        from siegel_reduce import Subspace, TubePoint, lorentz, reduce_point
        cone = lorentz(1)
        result = reduce_point(cone, Subspace.from_columns([[0.0, 1.0]], 2), TubePoint([0.0, 0.0], [2.0, 1.0], cone))
        return abs(result.point.im[0] - 2.0) <= 1e-10 and abs(result.point.im[1]) <= 1e-10

    def check_invariant_smoke(self):
        from siegel_reduce.verify import default_suite, summarize, DEFAULT_FAMILY
        from siegel_reduce.utils import DEFAULT_TOLERANCES
        results = default_suite().run(trials=1, seed=0)
        return summarize(results, 0, 1, DEFAULT_FAMILY, DEFAULT_TOLERANCES)["passed"]

    def run_comprehensive_check(self):
        self.print_header()

        print("Python Environment:")
        self.check("Python 3.9+", self.check_python_version)
        self.check("Virtual environment", self.check_virtual_environment)
        self.check("Required dependencies", self.check_dependencies)
        self.check("siegel_reduce importable", self.check_package)

        print("\nProject Structure:")
        self.check("Required directories", self.check_directories)
        self.check("Sample configurations", self.check_sample_configs)

        print("\nNumerics:")
        self.check("Worked reduction", self.check_worked_reduction)
        self.check("Invariant suite (1 trial)", self.check_invariant_smoke)

        print("\n" + "=" * 60)
        print("Health Check Summary")
        print("=" * 60)
        success_rate = (self.checks_passed / self.total_checks) * 100
        print(f"Checks passed: {self.checks_passed}/{self.total_checks} ({success_rate:.0f}%)")

        if self.checks_passed == self.total_checks:
            print("All systems go!")
        elif self.checks_passed >= self.total_checks * 0.8:
            print("Most checks passed. Check failed items above.")
        else:
            print("Several issues detected. Run setup_env.py to fix.")

        print("\nQuick Start Command:")
        print("python -m siegel_reduce reduce --config data/lorentz_plane_vertical.json")
        return self.checks_passed == self.total_checks


if __name__ == "__main__":
    precheck = SiegelReducePrecheck()
    success = precheck.run_comprehensive_check()
    sys.exit(0 if success else 1)
