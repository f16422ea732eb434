"""Run the acceptance suite and print its PASS/FAIL table."""

from __future__ import annotations

import pathlib
import subprocess
import sys


def main() -> None:
    root = pathlib.Path(__file__).resolve().parent.parent
    cmd = [sys.executable, "-m", "pytest", "-q", str(root / "tests" / "test_acceptance.py")]
    sys.exit(subprocess.call(cmd + sys.argv[1:], cwd=root))


if __name__ == "__main__":
    main()
