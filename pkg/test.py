#!/usr/bin/env python3
"""
linquench Test Runner

Usage:
    python test.py               # everything, acceptance-scale runs included
    python test.py quick         # skip @slow Monte Carlo runs
    python test.py slow          # only the acceptance-scale runs
    python test.py cli           # only the end-to-end command-line tests
    python test.py coverage      # coverage report (needs pytest-cov)
    python test.py failed        # re-run last failures
    python test.py sampler       # tests/test_sampler.py
    python test.py ks            # anything matching -k ks

Arguments after "--" go to pytest untouched:
    python test.py quick -- -x -q
"""

import os
import subprocess
import sys

# mode -> (pytest arguments, banner)
MODES = {
    "all": ([], "[TEST] Running all tests..."),
    "quick": (["-m", "not slow"], "[QUICK] Skipping acceptance-scale runs..."),
    "slow": (["-m", "slow"], "[SLOW] Acceptance-scale Monte Carlo runs (minutes)..."),
    "cli": (["-m", "integration"], "[CLI] Command-line integration tests..."),
    "coverage": (
        ["--cov=linquench", "--cov-report=term-missing", "--cov-report=html:coverage_html"],
        "[COVERAGE] Running tests with coverage report...",
    ),
    "failed": (["--lf"], "[RETRY] Re-running failed tests..."),
}


def build_command(args: list[str]) -> tuple[list[str], str]:
    passthrough: list[str] = []
    if "--" in args:
        split = args.index("--")
        args, passthrough = args[:split], args[split + 1:]

    mode = args[0] if args else "all"
    target = ["tests/"]
    if mode in MODES:
        extra, banner = MODES[mode]
    elif os.path.exists(f"tests/test_{mode}.py"):
        target = [f"tests/test_{mode}.py"]
        extra, banner = [], f"[MODULE] Running tests for {mode}..."
    else:
        extra, banner = ["-k", mode], f"[FILTER] Running tests matching '{mode}'..."

    cmd = [sys.executable, "-m", "pytest", *target, "--tb=short", *extra, *passthrough]
    return cmd, banner


def main() -> int:
    os.chdir(os.path.dirname(os.path.abspath(__file__)))
    cmd, banner = build_command(sys.argv[1:])
    print(banner + "\n")

    try:
        result = subprocess.run(cmd)
    except KeyboardInterrupt:
        print("\n\n[ABORT] Tests interrupted by user")
        return 1

    print("\n" + "=" * 60)
    if result.returncode == 0:
        print("[PASS] All tests passed!")
    else:
        print(f"[FAIL] Tests failed (exit code: {result.returncode})")
    print("=" * 60)
    return result.returncode


if __name__ == "__main__":
    sys.exit(main())
