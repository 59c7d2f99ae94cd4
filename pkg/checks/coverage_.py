#!/usr/bin/env python3
import sys
from collections.abc import Iterable

import checks_superstaq


def run_modular(
    exclude: str | Iterable[str] = ("polyfus/__init__.py", "polyfus/*_test.py")
) -> int:
    """Check that each module of polyfus is covered by its own test file."""
    tracked_files = checks_superstaq.check_utils.get_tracked_files("polyfus/*.py")
    coverage_files = checks_superstaq.check_utils.exclude_files(tracked_files, exclude)

    exit_codes = {file: checks_superstaq.coverage_.run(file) for file in coverage_files}
    for file, exit_code in exit_codes.items():
        if exit_code:
            checks_superstaq.check_utils.warning(f"Coverage failed for {file}.")
    return sum(exit_codes.values())


if __name__ == "__main__":
    if sys.argv[1:]:
        exit(checks_superstaq.coverage_.run(*sys.argv[1:]))
    exit(run_modular())
