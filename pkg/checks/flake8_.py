#!/usr/bin/env python3
import sys

import checks_superstaq

# the examples directory holds third-party reference code
EXCLUDE = ["examples/*"]

if __name__ == "__main__":
    exit(checks_superstaq.flake8_.run(*sys.argv[1:], exclude=EXCLUDE))
