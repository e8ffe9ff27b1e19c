#!/usr/bin/env python3
"""Run the consistency experiment with its default configuration.

Extra command-line flags are forwarded, e.g.:
    python3 scripts/run_consistency.py --seed 1 --out /tmp/consistency.csv
"""
import sys

from exmcmc.cli import main

if __name__ == "__main__":
    sys.exit(main(["consistency", *sys.argv[1:]]))
