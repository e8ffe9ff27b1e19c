#!/usr/bin/env python3
"""Run the power-curve experiment with its default configuration.

Extra command-line flags are forwarded, e.g.:
    python3 scripts/run_power_curve.py --seed 1 --out /tmp/power_curve.csv
"""
import sys

from exmcmc.cli import main

if __name__ == "__main__":
    sys.exit(main(["power-curve", *sys.argv[1:]]))
