#!/usr/bin/env python3
"""Run the sqrt-eps experiment with its default configuration.

Extra command-line flags are forwarded, e.g.:
    python3 scripts/run_sqrt_eps.py --seed 1 --out /tmp/sqrt_eps.csv
"""
import sys

from exmcmc.cli import main

if __name__ == "__main__":
    sys.exit(main(["sqrt-eps", *sys.argv[1:]]))
