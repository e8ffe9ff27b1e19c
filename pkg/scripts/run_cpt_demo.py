#!/usr/bin/env python3
"""Run the cpt-demo experiment with its default configuration.

Extra command-line flags are forwarded, e.g.:
    python3 scripts/run_cpt_demo.py --seed 1 --out /tmp/cpt_demo.csv
"""
import sys

from exmcmc.cli import main

if __name__ == "__main__":
    sys.exit(main(["cpt-demo", *sys.argv[1:]]))
