#!/usr/bin/env python3
"""Run the pinfty experiment with its default configuration.

Extra command-line flags are forwarded, e.g.:
    python3 scripts/run_pinfty.py --seed 1 --out /tmp/pinfty.csv
"""
import sys

from exmcmc.cli import main

if __name__ == "__main__":
    sys.exit(main(["pinfty", *sys.argv[1:]]))
