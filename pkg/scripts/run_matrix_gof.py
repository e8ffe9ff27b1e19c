#!/usr/bin/env python3
"""Run the matrix-gof experiment with its default configuration.

Extra command-line flags are forwarded, e.g.:
    python3 scripts/run_matrix_gof.py --seed 1 --out /tmp/matrix_gof.csv
"""
import sys

from exmcmc.cli import main

if __name__ == "__main__":
    sys.exit(main(["matrix-gof", *sys.argv[1:]]))
