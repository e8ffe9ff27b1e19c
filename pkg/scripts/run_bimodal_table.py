#!/usr/bin/env python3
"""Run the bimodal-table experiment with its default configuration.

Extra command-line flags are forwarded, e.g.:
    python3 scripts/run_bimodal_table.py --seed 1 --out /tmp/bimodal_table.csv
"""
import sys

from exmcmc.cli import main

if __name__ == "__main__":
    sys.exit(main(["bimodal-table", *sys.argv[1:]]))
