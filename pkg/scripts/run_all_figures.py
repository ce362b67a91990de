#!/usr/bin/env python3
"""Run every figure preset in sequence.

Usage: python scripts/run_all_figures.py [--n N] [--out DIR]

Full-resolution runs take minutes each on one core; pass --n 200 for a
quick desk-scale pass.
"""
import sys

from fluxlag.cli import main
from fluxlag.experiments import FIGURE_IDS

if __name__ == "__main__":
    extra = sys.argv[1:]
    for fid in FIGURE_IDS:
        code = main(["figure", fid, *extra])
        if code != 0:
            sys.exit(code)
    sys.exit(0)
