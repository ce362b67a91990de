#!/usr/bin/env python3
"""Run one figure preset and write its snapshots, metrics, and manifest.

Usage: python scripts/run_figure.py fig3 [--n N] [--out DIR]
"""
import sys

from fluxlag.cli import main

if __name__ == "__main__":
    sys.exit(main(["figure", *sys.argv[1:]]))
