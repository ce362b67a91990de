#!/usr/bin/env python3
"""Flux-limiter sweep: L1 distance to the homogeneous-limit profile at t = 1.

As nu grows the equation approaches its homogeneous limit and the printed
errors shrink monotonically.

Usage: python scripts/nu_sweep.py [--values 1,10,100] [--n N] [--out DIR]
"""
import sys

from fluxlag.cli import main

if __name__ == "__main__":
    args = sys.argv[1:]
    if "--t" not in args:
        args = ["--t", "1.0", *args]
    sys.exit(main(["sweep-nu", *args]))
