#!/usr/bin/env python3
"""Long-time convergence rates toward the self-similar attractors.

Runs the indicator datum for m = 1 (heat-kernel attractor) and m = 2
(self-similar porous-medium attractor) and prints the fitted slope of the
node-averaged L1 estimate over the window [5, 50].

Usage: python scripts/rate_study.py [--n N] [--t-end T]
"""
import argparse
import sys

from fluxlag.cli import main

if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=100)
    parser.add_argument("--t-end", type=float, default=50.0)
    parser.add_argument("--out", default=None)
    args = parser.parse_args()
    for m in ("1", "2"):
        print(f"m={m}:")
        argv = ["rates", "--m", m, "--n", str(args.n), "--t-end", str(args.t_end),
                "--window", f"{args.t_end / 10},{args.t_end}"]
        if args.out:
            argv += ["--out", f"{args.out}/m_{m}"]
        code = main(argv)
        if code != 0:
            sys.exit(code)
    sys.exit(0)
