"""Command-line renderer.

Usage: render --in <run-dir> --figure <fig1..fig9> --out <file.png>

Exit codes: 0 success, 1 missing/invalid inputs (including a corrupted
snapshot header).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .io import SchemaError, discover_runs
from .plots import FIGURE_STYLES, render_figure


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render", description="Render solver run artifacts to a PNG figure"
    )
    parser.add_argument("--in", dest="indir", required=True, help="run directory")
    parser.add_argument("--figure", required=True, choices=sorted(FIGURE_STYLES))
    parser.add_argument("--out", required=True, help="output PNG path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        runs = discover_runs(Path(args.indir))
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        render_figure(args.figure, runs, out)
    except (SchemaError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
