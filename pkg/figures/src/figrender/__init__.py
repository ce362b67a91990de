"""Render solver run artifacts (snapshot CSV, metrics NDJSON, manifest JSON)
to publication-style PNG figures.

This package talks to the solver only through its on-disk contract; it has
no import-time or run-time linkage to the solver code.
"""

__version__ = "0.1.0"

from .io import SchemaError, discover_runs, read_manifest, read_metrics, read_snapshot

__all__ = [
    "SchemaError",
    "discover_runs",
    "read_manifest",
    "read_metrics",
    "read_snapshot",
    "__version__",
]
