"""Readers for the solver's on-disk artifacts, with strict schema checks."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SNAPSHOT_HEADER = "t,eta,x,u,psi_eta"
METRICS_KEYS = (
    "t",
    "l1_paper",
    "l1_quadrature",
    "support_left",
    "support_right",
    "u_max",
    "max_interior_abs_psi_eta",
    "liftoff_left",
    "liftoff_right",
    "w_max",
)


class SchemaError(ValueError):
    """The on-disk artifact does not match the contract."""


def read_snapshot(path: Path) -> dict:
    """Parse one snapshot CSV into arrays; bit-exact header check."""
    path = Path(path)
    raw = path.read_bytes()
    first, _, rest = raw.partition(b"\n")
    header = first.decode("ascii", errors="replace").rstrip("\r")
    if header != SNAPSHOT_HEADER:
        raise SchemaError(
            f"{path}: header mismatch: expected {SNAPSHOT_HEADER!r}, got {header!r}"
        )
    rows = []
    for lineno, line in enumerate(rest.decode("ascii").splitlines(), start=2):
        parts = line.split(",")
        if len(parts) != 5:
            raise SchemaError(f"{path}:{lineno}: expected 5 fields, got {len(parts)}")
        try:
            rows.append([float(v) for v in parts])
        except ValueError as exc:
            raise SchemaError(f"{path}:{lineno}: non-numeric field ({exc})") from exc
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    data = np.asarray(rows)
    return {
        "t": float(data[0, 0]),
        "eta": data[:, 1],
        "x": data[:, 2],
        "u": data[:, 3],
        "psi_eta": data[:, 4],
    }


def read_metrics(path: Path) -> list[dict]:
    """Parse metrics NDJSON; every row must carry the full key set."""
    path = Path(path)
    rows = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}:{lineno}: not valid JSON ({exc})") from exc
        missing = [k for k in METRICS_KEYS if k not in row]
        if missing:
            raise SchemaError(f"{path}:{lineno}: missing keys {missing}")
        rows.append(row)
    if not rows:
        raise SchemaError(f"{path}: no metric rows")
    return rows


def read_manifest(path: Path) -> dict:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    for key in ("config", "version", "termination"):
        if key not in doc:
            raise SchemaError(f"{path}: missing manifest key {key!r}")
    return doc


@dataclass
class RunArtifacts:
    """One scenario directory: ordered snapshots plus metrics and manifest."""

    label: str
    directory: Path
    manifest: dict
    metrics: list[dict]
    snapshots: list[dict] = field(default_factory=list)


def load_run(directory: Path, label: str | None = None) -> RunArtifacts:
    directory = Path(directory)
    manifest_path = directory / "manifest.json"
    if not manifest_path.exists():
        raise FileNotFoundError(f"{directory}: no manifest.json")
    manifest = read_manifest(manifest_path)
    metrics = read_metrics(directory / "metrics.ndjson")
    snapshots = [read_snapshot(p) for p in sorted(directory.glob("snapshot_*.csv"))]
    if not snapshots:
        raise FileNotFoundError(f"{directory}: no snapshot_*.csv files")
    return RunArtifacts(
        label=label or directory.name,
        directory=directory,
        manifest=manifest,
        metrics=metrics,
        snapshots=snapshots,
    )


def discover_runs(directory: Path) -> list[RunArtifacts]:
    """A run directory, or a directory of run subdirectories (multi-panel)."""
    directory = Path(directory)
    if not directory.exists():
        raise FileNotFoundError(f"{directory}: no such directory")
    if (directory / "manifest.json").exists():
        return [load_run(directory)]
    subruns = sorted(
        p for p in directory.iterdir() if p.is_dir() and (p / "manifest.json").exists()
    )
    if not subruns:
        raise FileNotFoundError(f"{directory}: no manifest.json here or in subdirectories")
    return [load_run(p) for p in subruns]
