"""Scenario configuration, figure presets, and on-disk persistence.

A scenario is one solver run.  ``run_scenario`` writes, into the scenario's
output directory:

  snapshot_000.csv ...   header exactly ``t,eta,x,u,psi_eta``, rows for the
                         interior nodes only, 17 significant digits, LF
  metrics.ndjson         one MetricsRecord object per snapshot
  manifest.json          config echo, version, timestamps, termination
"""
from __future__ import annotations

import datetime as _dt
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .densities import DensityError, make_density
from .dynamics import SchemeParams, SolverError, run
from .mesh import MeshError, build_graded_mesh, build_uniform_mesh
from .metrics import metrics_record
from .reference import make_reference
from .transform import init_pseudo_inverse, reconstruct

FIGURE_IDS = [f"fig{i}" for i in range(1, 10)]
_REFERENCES = ("u_hom", "selfsim_heat", "barenblatt")


class ConfigError(ValueError):
    """Schema violation; the message carries a JSON-pointer-style path."""


@dataclass
class Scenario:
    name: str
    params: SchemeParams
    mesh_spec: dict
    initial_spec: dict
    t_end: float
    snapshot_times: list[float]
    reference: str | None
    output_dir: str

    def build_mesh(self):
        spec = self.mesh_spec
        if spec["kind"] == "uniform":
            return build_uniform_mesh(spec["n"])
        return build_graded_mesh(spec["n"], spec["focus"], spec["ratio"])

    def build_density(self):
        return make_density(self.initial_spec["preset"], self.initial_spec.get("params"))

    def to_config(self) -> dict:
        return {
            "name": self.name,
            "m": self.params.m,
            "nu": self.params.nu,
            "alpha_cfl": self.params.alpha_cfl,
            "dt_max": self.params.dt_max,
            "mesh": dict(self.mesh_spec),
            "initial": {
                "preset": self.initial_spec["preset"],
                "params": dict(self.initial_spec.get("params") or {}),
            },
            "t_end": self.t_end,
            "snapshot_times": list(self.snapshot_times),
            "reference": self.reference,
            "output_dir": self.output_dir,
        }


# ---------------------------------------------------------------------------
# config loading (closed schema)

def _expect(cond, path, msg):
    if not cond:
        raise ConfigError(f"{path}: {msg}")


def _check_keys(obj, path, allowed, required):
    _expect(isinstance(obj, dict), path, "expected an object")
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"{path}/{key}: unknown key")
    for key in required:
        if key not in obj:
            raise ConfigError(f"{path}/{key}: missing required key")


def _number(obj, path, default=None):
    if default is not None and obj is None:
        return default
    _expect(isinstance(obj, (int, float)) and not isinstance(obj, bool), path, "expected a number")
    return float(obj)


def load_config(document: str) -> Scenario:
    """Parse and validate a JSON scenario document (closed schema)."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"/: not valid JSON ({exc})") from exc
    _check_keys(
        doc,
        "",
        allowed={
            "name", "m", "nu", "alpha_cfl", "dt_max", "mesh", "initial",
            "t_end", "snapshot_times", "reference", "output_dir",
        },
        required={"name", "initial", "t_end"},
    )
    _expect(isinstance(doc["name"], str) and doc["name"], "/name", "expected a nonempty string")
    m = _number(doc.get("m", 1.0), "/m")
    _expect(m >= 1.0, "/m", "must be >= 1")
    nu = _number(doc.get("nu", 1.0), "/nu")
    _expect(nu > 0.0, "/nu", "must be > 0")
    alpha = _number(doc.get("alpha_cfl", 8.0), "/alpha_cfl")
    _expect(alpha > 2.0, "/alpha_cfl", "must be > 2")
    dt_max = doc.get("dt_max")
    if dt_max is not None:
        dt_max = _number(dt_max, "/dt_max")
        _expect(dt_max > 0.0, "/dt_max", "must be > 0 when given")

    mesh = doc.get("mesh", {"kind": "uniform", "n": 1000})
    _check_keys(mesh, "/mesh", allowed={"kind", "n", "focus", "ratio"}, required={"kind", "n"})
    _expect(mesh["kind"] in ("uniform", "graded"), "/mesh/kind", "expected 'uniform' or 'graded'")
    _expect(
        isinstance(mesh["n"], int) and not isinstance(mesh["n"], bool), "/mesh/n", "expected an integer"
    )
    _expect(mesh["n"] >= 4 and mesh["n"] % 2 == 0, "/mesh/n", "must be even and >= 4")
    if mesh["kind"] == "graded":
        _expect("focus" in mesh and "ratio" in mesh, "/mesh", "graded meshes need focus and ratio")
        _expect(isinstance(mesh["focus"], list), "/mesh/focus", "expected a list of numbers")
        _expect(_number(mesh["ratio"], "/mesh/ratio") > 1.0, "/mesh/ratio", "must be > 1")

    initial = doc["initial"]
    _check_keys(initial, "/initial", allowed={"preset", "params"}, required={"preset"})
    _expect(isinstance(initial["preset"], str), "/initial/preset", "expected a string")

    t_end = _number(doc["t_end"], "/t_end")
    _expect(t_end >= 0.0, "/t_end", "must be >= 0")
    snaps = doc.get("snapshot_times", [])
    _expect(isinstance(snaps, list), "/snapshot_times", "expected a list of numbers")
    snaps = [_number(s, f"/snapshot_times/{i}") for i, s in enumerate(snaps)]
    _expect(snaps == sorted(snaps), "/snapshot_times", "must be sorted")
    _expect(all(0.0 <= s <= t_end for s in snaps), "/snapshot_times", "must lie in [0, t_end]")

    reference = doc.get("reference")
    if reference is not None:
        _expect(reference in _REFERENCES, "/reference", f"expected one of {_REFERENCES} or null")
        _expect(reference != "barenblatt" or m > 1, "/reference", "barenblatt needs m > 1")

    output_dir = doc.get("output_dir", str(Path(default_output_root()) / doc["name"]))
    _expect(isinstance(output_dir, str) and output_dir, "/output_dir", "expected a nonempty string")

    try:
        params = SchemeParams(m=m, nu=nu, alpha_cfl=alpha, dt_max=dt_max)
    except ValueError as exc:
        raise ConfigError(f"/: {exc}") from exc
    scenario = Scenario(
        name=doc["name"],
        params=params,
        mesh_spec=dict(mesh),
        initial_spec={"preset": initial["preset"], "params": initial.get("params")},
        t_end=t_end,
        snapshot_times=snaps,
        reference=reference,
        output_dir=output_dir,
    )
    # fail fast on unusable mesh/density specs
    try:
        scenario.build_mesh()
    except MeshError as exc:
        raise ConfigError(f"/mesh: {exc}") from exc
    try:
        scenario.build_density()
    except (DensityError, TypeError) as exc:
        raise ConfigError(f"/initial: {exc}") from exc
    return scenario


def default_output_root() -> str:
    return os.environ.get("FLUXLAG_OUT", "out")


# ---------------------------------------------------------------------------
# figure presets

def _log_times(t0, t1, k):
    return [float(f"{t:.6g}") for t in np.geomspace(t0, t1, k)]


def _scenario(name, *, m, nu=1.0, mesh, initial, t_end, snaps, reference=None,
              dt_max=None, out=None):
    return Scenario(
        name=name,
        params=SchemeParams(m=m, nu=nu, alpha_cfl=8.0, dt_max=dt_max),
        mesh_spec=mesh,
        initial_spec=initial,
        t_end=t_end,
        snapshot_times=snaps,
        reference=reference,
        output_dir=out or str(Path(default_output_root()) / name),
    )


def preset(figure_id: str, n: int | None = None, out_root: str | None = None) -> list[Scenario]:
    """Scenarios reproducing one of the nine reported experiments.

    Multi-panel figures (fig4, fig5, fig9) expand to several scenarios.
    ``n`` overrides the node count, ``out_root`` the output directory root.
    """
    if figure_id not in FIGURE_IDS:
        raise ConfigError(f"/figure: unknown figure id {figure_id!r}")
    root = Path(out_root or default_output_root()) / figure_id

    def graded(nn, focus, ratio):
        return {"kind": "graded", "n": nn, "focus": list(focus), "ratio": ratio}

    def uniform(nn):
        return {"kind": "uniform", "n": nn}

    triangle = {"preset": "triangle", "params": None}
    sqrt_bump = {"preset": "composite_sqrt", "params": None}
    steps = {"preset": "composite_step", "params": None}
    box = {"preset": "indicator", "params": None}

    if figure_id == "fig1":
        nn = n or 1000
        return [_scenario("fig1", m=1.0, mesh=graded(nn, (-0.5, 0.5), 1.004),
                          initial=triangle, t_end=1.0,
                          snaps=[0.05, 0.1, 0.2, 0.4, 0.7, 1.0],
                          out=str(root))]
    if figure_id == "fig2":
        nn = n or 1000
        return [_scenario("fig2", m=1.5, mesh=graded(nn, (-0.5, 0.5), 1.002),
                          initial=triangle, t_end=1.2,
                          snaps=[0.02, 0.05, 0.1, 0.2, 0.35, 0.5, 0.7, 0.9, 1.2],
                          out=str(root))]
    if figure_id == "fig3":
        nn = n or 1000
        return [_scenario("fig3", m=3.0, mesh=graded(nn, (-0.5, 0.5), 1.004),
                          initial=triangle, t_end=3.0,
                          snaps=[0.05, 0.2, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0],
                          out=str(root))]
    if figure_id == "fig4":
        nn = n or 1000
        mesh = graded(nn, (-0.5, -0.375, 0.375, 0.5), 1.006)
        return [
            _scenario("fig4_m1", m=1.0, mesh=mesh, initial=sqrt_bump, t_end=1.0,
                      snaps=[0.01, 0.05, 0.1, 0.25, 0.5, 1.0], out=str(root / "m_1")),
            _scenario("fig4_m4", m=4.0, mesh=mesh, initial=sqrt_bump, t_end=1.0,
                      snaps=[0.01, 0.05, 0.1, 0.25, 0.5, 1.0], out=str(root / "m_4")),
        ]
    if figure_id == "fig5":
        nn = n or 1000
        mesh = graded(nn, (-0.5, -0.375, 0.375, 0.5), 1.006)
        return [
            _scenario("fig5_m1", m=1.0, mesh=mesh, initial=steps, t_end=0.5,
                      snaps=[0.005, 0.02, 0.05, 0.1, 0.2, 0.35, 0.5], out=str(root / "m_1")),
            _scenario("fig5_m2", m=2.0, mesh=mesh, initial=steps, t_end=0.5,
                      snaps=[0.005, 0.02, 0.05, 0.1, 0.2, 0.35, 0.5], out=str(root / "m_2")),
        ]
    if figure_id == "fig6":
        nn = n or 100
        return [_scenario("fig6", m=1.0, mesh=uniform(nn), initial=box, t_end=50.0,
                          snaps=_log_times(0.1, 50.0, 12), reference="selfsim_heat",
                          out=str(root))]
    if figure_id == "fig7":
        nn = n or 100
        return [_scenario("fig7", m=2.0, mesh=uniform(nn), initial=box, t_end=100.0,
                          snaps=_log_times(0.1, 100.0, 14), reference="barenblatt",
                          out=str(root))]
    if figure_id == "fig8":
        nn = n or 100
        return [_scenario("fig8", m=10.0, mesh=uniform(nn), initial=box, t_end=100.0,
                          snaps=_log_times(0.1, 100.0, 14), reference="barenblatt",
                          out=str(root))]
    # fig9: nu sweep against the homogeneous-limit solution
    nn = n or 200
    return [
        _scenario(f"fig9_nu{int(nu)}", m=1.0, nu=float(nu), mesh=uniform(nn),
                  initial=box, t_end=1.0, snaps=[0.1, 0.25, 0.5, 0.75, 1.0],
                  reference="u_hom", out=str(root / f"nu_{int(nu)}"))
        for nu in (1, 10, 100)
    ]


# ---------------------------------------------------------------------------
# persistence

def _write_snapshot_csv(path: Path, state, sample):
    eta = state.mesh.nodes
    lines = ["t,eta,x,u,psi_eta"]
    for i in range(1, state.mesh.n - 1):  # end nodes are never written
        lines.append(
            f"{state.t:.17g},{eta[i]:.17g},{sample.x[i]:.17g},"
            f"{sample.u[i]:.17g},{sample.psi_eta[i]:.17g}"
        )
    path.write_bytes(("\n".join(lines) + "\n").encode("ascii"))


@dataclass
class RunResult:
    scenario: Scenario
    trajectory: object
    snapshot_paths: list[Path] = field(default_factory=list)
    metrics_path: Path | None = None
    manifest_path: Path | None = None


def run_scenario(scenario: Scenario) -> RunResult:
    """Execute one scenario and persist snapshots, metrics, and a manifest.

    On a solver hard error the partial outputs are kept and the manifest
    records the termination reason before the error is re-raised.
    """
    outdir = Path(scenario.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    mesh = scenario.build_mesh()
    density = scenario.build_density()
    state = init_pseudo_inverse(density, mesh)
    ref = make_reference(scenario.reference, scenario.params.m)

    started = _dt.datetime.now(_dt.timezone.utc).isoformat()
    wall0 = time.monotonic()
    err = None
    try:
        traj = run(state, scenario.params, scenario.snapshot_times, scenario.t_end)
    except SolverError as exc:
        err = exc
        traj = exc.trajectory
    result = RunResult(scenario=scenario, trajectory=traj)

    if traj is not None:
        for idx, snap in enumerate(traj.snapshots):
            path = outdir / f"snapshot_{idx:03d}.csv"
            _write_snapshot_csv(path, snap, reconstruct(snap, scenario.params.psi_eta_cap))
            result.snapshot_paths.append(path)
        metrics_path = outdir / "metrics.ndjson"
        with metrics_path.open("w", newline="\n") as fh:
            for snap in traj.snapshots:
                fh.write(metrics_record(snap, scenario.params, ref).to_json() + "\n")
        result.metrics_path = metrics_path

    manifest = {
        "config": scenario.to_config(),
        "version": __version__,
        "started": started,
        "finished": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "wall_time_s": time.monotonic() - wall0,
        "n_steps": getattr(traj, "n_steps", 0),
        "max_abs_phi_t": getattr(traj, "max_abs_phi_t", None),
        "mesh_min_spacing": mesh.min_spacing,
        "termination": "completed" if err is None else str(err),
    }
    manifest_path = outdir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    result.manifest_path = manifest_path
    if err is not None:
        raise err
    return result
