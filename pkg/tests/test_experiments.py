"""Scenario configs, figure presets, and on-disk artifacts."""
import json

import numpy as np
import pytest

import fluxlag.experiments as experiments
from fluxlag.dynamics import SolverError, Trajectory
from fluxlag.experiments import (
    FIGURE_IDS,
    ConfigError,
    load_config,
    preset,
    run_scenario,
)

MINIMAL = {"name": "tiny", "initial": {"preset": "indicator"}, "t_end": 0.01}


def small_scenario(tmp_path, **overrides):
    doc = {
        **MINIMAL,
        "mesh": {"kind": "uniform", "n": 16},
        "snapshot_times": [0.005],
        "output_dir": str(tmp_path / "run"),
    }
    doc.update(overrides)
    return load_config(json.dumps(doc))


class TestLoadConfig:
    def test_minimal_defaults(self):
        sc = load_config(json.dumps(MINIMAL))
        assert sc.params.m == 1.0 and sc.params.nu == 1.0 and sc.params.alpha_cfl == 8.0
        assert sc.params.dt_max is None
        assert sc.mesh_spec == {"kind": "uniform", "n": 1000}
        assert sc.snapshot_times == []
        assert sc.reference is None
        assert sc.output_dir.endswith("tiny")

    @pytest.mark.parametrize(
        "mutate, path_fragment",
        [
            (lambda d: d.update(bogus=1), "/bogus"),
            (lambda d: d.pop("name"), "/name"),
            (lambda d: d.update(m=0.5), "/m"),
            (lambda d: d.update(nu=0), "/nu"),
            (lambda d: d.update(alpha_cfl=2.0), "/alpha_cfl"),
            (lambda d: d.update(dt_max=-1.0), "/dt_max"),
            (lambda d: d.update(mesh={"kind": "exotic", "n": 16}), "/mesh/kind"),
            (lambda d: d.update(mesh={"kind": "uniform", "n": 15}), "/mesh/n"),
            (lambda d: d.update(mesh={"kind": "graded", "n": 16}), "/mesh"),
            (lambda d: d.update(snapshot_times=[0.02, 0.01]), "/snapshot_times"),
            (lambda d: d.update(snapshot_times=[5.0]), "/snapshot_times"),
            (lambda d: d.update(reference="plateau"), "/reference"),
            (lambda d: d.update(reference="barenblatt"), "/reference"),  # needs m > 1
            (lambda d: d.update(initial={"preset": "mystery"}), "/initial"),
            (lambda d: d.update(initial={"preset": "indicator", "junk": 1}), "/initial/junk"),
            (lambda d: d.update(t_end=-1.0), "/t_end"),
        ],
    )
    def test_schema_errors_carry_json_pointer_paths(self, mutate, path_fragment):
        doc = json.loads(json.dumps(MINIMAL))
        mutate(doc)
        with pytest.raises(ConfigError) as err:
            load_config(json.dumps(doc))
        assert path_fragment in str(err.value)

    def test_not_json(self):
        with pytest.raises(ConfigError):
            load_config("{nope")

    def test_graded_mesh_accepted(self):
        doc = {**MINIMAL, "mesh": {"kind": "graded", "n": 16, "focus": [-0.5, 0.5], "ratio": 1.1}}
        sc = load_config(json.dumps(doc))
        assert sc.build_mesh().n == 16

    def test_unbuildable_mesh_is_a_config_error(self):
        doc = {**MINIMAL, "mesh": {"kind": "graded", "n": 16, "focus": [0.1], "ratio": 1.1}}
        with pytest.raises(ConfigError) as err:
            load_config(json.dumps(doc))
        assert "/mesh" in str(err.value)


class TestPresets:
    def test_unknown_figure(self):
        with pytest.raises(ConfigError):
            preset("fig10")

    @pytest.mark.parametrize("fid", FIGURE_IDS)
    def test_every_preset_is_well_formed(self, fid):
        scenarios = preset(fid, n=16, out_root="someroot")
        assert scenarios
        for sc in scenarios:
            assert sc.mesh_spec["n"] == 16
            assert sc.output_dir.startswith("someroot")
            sc.build_mesh()
            sc.build_density()
            assert all(0 <= s <= sc.t_end for s in sc.snapshot_times)

    def test_multi_panel_figures_expand(self):
        assert len(preset("fig4")) == 2
        assert len(preset("fig5")) == 2
        assert {s.params.nu for s in preset("fig9")} == {1.0, 10.0, 100.0}
        assert len(preset("fig1")) == 1

    def test_config_round_trip(self):
        for sc in preset("fig9", n=16, out_root="r"):
            again = load_config(json.dumps(sc.to_config()))
            assert again.to_config() == sc.to_config()


class TestRunScenario:
    def test_artifacts_on_disk(self, tmp_path):
        sc = small_scenario(tmp_path)
        result = run_scenario(sc)
        outdir = tmp_path / "run"
        # initial state + snapshot + t_end
        names = sorted(p.name for p in outdir.glob("snapshot_*.csv"))
        assert names == ["snapshot_000.csv", "snapshot_001.csv", "snapshot_002.csv"]
        assert (outdir / "metrics.ndjson").exists()
        assert (outdir / "manifest.json").exists()
        assert result.metrics_path == outdir / "metrics.ndjson"

    def test_snapshot_csv_contract(self, tmp_path):
        sc = small_scenario(tmp_path)
        run_scenario(sc)
        raw = (tmp_path / "run" / "snapshot_001.csv").read_bytes()
        assert b"\r" not in raw and raw.endswith(b"\n")
        lines = raw.decode("ascii").splitlines()
        assert lines[0] == "t,eta,x,u,psi_eta"
        assert len(lines) == 1 + (16 - 2)  # interior nodes only
        rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
        assert np.all(rows[:, 0] == 0.005)  # exact snapshot time
        assert np.all(np.diff(rows[:, 1]) > 0)  # eta strictly increasing
        assert np.all(np.diff(rows[:, 2]) > 0)  # x strictly increasing
        assert np.all(rows[:, 3] >= 0)

    def test_metrics_ndjson_one_row_per_snapshot(self, tmp_path):
        sc = small_scenario(tmp_path, reference="selfsim_heat")
        run_scenario(sc)
        lines = (tmp_path / "run" / "metrics.ndjson").read_text().splitlines()
        assert len(lines) == 3
        rows = [json.loads(ln) for ln in lines]
        assert [r["t"] for r in rows] == [0.0, 0.005, 0.01]
        assert rows[0]["l1_paper"] is None  # reference undefined at t = 0
        assert rows[1]["l1_paper"] > 0

    def test_manifest_echoes_loadable_config(self, tmp_path):
        sc = small_scenario(tmp_path)
        run_scenario(sc)
        manifest = json.loads((tmp_path / "run" / "manifest.json").read_text())
        again = load_config(json.dumps(manifest["config"]))
        assert again.to_config() == sc.to_config()
        assert manifest["termination"] == "completed"
        assert manifest["n_steps"] > 0
        assert manifest["mesh_min_spacing"] == pytest.approx(1.0 / 15)

    def test_byte_identical_reruns(self, tmp_path):
        a = small_scenario(tmp_path, output_dir=str(tmp_path / "a"))
        b = small_scenario(tmp_path, output_dir=str(tmp_path / "b"))
        run_scenario(a)
        run_scenario(b)
        for name in ["snapshot_000.csv", "snapshot_001.csv", "snapshot_002.csv", "metrics.ndjson"]:
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_partial_outputs_survive_solver_failure(self, tmp_path, monkeypatch):
        sc = small_scenario(tmp_path)
        real_run = experiments.run

        def failing_run(state, params, snapshot_times, t_end, log_stride=None):
            traj = real_run(state, params, snapshot_times, 0.005)
            traj.termination = "monotonicity broken at node 3, t=0.005"
            raise SolverError(traj.termination, trajectory=traj)

        monkeypatch.setattr(experiments, "run", failing_run)
        with pytest.raises(SolverError):
            run_scenario(sc)
        outdir = tmp_path / "run"
        assert (outdir / "snapshot_000.csv").exists()
        manifest = json.loads((outdir / "manifest.json").read_text())
        assert "monotonicity" in manifest["termination"]

    def test_failure_without_trajectory_still_writes_manifest(self, tmp_path, monkeypatch):
        sc = small_scenario(tmp_path)

        def failing_run(*a, **k):
            raise SolverError("degenerate state (max psi = 0) at t=0")

        monkeypatch.setattr(experiments, "run", failing_run)
        with pytest.raises(SolverError):
            run_scenario(sc)
        manifest = json.loads((tmp_path / "run" / "manifest.json").read_text())
        assert "degenerate" in manifest["termination"]
        assert manifest["n_steps"] == 0
