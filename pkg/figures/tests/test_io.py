"""Artifact readers: strict header/schema validation."""
import json

import pytest

from figrender.io import (
    SNAPSHOT_HEADER,
    SchemaError,
    discover_runs,
    read_metrics,
    read_snapshot,
)

GOOD_CSV = "t,eta,x,u,psi_eta\n0.5,-0.4,-0.9,0.25,1\n0.5,0.4,0.9,0.25,-1\n"


def metrics_line(t=0.0):
    return json.dumps(
        {
            "t": t,
            "l1_paper": None,
            "l1_quadrature": None,
            "support_left": -1.0,
            "support_right": 1.0,
            "u_max": 1.0,
            "max_interior_abs_psi_eta": 0.0,
            "liftoff_left": 0.0,
            "liftoff_right": 0.0,
            "w_max": 0.0,
        }
    )


class TestSnapshot:
    def test_reads_good_file(self, tmp_path):
        path = tmp_path / "snapshot_000.csv"
        path.write_text(GOOD_CSV)
        snap = read_snapshot(path)
        assert snap["t"] == 0.5
        assert list(snap["x"]) == [-0.9, 0.9]

    @pytest.mark.parametrize(
        "header",
        ["t,x,u", "t,eta,x,u,psi_eta ", "T,eta,x,u,psi_eta", "t;eta;x;u;psi_eta", ""],
    )
    def test_header_must_match_bit_exactly(self, tmp_path, header):
        path = tmp_path / "snapshot_000.csv"
        path.write_text(header + "\n0.5,-0.4,-0.9,0.25,1\n")
        with pytest.raises(SchemaError, match="header"):
            read_snapshot(path)
        assert header != SNAPSHOT_HEADER

    def test_rejects_bad_rows(self, tmp_path):
        path = tmp_path / "snapshot_000.csv"
        path.write_text("t,eta,x,u,psi_eta\n0.5,-0.4,-0.9\n")
        with pytest.raises(SchemaError):
            read_snapshot(path)
        path.write_text("t,eta,x,u,psi_eta\n0.5,-0.4,-0.9,abc,1\n")
        with pytest.raises(SchemaError):
            read_snapshot(path)
        path.write_text("t,eta,x,u,psi_eta\n")
        with pytest.raises(SchemaError):
            read_snapshot(path)


class TestMetrics:
    def test_reads_rows(self, tmp_path):
        path = tmp_path / "metrics.ndjson"
        path.write_text(metrics_line(0.0) + "\n" + metrics_line(1.0) + "\n")
        rows = read_metrics(path)
        assert [r["t"] for r in rows] == [0.0, 1.0]

    def test_rejects_missing_keys(self, tmp_path):
        path = tmp_path / "metrics.ndjson"
        path.write_text('{"t": 0.0}\n')
        with pytest.raises(SchemaError, match="missing keys"):
            read_metrics(path)

    def test_rejects_bad_json(self, tmp_path):
        path = tmp_path / "metrics.ndjson"
        path.write_text("{nope\n")
        with pytest.raises(SchemaError):
            read_metrics(path)


class TestDiscovery:
    def test_missing_directory(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            discover_runs(tmp_path / "nothing")

    def test_directory_without_runs(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            discover_runs(tmp_path)
