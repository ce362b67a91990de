"""Generate small solver runs once per session through the public CLI.

The renderer is exercised strictly through the on-disk artifacts; the solver
is invoked as a subprocess, never imported.
"""
import subprocess
import sys

import pytest

FIGURE_IDS = [f"fig{i}" for i in range(1, 10)]

_REPORT: list[str] = []


@pytest.fixture
def criterion():
    def _report(num, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'}: criterion {num}: {detail}"
        _REPORT.append(line)
        print(line)

    return _report


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for line in _REPORT:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def runs_root(tmp_path_factory):
    root = tmp_path_factory.mktemp("runs")
    for fid in FIGURE_IDS:
        proc = subprocess.run(
            [sys.executable, "-m", "fluxlag", "figure", fid, "--n", "16", "--out", str(root)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, f"{fid}: {proc.stderr}"
    return root
