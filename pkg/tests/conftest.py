"""Shared test plumbing: the acceptance-criterion reporter."""
import pytest

_REPORT: list[tuple[object, bool, str]] = []


@pytest.fixture
def criterion():
    """Record one pass/fail line for an acceptance criterion.

    The lines are echoed immediately (visible with -s) and replayed in the
    terminal summary so they always appear in plain ``pytest -v`` output.
    """

    def _report(num, ok: bool, detail: str) -> bool:
        _REPORT.append((num, ok, detail))
        print(f"{'PASS' if ok else 'FAIL'}: criterion {num}: {detail}")
        return ok

    return _report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in _REPORT:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}: criterion {num}: {detail}")
