import time

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)


@pytest.fixture(scope="session")
def preset_reports():
    """One full run of every bundled preset, with the elapsed wall time."""
    from dephasim.scenario import PRESETS, run_preset

    reports, start = {}, time.perf_counter()
    for name in sorted(PRESETS):
        reports[name] = run_preset(name)
    return reports, time.perf_counter() - start


# one pass/fail line per acceptance criterion, printed after the run
_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "test_acceptance.py::test_criterion" in report.nodeid:
        _ACCEPTANCE[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for nodeid in sorted(_ACCEPTANCE):
        name = nodeid.split("::")[-1]
        word = {"passed": "PASS", "failed": "FAIL"}.get(
            _ACCEPTANCE[nodeid], _ACCEPTANCE[nodeid].upper())
        terminalreporter.write_line(f"{word}  {name}")
