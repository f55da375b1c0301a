from __future__ import annotations

import numpy as np
import pytest

from biharm.conformal import BoundaryChart, disk_map, power_map

_ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture(scope="session")
def disk_chart():
    return BoundaryChart(disk_map())


@pytest.fixture(scope="session")
def poly_chart():
    return BoundaryChart(power_map(0.1, 3))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance():
    """Record one acceptance criterion outcome for the terminal summary."""
    def record(number: int, title: str, passed: bool, detail: str = ""):
        _ACCEPTANCE[number] = (title, bool(passed), detail)
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title} -- {detail}"
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        title, ok, detail = _ACCEPTANCE[k]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {k:>2}. {title}: {detail}")
