import numpy as np
import pytest

from artbg import DirectionGrid, Disk, MediumSpec, ZIMBackground, background_farfield, farfield_matrix

_CRITERIA = []


@pytest.fixture
def criterion():
    """Record a PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(number, ok, detail):
        _CRITERIA.append((number, bool(ok), detail))
        assert ok, f"criterion {number}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(_CRITERIA, key=lambda c: c[0]):
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


class FarfieldCache:
    """Memoised data and background farfields on the unit disk (h = 1/20, N = 64)."""

    def __init__(self, h=0.05, N=64):
        self.h = h
        self.grid = DirectionGrid(N)
        self.disk = Disk((0.0, 0.0), 1.0)
        self._data = {}
        self._bg = {}

    def data(self, n, k):
        key = (n, round(float(k), 10))
        if key not in self._data:
            self._data[key] = farfield_matrix(MediumSpec.constant(self.disk, n), k, self.grid, self.grid, self.h)
        return self._data[key]

    def background(self, spec, k):
        key = (spec.describe(), round(float(k), 10))
        if key not in self._bg:
            self._bg[key] = background_farfield(spec, k, self.grid, self.grid, self.h)
        return self._bg[key]


@pytest.fixture(scope="session")
def disk_cache():
    return FarfieldCache()


@pytest.fixture(scope="session")
def zim_disk():
    return ZIMBackground(Disk((0.0, 0.0), 1.0))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
