import cmath
import itertools
import math

import numpy as np
import pytest

from mubforge.backend import KERNELS


def brute_force_F(d, extra, angles):
    """Independent F: build every free vector with cmath and loop over unordered pairs."""
    angles = list(angles)
    vecs, grp = [], []
    pos = 0
    first = True
    for b, x in enumerate(extra):
        for _ in range(x):
            if first:
                comps = [1 / math.sqrt(d)] * d
                first = False
            else:
                comps = [1 / math.sqrt(d)] + [cmath.exp(1j * a) / math.sqrt(d) for a in angles[pos:pos + d - 1]]
                pos += d - 1
            vecs.append(comps)
            grp.append(b)
    assert pos == len(angles)
    F = 0.0
    for i, k in itertools.combinations(range(len(vecs)), 2):
        ov = abs(sum(u.conjugate() * w for u, w in zip(vecs[i], vecs[k])))
        target = 0.0 if grp[i] == grp[k] else 1 / math.sqrt(d)
        F += (ov - target) ** 2
    return F


@pytest.fixture(params=sorted(KERNELS))
def kernel(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20081010)


_ACCEPTANCE_LINES = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion, then assert on it."""

    def record(n, ok, detail):
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
