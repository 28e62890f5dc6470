import math

import numpy as np
import pytest

from heatclust import _fallback

try:
    from heatclust import _core
except ImportError:  # extension not built
    _core = None

BACKENDS = [pytest.param(_fallback, id="python")]
if _core is not None:
    BACKENDS.append(pytest.param(_core, id="cython"))


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def taylor_expm(M, terms=30, squarings=0):
    """Truncated Taylor series sum_{k<terms} (M / 2^s)^k / k!, squared s times."""
    M = np.asarray(M, dtype=float) / 2.0 ** squarings
    n = M.shape[0]
    term = np.eye(n)
    total = np.eye(n)
    for k in range(1, terms):
        term = term @ M / k
        total = total + term
    for _ in range(squarings):
        total = total @ total
    return total


def loop_distances(coords):
    n = len(coords)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            out[i, j] = math.dist(coords[i], coords[j])
    return out


def loop_components(dist, r):
    """Components by repeated graph search, numbered by smallest member."""
    n = dist.shape[0]
    labels = [0] * n
    current = 0
    for start in range(n):
        if labels[start]:
            continue
        current += 1
        stack = [start]
        labels[start] = current
        while stack:
            i = stack.pop()
            for j in range(n):
                if not labels[j] and 0 < dist[i, j] <= r:
                    labels[j] = current
                    stack.append(j)
    return np.array(labels)


def canonical(labels):
    """Relabel so classes are numbered by first occurrence."""
    seen = {}
    return np.array([seen.setdefault(int(x), len(seen) + 1) for x in labels])


def same_partition(a, b):
    return np.array_equal(canonical(a), canonical(b))


# ---------------------------------------------------------------- acceptance summary

ACCEPTANCE = {}


def record(criterion, passed, detail):
    ACCEPTANCE[criterion] = (bool(passed), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
