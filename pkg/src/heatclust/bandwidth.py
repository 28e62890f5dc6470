"""Cross-validated variance of the heat operator over a radius grid, and
elbow-rule bandwidth selection.

For a radius ``r`` and subsamples ``S_1..S_N`` of the sample ``S``, the
variance proxy is the mean Hilbert-Schmidt distance between the heat
operator restricted to each ``S_i`` and the full-sample heat operator.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .geometry import SubsampleSet, diameter, draw_subsamples
from .heat import build_laplacian, heat_operator, hs_distance
from .kernel import KernelSpec, evaluate_kernel_matrix

log = logging.getLogger(__name__)

ELBOW, MAX, FIXED = "elbow", "max", "fixed"
MODES = (ELBOW, MAX, FIXED)


@dataclass(frozen=True)
class RadiusGrid:
    radii: np.ndarray

    def __post_init__(self):
        radii = np.asarray(self.radii, dtype=np.float64)
        if radii.ndim != 1 or radii.size < 1:
            raise ValueError("radius grid must be a nonempty 1-d sequence")
        if np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
            raise ValueError("radii must be positive and strictly increasing")
        radii.setflags(write=False)
        object.__setattr__(self, "radii", radii)

    def __len__(self):
        return self.radii.size


@dataclass(frozen=True)
class VarianceCurve:
    grid: RadiusGrid
    values: np.ndarray
    subsamples: int
    fraction: float
    seed: object
    t: float = 1.0
    family: str = ""

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != self.grid.radii.shape:
            raise ValueError("one variance value per grid radius required")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError("variance values must be finite and nonnegative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def radii(self) -> np.ndarray:
        return self.grid.radii


@dataclass(frozen=True)
class BandwidthChoice:
    """Selected bandwidth.

    ``grid_index`` is 1-based (grid points are ``r_1 .. r_R``) and is
    ``None`` for a user-supplied bandwidth.
    """

    r: float
    grid_index: int | None
    mode: str
    warnings: tuple = field(default_factory=tuple)


def radius_grid(dist: np.ndarray, R: int = 30) -> RadiusGrid:
    """``R`` evenly spaced radii from ``diameter / R`` up to the diameter."""
    if R < 3:
        raise ValueError(f"grid needs at least 3 radii, got {R}")
    diam = diameter(dist)
    if not diam > 0:
        raise ValueError("cannot build a radius grid for a zero-diameter point set")
    radii = diam * np.arange(1, R + 1, dtype=np.float64) / R
    radii[-1] = diam
    return RadiusGrid(radii)


def _heat_pair_distances(dist, family, r, t, subsamples, ambient_dim):
    W = evaluate_kernel_matrix(KernelSpec(family, r, ambient_dim), dist)
    H_full = heat_operator(build_laplacian(W), t).H
    out = []
    for s in subsamples:
        if s.is_full:
            out.append(0.0)
            continue
        H_sub = heat_operator(build_laplacian(W, s), t).H
        out.append(hs_distance(H_sub, H_full))
    return out


def variance_estimate(dist: np.ndarray, family: str, r: float, t: float,
                      subsamples: list[SubsampleSet], ambient_dim: int = 1) -> float:
    """Mean HS distance between subsample and full-sample heat operators.

    Terms are summed in list order so the result is reproducible.
    """
    if len(subsamples) < 1:
        raise ValueError("at least one subsample is required")
    n = dist.shape[0]
    for s in subsamples:
        if s.n != n:
            raise ValueError("subsample parent size does not match the distance matrix")
    total = 0.0
    for term in _heat_pair_distances(dist, family, r, t, subsamples, ambient_dim):
        total += term
    return total / len(subsamples)


def variance_curve(dist: np.ndarray, family: str, grid: RadiusGrid, t: float = 1.0,
                   N: int = 10, fraction: float = 0.8, seed=0, ambient_dim: int = 1,
                   threads: int = 1, subsamples: list[SubsampleSet] | None = None) -> VarianceCurve:
    """Variance proxy at every grid radius.

    One set of ``N`` subsamples is drawn from ``seed`` and reused at every
    radius. Radii are independent and may be evaluated on ``threads``
    worker threads; the result does not depend on the thread count.
    """
    n = dist.shape[0]
    if subsamples is None:
        subsamples = draw_subsamples(n, N, fraction, seed)

    def at(r):
        return variance_estimate(dist, family, float(r), t, subsamples, ambient_dim)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(at, grid.radii))
    else:
        values = [at(r) for r in grid.radii]
    return VarianceCurve(grid, np.array(values), len(subsamples), fraction, seed, t,
                         family)


def elbow_index(values, rtol: float = 1e-12) -> tuple[int | None, int]:
    """Largest 1-based interior index whose centered slope is below the
    overall slope.

    Returns ``(index, fallback)``; ``index`` is ``None`` when no interior
    point qualifies, in which case ``fallback`` (= 2) should be used.
    Slopes are in units of grid steps. Differences within ``rtol`` of the
    curve's magnitude are treated as equal so that a straight line does
    not produce a spurious elbow from rounding.
    """
    v = np.asarray(values, dtype=np.float64)
    R = v.size
    if R < 3:
        raise ValueError(f"elbow rule needs at least 3 points, got {R}")
    overall = (v[-1] - v[0]) / (R - 1)
    centered = (v[2:] - v[:-2]) / 2.0
    slack = rtol * float(np.max(np.abs(v)))
    hits = np.nonzero(centered < overall - slack)[0]
    if hits.size == 0:
        return None, 2
    # centered[m] belongs to 1-based grid index m + 2
    return int(hits[-1]) + 2, 2


def select_bandwidth(curve: VarianceCurve | None, mode: str = ELBOW,
                     r: float | None = None) -> BandwidthChoice:
    """Pick a bandwidth from a variance curve.

    ``elbow``
        Largest interior grid radius whose centered difference is smaller
        than the end-to-end slope. Falls back to the second grid radius
        with a warning when no point qualifies.
    ``max``
        Grid radius of the largest variance value (first one on ties).
    ``fixed``
        The user-supplied ``r``; the curve is ignored.
    """
    if mode == FIXED:
        if r is None or not r > 0:
            raise ValueError("fixed mode requires a positive bandwidth")
        return BandwidthChoice(float(r), None, FIXED)
    if mode not in MODES:
        raise ValueError(f"unknown selection mode {mode!r}")
    values = curve.values
    if values.size < 3:
        raise ValueError(f"curve too short for bandwidth selection ({values.size} points)")
    radii = curve.radii
    if mode == MAX:
        i = int(np.argmax(values)) + 1
        return BandwidthChoice(float(radii[i - 1]), i, MAX)
    idx, fallback = elbow_index(values)
    if idx is None:
        msg = (f"no elbow in variance curve; falling back to grid index {fallback} "
               f"(r = {radii[fallback - 1]:.6g})")
        log.warning(msg)
        return BandwidthChoice(float(radii[fallback - 1]), fallback, ELBOW, (msg,))
    return BandwidthChoice(float(radii[idx - 1]), idx, ELBOW)
