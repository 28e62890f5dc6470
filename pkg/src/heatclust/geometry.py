"""Point clouds, Euclidean distances, subsampling and synthetic datasets."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _accel


def _frozen(a):
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PointCloud:
    """``n`` points in ``d``-dimensional Euclidean space."""

    coords: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=np.float64)
        if coords.ndim == 1:
            coords = coords[:, None]
        if coords.ndim != 2 or coords.shape[0] < 1 or coords.shape[1] < 1:
            raise ValueError(f"coords must be an n x d array with n, d >= 1, got shape {coords.shape}")
        if not np.all(np.isfinite(coords)):
            raise ValueError("coords contain non-finite values")
        object.__setattr__(self, "coords", _frozen(coords))

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def d(self) -> int:
        return self.coords.shape[1]

    def __len__(self):
        return self.n


@dataclass(frozen=True)
class SubsampleSet:
    """A nonempty set of distinct point indices out of ``n``.

    ``indices`` are 0-based and stored sorted.
    """

    indices: np.ndarray
    n: int

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64).ravel()
        if idx.size == 0:
            raise ValueError("subsample must be nonempty")
        if np.unique(idx).size != idx.size:
            raise ValueError("subsample indices must be distinct")
        if idx.min() < 0 or idx.max() >= self.n:
            raise ValueError(f"subsample indices must lie in [0, {self.n})")
        object.__setattr__(self, "indices", _frozen(np.sort(idx)))

    @classmethod
    def full(cls, n: int) -> "SubsampleSet":
        return cls(np.arange(n), n)

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        m[self.indices] = True
        return m

    @property
    def is_full(self) -> bool:
        return self.indices.size == self.n

    def __len__(self):
        return int(self.indices.size)


@dataclass(frozen=True)
class LabeledPointCloud:
    """A point cloud with 1-based ground-truth labels."""

    cloud: PointCloud
    truth_labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.truth_labels, dtype=np.int64).ravel()
        if labels.size != self.cloud.n:
            raise ValueError("one label per point required")
        k = int(labels.max())
        if labels.min() < 1 or np.unique(labels).size != k:
            raise ValueError("labels must cover 1..k with every class nonempty")
        object.__setattr__(self, "truth_labels", _frozen(labels))


def as_cloud(points) -> PointCloud:
    if isinstance(points, PointCloud):
        return points
    if isinstance(points, LabeledPointCloud):
        return points.cloud
    return PointCloud(points)


def pairwise_distances(cloud) -> np.ndarray:
    """Dense symmetric matrix of Euclidean distances, zero diagonal."""
    cloud = as_cloud(cloud)
    dist = _accel.pairwise_distances(cloud.coords)
    dist.setflags(write=False)
    return dist


def diameter(dist: np.ndarray) -> float:
    return float(np.max(dist)) if dist.size else 0.0


def subsample_size(n: int, fraction: float) -> int:
    # round half up; Python's round() is banker's rounding
    return max(1, min(n, int(math.floor(fraction * n + 0.5))))


def subsample(n: int, fraction: float, seed) -> SubsampleSet:
    """Uniform random subset of ``range(n)`` without replacement.

    Parameters
    ----------
    n : int
        Size of the parent sample.
    fraction : float
        Fraction in the open interval (0, 1); the subset has
        ``round(fraction * n)`` elements (at least one).
    seed : int, numpy.random.SeedSequence or numpy.random.Generator
        Source of randomness. The same seed always gives the same subset.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must lie in (0, 1), got {fraction}")
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    m = subsample_size(n, fraction)
    return SubsampleSet(rng.choice(n, size=m, replace=False), n)


def draw_subsamples(n: int, count: int, fraction: float, seed) -> list[SubsampleSet]:
    """``count`` independent subsamples, all derived from one root seed."""
    if count < 1:
        raise ValueError("need at least one subsample")
    children = np.random.SeedSequence(seed).spawn(count)
    return [subsample(n, fraction, child) for child in children]


def _split_even(n: int, parts: int) -> list[int]:
    base, extra = divmod(n, parts)
    # the remainder goes to the first part
    return [base + extra] + [base] * (parts - 1)


def circle_points(center, u, v, radius, angles):
    """Points ``center + radius * (cos(a) u + sin(a) v)`` for each angle."""
    angles = np.asarray(angles, dtype=np.float64)[:, None]
    return (np.asarray(center)[None, :]
            + radius * (np.cos(angles) * np.asarray(u)[None, :]
                        + np.sin(angles) * np.asarray(v)[None, :]))


def small_circle_frame(phi: float):
    """Center and in-plane axes of a radius-0.5 circle linked through the unit circle.

    The circle is centered at ``(cos phi, sin phi, 0)`` and lies in the
    vertical plane through the z-axis, so every point sits at distance
    exactly 0.5 from the unit circle in the z=0 plane.
    """
    radial = np.array([math.cos(phi), math.sin(phi), 0.0])
    return radial, radial, np.array([0.0, 0.0, 1.0])


def _min_circle_separation(phi1: float, phi2: float, samples: int = 720) -> float:
    a = np.linspace(0.0, 2 * math.pi, samples, endpoint=False)
    c1, u1, v1 = small_circle_frame(phi1)
    c2, u2, v2 = small_circle_frame(phi2)
    p = circle_points(c1, u1, v1, 0.5, a)
    q = circle_points(c2, u2, v2, 0.5, a)
    d2 = (np.sum(p * p, axis=1)[:, None] + np.sum(q * q, axis=1)[None, :]
          - 2.0 * p @ q.T)
    return float(math.sqrt(max(d2.min(), 0.0)))


SMALL_CIRCLE_SEPARATION = 0.3


def generate_three_circles(n: int = 500, sigma: float = 0.05, seed=0) -> LabeledPointCloud:
    """Noisy samples from three mutually unlinked circles in R^3.

    Label 1 is the unit circle in the z=0 plane. Labels 2 and 3 are
    radius-0.5 circles centered at random points of that circle, each
    in the vertical plane through the z-axis, redrawn until the two are
    at least 0.3 apart. Points are uniform in angle on each circle;
    ``n`` is split as evenly as possible with the remainder going to
    the big circle. Gaussian noise of standard deviation ``sigma`` is
    added to each coordinate.
    """
    if n < 3:
        raise ValueError(f"need at least 3 points, got {n}")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    rng = np.random.default_rng(seed)
    while True:
        phis = rng.uniform(0.0, 2 * math.pi, size=2)
        if _min_circle_separation(*phis) >= SMALL_CIRCLE_SEPARATION:
            break
    counts = _split_even(n, 3)
    frames = [(np.zeros(3), np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), 1.0)]
    frames += [(*small_circle_frame(phi), 0.5) for phi in phis]
    blocks, labels = [], []
    for label, (count, (c, u, v, radius)) in enumerate(zip(counts, frames), start=1):
        angles = rng.uniform(0.0, 2 * math.pi, size=count)
        blocks.append(circle_points(c, u, v, radius, angles))
        labels.append(np.full(count, label))
    coords = np.vstack(blocks)
    if sigma > 0:
        coords = coords + rng.normal(0.0, sigma, size=coords.shape)
    return LabeledPointCloud(PointCloud(coords), np.concatenate(labels))


def generate_blobs(n: int = 300, sigma: float = 0.1, seed=0, centers: int = 3,
                   dim: int = 2, spread: float = 10.0) -> LabeledPointCloud:
    """Isotropic Gaussian blobs around random well-separated centers."""
    if n < centers:
        raise ValueError(f"need at least {centers} points, got {n}")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    rng = np.random.default_rng(seed)
    # centers on a scaled simplex-like lattice keep blobs far apart
    mu = np.zeros((centers, dim))
    for c in range(centers):
        mu[c, c % dim] = spread * (c // dim + 1) * (1 if c % 2 == 0 else -1)
    counts = _split_even(n, centers)
    coords = np.vstack([mu[c] + rng.normal(0.0, sigma, size=(m, dim))
                        for c, m in enumerate(counts)])
    labels = np.concatenate([np.full(m, c + 1) for c, m in enumerate(counts)])
    return LabeledPointCloud(PointCloud(coords), labels)


def generate_two_circles(n: int = 300, sigma: float = 0.02, seed=0,
                         radii=(1.0, 2.0)) -> LabeledPointCloud:
    """Two concentric circles in the plane."""
    if n < 2:
        raise ValueError(f"need at least 2 points, got {n}")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    rng = np.random.default_rng(seed)
    counts = _split_even(n, 2)
    blocks = []
    for radius, m in zip(radii, counts):
        angles = rng.uniform(0.0, 2 * math.pi, size=m)
        blocks.append(circle_points(np.zeros(2), [1.0, 0.0], [0.0, 1.0], radius, angles))
    coords = np.vstack(blocks)
    if sigma > 0:
        coords = coords + rng.normal(0.0, sigma, size=coords.shape)
    labels = np.concatenate([np.full(m, c + 1) for c, m in enumerate(counts)])
    return LabeledPointCloud(PointCloud(coords), labels)


GENERATORS = {
    "three-circles": generate_three_circles,
    "blobs": generate_blobs,
    "two-circles": generate_two_circles,
}
