"""Clusters from the eigenvalue-1 eigenspace of the heat operator.

Each connected component of the r-ball graph contributes one unit
eigenvalue. Any orthonormal basis of that eigenspace maps all points of
a component to the same point of R^k. Pivoted Gauss-Jordan elimination
on the basis rows turns those k images into the standard basis vectors
e_1..e_k, and each point goes to the nearest e_i.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from . import _accel
from .bandwidth import (ELBOW, FIXED, MAX, BandwidthChoice, VarianceCurve, radius_grid,
                        select_bandwidth, variance_curve)
from .errors import NoUnitEigenvalue
from .geometry import SubsampleSet, as_cloud, diameter, pairwise_distances
from .heat import HeatOperator, build_laplacian, heat_operator
from .kernel import ROW_NORMALIZED_BALL, KernelMatrix, KernelSpec, canonical_family, \
    evaluate_kernel_matrix

log = logging.getLogger(__name__)

MIN_PIVOT = 1e-12
AMBIGUITY = 1e-6


@dataclass(frozen=True)
class EigenBasis:
    """Orthonormal eigenvectors with eigenvalue >= 1 - tol, one per row."""

    Psi: np.ndarray
    eigenvalues: np.ndarray
    tol: float

    @property
    def k(self) -> int:
        return self.Psi.shape[0]


@dataclass(frozen=True)
class ClusterMap:
    """Eliminated eigenbasis; column ``j`` of ``Phi`` is the image of point ``j``.

    ``pivots[i]`` is the point whose image became ``e_{i+1}``.
    ``column_permutation`` lists the pivots first, then the remaining
    columns in their original order.
    """

    Phi: np.ndarray
    column_permutation: np.ndarray
    pivots: np.ndarray


@dataclass
class ClusteringResult:
    beta0: int
    labels: np.ndarray
    distances: np.ndarray
    r_hat: float | None = None
    warnings: list = field(default_factory=list)
    eigenvalues: np.ndarray | None = None
    cluster_map: ClusterMap | None = None
    curve: VarianceCurve | None = None
    choice: BandwidthChoice | None = None
    timings: dict = field(default_factory=dict)

    @property
    def cluster_sizes(self) -> list[int]:
        return np.bincount(self.labels, minlength=self.beta0 + 1)[1:].tolist()


def unit_eigenspace(H, tol: float = 1e-6) -> EigenBasis:
    """All eigenpairs of the symmetric heat operator with eigenvalue >= 1 - tol.

    Raises
    ------
    NoUnitEigenvalue
        If no eigenvalue reaches 1 - tol, which a correctly built heat
        operator never produces.
    """
    if not 0 < tol < 1:
        raise ValueError(f"tolerance must lie in (0, 1), got {tol}")
    Hm = H.H if isinstance(H, HeatOperator) else np.asarray(H, dtype=np.float64)
    w, V = np.linalg.eigh(Hm)
    keep = w >= 1.0 - tol
    if not keep.any():
        raise NoUnitEigenvalue(
            f"largest heat-operator eigenvalue {w[-1]:.12g} is below 1 - {tol:g}")
    return EigenBasis(np.ascontiguousarray(V[:, keep].T), w[keep], tol)


def modified_gaussian_elimination(basis) -> ClusterMap:
    """Column-pivoted elimination of the eigenbasis rows.

    Round ``i`` picks the not-yet-used column with the largest magnitude
    in row ``i`` (smallest index on ties), scales row ``i`` so the pivot
    is 1 and clears the pivot column in every other row.

    Raises
    ------
    DegenerateEigenbasis
        If a pivot magnitude is below 1e-12.
    """
    Psi = basis.Psi if isinstance(basis, EigenBasis) else np.atleast_2d(basis)
    k, n = Psi.shape
    if k < 1 or n < k:
        raise ValueError(f"need 1 <= k <= n, got a {k} x {n} basis")
    Phi, pivots = _accel.pivoted_elimination(Psi, MIN_PIVOT)
    rest = np.setdiff1d(np.arange(n), pivots, assume_unique=True)
    return ClusterMap(Phi, np.concatenate([pivots, rest]), pivots)


def assign_clusters(cmap: ClusterMap) -> ClusteringResult:
    """Label each point by the nearest standard basis vector."""
    Phi = cmap.Phi
    k, n = Phi.shape
    sq = np.sum(Phi * Phi, axis=0)
    distances = np.sqrt(np.maximum(sq[:, None] - 2.0 * Phi.T + 1.0, 0.0))
    labels = np.argmin(distances, axis=1) + 1
    warnings = []
    if k > 1:
        two = np.partition(distances, 1, axis=1)[:, :2]
        ambiguous = np.nonzero(two[:, 1] - two[:, 0] < AMBIGUITY)[0]
        if ambiguous.size:
            msg = (f"{ambiguous.size} point(s) nearly equidistant from two basis vectors "
                   f"(first: index {int(ambiguous[0])})")
            log.warning(msg)
            warnings.append(msg)
    return ClusteringResult(k, labels.astype(np.int64), distances, warnings=warnings,
                            cluster_map=cmap)


def connected_components_oracle(dist: np.ndarray, r: float) -> np.ndarray:
    """Union-find components of the graph joining pairs with ``0 < d <= r``.

    Labels are 1-based and numbered by each component's smallest member.
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    return _accel.radius_components(np.ascontiguousarray(dist, dtype=np.float64), float(r))


def spectral_labels(W: KernelMatrix, t: float = 1.0, tol: float = 1e-6,
                    active: SubsampleSet | None = None) -> ClusteringResult:
    """Heat operator -> unit eigenspace -> elimination -> assignment at one radius."""
    H = heat_operator(build_laplacian(W, active), t)
    basis = unit_eigenspace(H, tol)
    result = assign_clusters(modified_gaussian_elimination(basis))
    result.eigenvalues = basis.eigenvalues
    result.r_hat = W.r
    return result


@dataclass(frozen=True)
class ClusterConfig:
    """Pipeline settings.

    ``bandwidth`` is ``"auto"`` (elbow rule), ``"max"`` (largest variance)
    or a positive number used as a fixed radius.
    """

    kernel: str = ROW_NORMALIZED_BALL
    bandwidth: object = "auto"
    grid: int = 30
    subsamples: int = 10
    fraction: float = 0.8
    t: float = 1.0
    tol: float = 1e-6
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kernel", canonical_family(self.kernel))
        mode = self.mode
        if mode == FIXED and not float(self.bandwidth) > 0:
            raise ValueError("fixed bandwidth must be positive")
        if self.grid < 3:
            raise ValueError("grid must have at least 3 radii")
        if self.subsamples < 1:
            raise ValueError("need at least one subsample")
        if not 0 < self.fraction < 1:
            raise ValueError("fraction must lie in (0, 1)")
        if not self.t > 0:
            raise ValueError("t must be positive")
        if not 0 < self.tol < 1:
            raise ValueError("tol must lie in (0, 1)")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    @property
    def mode(self) -> str:
        b = self.bandwidth
        if isinstance(b, str):
            if b in ("auto", ELBOW):
                return ELBOW
            if b == MAX:
                return MAX
            try:
                float(b)
            except ValueError:
                raise ValueError(f"bandwidth must be 'auto', 'max' or a number, got {b!r}") from None
        return FIXED


def cluster(points, config: ClusterConfig | None = None) -> ClusteringResult:
    """Cluster a point cloud end to end.

    Draws the subsamples, evaluates the variance curve on the radius grid,
    selects the bandwidth, and clusters the full sample at that radius.
    Deterministic for a fixed ``config.seed``.
    """
    config = config or ClusterConfig()
    cloud = as_cloud(points)
    timings = {}
    t0 = time.perf_counter()
    dist = pairwise_distances(cloud)
    timings["distances"] = time.perf_counter() - t0

    warnings = []
    curve = None
    mode = config.mode
    diam = diameter(dist)
    if not diam > 0:
        # single point or all points coincide: no edges at any radius
        msg = "zero-diameter input; every point is its own component"
        if cloud.n > 1:
            log.warning(msg)
            warnings.append(msg)
        W = KernelMatrix(np.zeros_like(dist), 0.0, config.kernel)
        choice = BandwidthChoice(0.0, None, mode)
    else:
        if mode == FIXED:
            choice = select_bandwidth(None, FIXED, float(config.bandwidth))
        else:
            t0 = time.perf_counter()
            curve = variance_curve(dist, config.kernel, radius_grid(dist, config.grid),
                                   t=config.t, N=config.subsamples, fraction=config.fraction,
                                   seed=config.seed, ambient_dim=cloud.d,
                                   threads=config.threads)
            timings["variance_curve"] = time.perf_counter() - t0
            choice = select_bandwidth(curve, mode)
            warnings.extend(choice.warnings)
        W = evaluate_kernel_matrix(KernelSpec(config.kernel, choice.r, cloud.d), dist)

    t0 = time.perf_counter()
    result = spectral_labels(W, config.t, config.tol)
    timings["spectral"] = time.perf_counter() - t0
    result.r_hat = choice.r
    result.curve = curve
    result.choice = choice
    result.warnings = warnings + result.warnings
    result.timings = timings
    return result
