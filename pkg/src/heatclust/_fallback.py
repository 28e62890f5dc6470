"""Pure-Python/NumPy versions of the hot kernels.

Every function here has a compiled twin in ``_core.pyx`` with the same
signature and semantics. ``heatclust._accel`` picks one at import time.
"""
import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import DegenerateEigenbasis


def pairwise_distances(coords):
    coords = np.ascontiguousarray(coords, dtype=np.float64)
    if coords.shape[0] == 1:
        return np.zeros((1, 1))
    return squareform(pdist(coords, metric="euclidean"))


def neighbor_counts(dist, r):
    """Number of j != i with dist[i, j] <= r, per row."""
    within = dist <= r
    np.fill_diagonal(within, False)
    return within.sum(axis=1).astype(np.int64)


def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def radius_components(dist, r):
    """Union-find over pairs with 0 < dist <= r.

    Returns labels 1..c, numbered in order of each component's smallest
    member index.
    """
    n = dist.shape[0]
    parent = list(range(n))
    rows, cols = np.nonzero(np.triu((dist > 0) & (dist <= r), k=1))
    for i, j in zip(rows.tolist(), cols.tolist()):
        ri, rj = _find(parent, i), _find(parent, j)
        if ri != rj:
            # keep the smaller index as root so roots are component minima
            if ri < rj:
                parent[rj] = ri
            else:
                parent[ri] = rj
    labels = np.empty(n, dtype=np.int64)
    ids = {}
    for i in range(n):
        root = _find(parent, i)
        if root not in ids:
            ids[root] = len(ids) + 1
        labels[i] = ids[root]
    return labels


def pivoted_elimination(psi, min_pivot):
    """Column-pivoted Gauss-Jordan elimination on the rows of ``psi``.

    Columns are never moved physically; ``pivots[i]`` is the original
    index of the column chosen in round ``i``. Ties in pivot magnitude go
    to the smallest column index.
    """
    phi = np.array(psi, dtype=np.float64, copy=True)
    k, n = phi.shape
    used = np.zeros(n, dtype=bool)
    pivots = np.empty(k, dtype=np.int64)
    for i in range(k):
        mag = np.abs(phi[i])
        mag[used] = -1.0
        j = int(np.argmax(mag))
        p = phi[i, j]
        if not abs(p) >= min_pivot:
            raise DegenerateEigenbasis(
                f"pivot {abs(p):.3e} in round {i + 1} is below {min_pivot:.1e}"
            )
        phi[i] /= p
        phi[i, j] = 1.0
        for m in range(k):
            if m != i:
                phi[m] -= phi[m, j] * phi[i]
                phi[m, j] = 0.0
        used[j] = True
        pivots[i] = j
    return phi, pivots
