# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; semantics mirror ``heatclust._fallback``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

from .errors import DegenerateEigenbasis

cnp.import_array()


def pairwise_distances(coords):
    cdef const double[:, ::1] x = np.ascontiguousarray(coords, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1]
    out = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j, k
    cdef double acc, diff
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                acc = 0.0
                for k in range(d):
                    diff = x[i, k] - x[j, k]
                    acc = acc + diff * diff
                acc = sqrt(acc)
                o[i, j] = acc
                o[j, i] = acc
    return out


def neighbor_counts(dist, double r):
    cdef const double[:, ::1] D = np.ascontiguousarray(dist, dtype=np.float64)
    cdef Py_ssize_t n = D.shape[0], i, j
    out = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] c = out
    with nogil:
        for i in range(n):
            for j in range(n):
                if j != i and D[i, j] <= r:
                    c[i] += 1
    return out


cdef inline Py_ssize_t _find(Py_ssize_t[::1] parent, Py_ssize_t x) noexcept nogil:
    cdef Py_ssize_t root = x, nxt
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


def radius_components(dist, double r):
    cdef const double[:, ::1] D = np.ascontiguousarray(dist, dtype=np.float64)
    cdef Py_ssize_t n = D.shape[0], i, j, ri, rj, next_id = 0
    parent_arr = np.arange(n, dtype=np.intp)
    cdef Py_ssize_t[::1] parent = parent_arr
    labels = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] lab = labels
    ids_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] ids = ids_arr
    cdef double dij
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                dij = D[i, j]
                if dij > 0.0 and dij <= r:
                    ri = _find(parent, i)
                    rj = _find(parent, j)
                    if ri < rj:
                        parent[rj] = ri
                    elif rj < ri:
                        parent[ri] = rj
        for i in range(n):
            ri = _find(parent, i)
            if ids[ri] == 0:
                next_id += 1
                ids[ri] = next_id
            lab[i] = ids[ri]
    return labels


def pivoted_elimination(psi, double min_pivot):
    phi_arr = np.array(psi, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] phi = phi_arr
    cdef Py_ssize_t k = phi.shape[0], n = phi.shape[1]
    cdef Py_ssize_t i, j, m, c, best
    cdef double bestmag, mag, p, f
    used_arr = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] used = used_arr
    pivots = np.empty(k, dtype=np.int64)
    cdef cnp.int64_t[::1] piv = pivots
    for i in range(k):
        best = -1
        bestmag = -1.0
        for j in range(n):
            if not used[j]:
                mag = fabs(phi[i, j])
                if mag > bestmag:
                    bestmag = mag
                    best = j
        p = phi[i, best]
        if not fabs(p) >= min_pivot:
            raise DegenerateEigenbasis(
                f"pivot {fabs(p):.3e} in round {i + 1} is below {min_pivot:.1e}"
            )
        with nogil:
            for c in range(n):
                phi[i, c] = phi[i, c] / p
            phi[i, best] = 1.0
            for m in range(k):
                if m != i:
                    f = phi[m, best]
                    for c in range(n):
                        phi[m, c] = phi[m, c] - f * phi[i, c]
                    phi[m, best] = 0.0
        used[best] = 1
        piv[i] = best
    return phi_arr, pivots
