"""Graph Laplacians restricted to a subsample, their heat operators, and
Hilbert-Schmidt norms.

Sign convention: ``L = D - W`` is positive semidefinite, so
``exp(-t L)`` has its spectrum in (0, 1]. Eigenvalue 1 is attained
exactly on functions that are constant on connected components.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericalError
from .geometry import SubsampleSet
from .kernel import KernelMatrix

SIGN_CONVENTION = "L = D - W (positive semidefinite); heat operator exp(-tL)"


@dataclass(frozen=True)
class LaplacianMatrix:
    """``L_{r,S'}`` for weights ``W`` restricted to the active set ``S'``.

    Off-diagonal entries couple two active points only. Every row,
    active or not, carries the total weight to active points on the
    diagonal.
    """

    M: np.ndarray
    active: SubsampleSet
    r: float
    convention: str = SIGN_CONVENTION

    @property
    def n(self) -> int:
        return self.M.shape[0]


@dataclass(frozen=True)
class HeatOperator:
    H: np.ndarray
    t: float
    r: float
    active: SubsampleSet


def build_laplacian(W: KernelMatrix, active: SubsampleSet | None = None) -> LaplacianMatrix:
    w = W.W
    n = w.shape[0]
    if active is None:
        active = SubsampleSet.full(n)
    if active.n != n:
        raise ValueError(f"subsample is over {active.n} points, kernel matrix over {n}")
    mask = active.mask
    to_active = w[:, mask].sum(axis=1)
    L = -(w * mask[:, None] * mask[None, :])
    L[np.diag_indices(n)] = to_active
    L.setflags(write=False)
    return LaplacianMatrix(L, active, W.r)


def _check_finite(a, what):
    if not np.all(np.isfinite(a)):
        raise NumericalError(f"non-finite values in {what}")


def expm_symmetric(M: np.ndarray) -> np.ndarray:
    """exp(M) for symmetric ``M`` via its eigendecomposition."""
    w, V = np.linalg.eigh(M)
    _check_finite(w, "eigenvalues")
    with np.errstate(over="ignore", invalid="ignore"):
        E = (V * np.exp(w)) @ V.T
    # restore exact symmetry lost to rounding in the product
    E = 0.5 * (E + E.T)
    _check_finite(E, "matrix exponential")
    return E


def matrix_exponential(M) -> np.ndarray:
    """Matrix exponential of a square matrix.

    Symmetric inputs go through a symmetric eigendecomposition; anything
    else through scaling-and-squaring with a Pade approximant.

    Raises
    ------
    NumericalError
        If the input or any intermediate result is not finite.
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"square matrix required, got shape {M.shape}")
    _check_finite(M, "input matrix")
    if M.shape[0] == 0:
        return M.copy()
    if np.array_equal(M, M.T):
        return expm_symmetric(M)
    E = scipy.linalg.expm(M)
    _check_finite(E, "matrix exponential")
    return E


def heat_operator(L: LaplacianMatrix, t: float = 1.0) -> HeatOperator:
    """``exp(-t L)``.

    Rows and columns of inactive points hold only a diagonal entry, so
    their part of the exponential is elementwise and only the active
    block needs a dense eigendecomposition.
    """
    if not t > 0:
        raise ValueError(f"diffusion time must be positive, got {t}")
    M = L.M
    n = M.shape[0]
    if L.active.is_full:
        H = expm_symmetric(-t * M)
    else:
        idx = L.active.indices
        H = np.diag(np.exp(-t * np.diag(M)))
        H[np.ix_(idx, idx)] = expm_symmetric(-t * M[np.ix_(idx, idx)])
        _check_finite(H, "heat operator")
    assert H.shape == (n, n)
    H.setflags(write=False)
    return HeatOperator(H, t, L.r, L.active)


def hs_norm(A) -> float:
    """Hilbert-Schmidt (Frobenius) norm, ``sqrt(sum of squared entries)``."""
    A = np.asarray(A, dtype=np.float64)
    return float(np.sqrt(np.sum(A * A)))


def hs_distance(A, B) -> float:
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    return hs_norm(A - B)
