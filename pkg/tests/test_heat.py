import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heatclust.errors import NumericalError
from heatclust.geometry import PointCloud, SubsampleSet, pairwise_distances
from heatclust.heat import (build_laplacian, heat_operator, hs_distance, hs_norm,
                            matrix_exponential)
from heatclust.kernel import KernelMatrix, KernelSpec, evaluate_kernel_matrix

from conftest import loop_components, taylor_expm


def kernel(W, r=1.0):
    return KernelMatrix(np.asarray(W, dtype=float), r)


def random_laplacian(seed, n=None, active_frac=None):
    rng = np.random.default_rng(seed)
    n = n or int(rng.integers(2, 61))
    dim = int(rng.integers(1, 4))
    d = pairwise_distances(PointCloud(rng.uniform(size=(n, dim))))
    r = float(rng.uniform(0.05, 0.7))
    W = evaluate_kernel_matrix(KernelSpec("row-normalized-ball", r, dim), d)
    active = None
    if active_frac is not None:
        m = max(1, int(active_frac * n))
        active = SubsampleSet(rng.choice(n, m, replace=False), n)
    return d, r, build_laplacian(W, active)


def test_zero_weights_zero_laplacian():
    L = build_laplacian(kernel(np.zeros((4, 4))))
    assert not L.M.any()


def test_two_point_laplacian():
    w = 0.7
    L = build_laplacian(kernel([[0, w], [w, 0]]))
    np.testing.assert_array_equal(L.M, [[w, -w], [-w, w]])
    np.testing.assert_allclose(np.linalg.eigvalsh(L.M), [0.0, 2 * w], atol=1e-15)


def test_full_active_rows_sum_to_zero():
    _, _, L = random_laplacian(3, n=25)
    np.testing.assert_allclose(L.M.sum(axis=1), 0.0, atol=1e-14)


def test_inactive_rows_are_diagonal_only():
    rng = np.random.default_rng(5)
    n = 12
    d = pairwise_distances(PointCloud(rng.uniform(size=(n, 2))))
    W = evaluate_kernel_matrix(KernelSpec("lebesgue-ball", 0.5, 2), d)
    active = SubsampleSet([0, 2, 3, 7, 8, 11], n)
    L = build_laplacian(W, active).M
    act = set(active.indices.tolist())
    for i in range(n):
        expected_diag = sum(W.W[i, j] for j in act)
        assert L[i, i] == pytest.approx(expected_diag, rel=1e-14, abs=1e-300)
        for j in range(n):
            if j == i:
                continue
            if i in act and j in act:
                assert L[i, j] == -W.W[i, j]
            else:
                assert L[i, j] == 0.0
    for i in act:
        assert sum(L[i, j] for j in act) == pytest.approx(0.0, abs=1e-12)


def test_heat_of_zero_is_identity():
    H = heat_operator(build_laplacian(kernel(np.zeros((3, 3)))), 1.0)
    np.testing.assert_array_equal(H.H, np.eye(3))


@pytest.mark.parametrize("w,t", [(0.3, 1.0), (1.7, 0.5), (2.0, 2.0)])
def test_two_point_heat_closed_form(w, t):
    H = heat_operator(build_laplacian(kernel([[0, w], [w, 0]])), t).H
    e = math.exp(-2 * w * t)
    np.testing.assert_allclose(H, 0.5 * np.array([[1 + e, 1 - e], [1 - e, 1 + e]]),
                               atol=1e-15)
    np.testing.assert_allclose(np.linalg.eigvalsh(H), [e, 1.0], atol=1e-15)


def test_block_structure_preserved():
    W = np.zeros((5, 5))
    W[0, 1] = W[1, 0] = 1.0
    W[2, 3] = W[3, 2] = W[3, 4] = W[4, 3] = 0.5
    H = heat_operator(build_laplacian(kernel(W)), 1.0).H
    assert not H[:2, 2:].any() and not H[2:, :2].any()
    np.testing.assert_allclose(H[:2, :2], taylor_expm(-build_laplacian(kernel(W)).M[:2, :2]),
                               atol=1e-14)


def test_constant_on_component_is_fixed():
    _, _, L = random_laplacian(8, n=30)
    H = heat_operator(L).H
    np.testing.assert_allclose(H @ np.ones(30), np.ones(30), atol=1e-12)


def test_subsample_heat_matches_dense_exponential():
    _, _, L = random_laplacian(4, n=20, active_frac=0.6)
    H = heat_operator(L, 0.8).H
    np.testing.assert_allclose(H, taylor_expm(-0.8 * L.M, 40, squarings=4), atol=1e-12)


def test_heat_rejects_nonpositive_t():
    _, _, L = random_laplacian(0, n=5)
    with pytest.raises(ValueError):
        heat_operator(L, 0.0)


def test_expm_zero_and_diagonal():
    np.testing.assert_array_equal(matrix_exponential(np.zeros((3, 3))), np.eye(3))
    np.testing.assert_allclose(matrix_exponential(np.diag([0.5, -2.0])),
                               np.diag([math.exp(0.5), math.exp(-2.0)]), rtol=1e-15)


@pytest.mark.parametrize("seed", range(10))
def test_expm_symmetric_against_taylor(seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(5, 5))
    A = A + A.T
    A *= 0.9 / np.max(np.abs(np.linalg.eigvalsh(A)))
    np.testing.assert_allclose(matrix_exponential(A), taylor_expm(A, 30), rtol=0, atol=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_expm_nonsymmetric_against_taylor(seed):
    rng = np.random.default_rng(100 + seed)
    A = rng.normal(size=(6, 6))
    A *= 1.5 / np.linalg.norm(A, 2)
    expected = taylor_expm(A, 30)
    np.testing.assert_allclose(matrix_exponential(A), expected, rtol=1e-10,
                               atol=1e-10 * np.abs(expected).max())


def test_expm_rejects_nonfinite():
    with pytest.raises(NumericalError):
        matrix_exponential([[np.inf, 0], [0, 1]])
    with pytest.raises(NumericalError):
        matrix_exponential([[1000.0, 0], [0, 1]])
    with pytest.raises(ValueError):
        matrix_exponential(np.zeros((2, 3)))


def test_hs_norm_examples():
    assert hs_norm(np.eye(7)) == pytest.approx(math.sqrt(7))
    A = np.random.default_rng(0).normal(size=(4, 4))
    assert hs_distance(A, A) == 0.0
    assert hs_norm(A) == pytest.approx(math.sqrt(np.trace(A.T @ A)), abs=1e-12)
    with pytest.raises(ValueError):
        hs_distance(np.eye(2), np.eye(3))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000), st.sampled_from([None, 0.5, 0.8]))
def test_laplacian_symmetric_psd(seed, frac):
    _, _, L = random_laplacian(seed, active_frac=frac)
    M = L.M
    assert np.array_equal(M, M.T)
    lam = np.linalg.eigvalsh(M)
    assert lam.min() >= -1e-10 * max(1.0, np.abs(M).max())


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_unit_eigenvalue_count_matches_components(seed):
    d, r, L = random_laplacian(seed)
    H = heat_operator(L, 1.0).H
    lam = np.linalg.eigvalsh(H)
    assert lam.max() <= 1 + 1e-10
    assert np.count_nonzero(lam >= 1 - 1e-8) == loop_components(d, r).max()
    assert np.abs(H).max() <= 1 + 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000), st.floats(0.1, 2.0), st.floats(0.1, 2.0))
def test_semigroup(seed, t1, t2):
    _, _, L = random_laplacian(seed, n=20)
    lhs = heat_operator(L, t1 + t2).H
    rhs = heat_operator(L, t1).H @ heat_operator(L, t2).H
    np.testing.assert_allclose(lhs, rhs, atol=1e-8)
