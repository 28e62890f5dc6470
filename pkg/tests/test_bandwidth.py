import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heatclust.bandwidth import (RadiusGrid, VarianceCurve, elbow_index, radius_grid,
                                 select_bandwidth, variance_curve, variance_estimate)
from heatclust.geometry import (PointCloud, SubsampleSet, draw_subsamples,
                                generate_three_circles, pairwise_distances)
from heatclust.heat import heat_operator, build_laplacian
from heatclust.kernel import KernelSpec, evaluate_kernel_matrix

from conftest import taylor_expm


def curve_of(values, radii=None):
    values = np.asarray(values, dtype=float)
    radii = np.arange(1, values.size + 1, dtype=float) if radii is None else radii
    return VarianceCurve(RadiusGrid(radii), values, 1, 0.8, 0)


def line_dist(points):
    return pairwise_distances(PointCloud(np.asarray(points, dtype=float)[:, None]))


def test_radius_grid_arithmetic():
    d = line_dist([0.0, 10.0])
    g = radius_grid(d, 5)
    np.testing.assert_allclose(g.radii, [2, 4, 6, 8, 10], rtol=1e-15)
    assert g.radii[-1] == 10.0


def test_radius_grid_uniform_and_ends_at_diameter():
    rng = np.random.default_rng(0)
    d = pairwise_distances(PointCloud(rng.normal(size=(30, 3))))
    g = radius_grid(d, 30)
    assert g.radii[-1] == d.max()
    steps = np.diff(np.concatenate([[0.0], g.radii]))
    assert np.ptp(steps) < 1e-12


def test_radius_grid_rejects_short():
    with pytest.raises(ValueError):
        radius_grid(line_dist([0.0, 1.0]), 2)


def test_full_subsamples_give_zero():
    rng = np.random.default_rng(1)
    d = pairwise_distances(PointCloud(rng.uniform(size=(12, 2))))
    full = [SubsampleSet.full(12)] * 3
    assert variance_estimate(d, "row-normalized-ball", 0.4, 1.0, full) == 0.0


def test_radius_below_min_distance():
    # no edges: every operator is the identity, including on inactive rows
    rng = np.random.default_rng(2)
    d = pairwise_distances(PointCloud(rng.uniform(size=(10, 2))))
    r = d[d > 0].min() * 0.9
    subs = draw_subsamples(10, 3, 0.7, seed=0)
    for family in ("row-normalized-ball", "lebesgue-ball"):
        assert variance_estimate(d, family, r, 1.0, subs, 2) == 0.0


def _from_scratch(coords, r, t, subsets):
    """Loop-built weights and Laplacians, Taylor exponentials."""
    n = len(coords)
    dist = [[math.dist(a, b) for b in coords] for a in coords]
    deg = [sum(1 for j in range(n) if j != i and dist[i][j] <= r) for i in range(n)]
    W = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if 0 < dist[i][j] <= r:
                W[i, j] = 1 / math.sqrt(deg[i] * deg[j])

    def lap(active):
        L = np.zeros((n, n))
        for i in range(n):
            L[i, i] = sum(W[i, j] for j in active)
            for j in active:
                if i in active and j != i:
                    L[i, j] = -W[i, j]
        return L

    H_full = taylor_expm(-t * lap(set(range(n))), 40, squarings=6)
    total = 0.0
    for s in subsets:
        H = taylor_expm(-t * lap(set(s)), 40, squarings=6)
        total += math.sqrt(((H - H_full) ** 2).sum())
    return total / len(subsets)


def test_variance_matches_from_scratch_pipeline():
    rng = np.random.default_rng(6)
    coords = rng.uniform(size=(6, 2))
    subsets = [[0, 1, 3, 4], [1, 2, 4, 5]]
    d = pairwise_distances(PointCloud(coords))
    got = variance_estimate(d, "row-normalized-ball", 0.6, 1.0,
                            [SubsampleSet(s, 6) for s in subsets])
    assert got > 0
    assert got == pytest.approx(_from_scratch(coords, 0.6, 1.0, subsets), rel=1e-10)


def test_curve_all_zero_for_full_subsample():
    rng = np.random.default_rng(3)
    d = pairwise_distances(PointCloud(rng.uniform(size=(8, 2))))
    curve = variance_curve(d, "row-normalized-ball", radius_grid(d, 6),
                           subsamples=[SubsampleSet.full(8)])
    assert not curve.values.any()


def test_curve_independent_of_order_and_threads():
    rng = np.random.default_rng(4)
    d = pairwise_distances(PointCloud(rng.uniform(size=(25, 2))))
    grid = radius_grid(d, 8)
    subs = draw_subsamples(25, 3, 0.8, seed=1)
    a = variance_curve(d, "row-normalized-ball", grid, subsamples=subs)
    rev = RadiusGrid(grid.radii[::-1].copy()[::-1])
    b = variance_curve(d, "row-normalized-ball", rev, subsamples=subs, threads=3)
    singles = [variance_estimate(d, "row-normalized-ball", r, 1.0, subs) for r in grid.radii[::-1]]
    assert np.array_equal(a.values, b.values)
    assert np.array_equal(a.values, singles[::-1])


def test_three_circles_curve_reproducible():
    data = generate_three_circles(100, 0.05, seed=0)
    d = pairwise_distances(data.cloud)
    grid = radius_grid(d, 20)
    a = variance_curve(d, "row-normalized-ball", grid, N=5, seed=42, ambient_dim=3)
    b = variance_curve(d, "row-normalized-ball", grid, N=5, seed=42, ambient_dim=3)
    assert np.all(np.isfinite(a.values)) and np.all(a.values >= 0)
    assert a.values.tobytes() == b.values.tobytes()


def test_elbow_worked_example():
    choice = select_bandwidth(curve_of([10, 5, 2.5, 2.4, 2.3, 2.2]))
    assert choice.grid_index == 2 and choice.r == 2.0
    assert not choice.warnings


@pytest.mark.parametrize("values", [[0, 1, 2, 3, 4, 5], [3.0, 2.5, 2.0, 1.5, 1.0],
                                    list(np.linspace(0.1, 0.7, 7))])
def test_elbow_linear_falls_back(values):
    choice = select_bandwidth(curve_of(values))
    assert choice.grid_index == 2 and choice.warnings


def test_max_mode():
    choice = select_bandwidth(curve_of([0, 3, 1]), "max")
    assert choice.grid_index == 2
    assert select_bandwidth(curve_of([2, 1, 2]), "max").grid_index == 1


def test_fixed_mode():
    choice = select_bandwidth(None, "fixed", 0.25)
    assert choice.r == 0.25 and choice.grid_index is None
    with pytest.raises(ValueError):
        select_bandwidth(None, "fixed")


def test_curve_too_short():
    with pytest.raises(ValueError):
        select_bandwidth(curve_of([1.0, 0.5]))


def test_elbow_takes_largest_qualifying_index():
    # overall slope -8.2/7; centered slopes -2.05, -0.1, -0.1, -1.9, -1.9, -0.1
    v = [10, 6, 5.9, 5.8, 5.7, 2, 1.9, 1.8]
    assert elbow_index(v)[0] == 6


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 100), min_size=3, max_size=40), st.floats(1e-3, 1e3))
def test_elbow_scale_invariant(values, scale):
    a = elbow_index(np.array(values))
    b = elbow_index(np.array(values) * scale)
    assert a == b


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000), st.permutations(range(4)))
def test_variance_permutation_invariant(seed, perm):
    rng = np.random.default_rng(seed)
    d = pairwise_distances(PointCloud(rng.uniform(size=(20, 2))))
    subs = draw_subsamples(20, 4, 0.75, seed=seed)
    a = variance_estimate(d, "row-normalized-ball", 0.4, 1.0, subs)
    b = variance_estimate(d, "row-normalized-ball", 0.4, 1.0, [subs[i] for i in perm])
    assert a == pytest.approx(b, abs=1e-12)


def test_two_components_in_gap_window():
    # two clusters 1 apart, inner spacing 0.1: every r in (0.1, 1) sees 2 components
    left = np.linspace(0, 0.5, 6)
    coords = np.concatenate([left, left + 1.5])[:, None]
    d = pairwise_distances(PointCloud(coords))
    grid = RadiusGrid(np.linspace(0.15, 0.95, 9))
    for r in grid.radii:
        W = evaluate_kernel_matrix(KernelSpec("row-normalized-ball", r), d)
        lam = np.linalg.eigvalsh(heat_operator(build_laplacian(W)).H)
        assert np.count_nonzero(lam >= 1 - 1e-6) == 2
