import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from visassist.numerics import (
    BRUTE_FORCE_MAX_POINTS,
    ClusterModel,
    brute_force_clusters,
    inertia,
    iterative_zscore_mask,
    kmeans_1d,
    population_std,
    zscores,
)


def test_zscores_hand_example():
    # mean 20, population sd 40
    assert zscores([0, 0, 0, 0, 100]) == [-0.5, -0.5, -0.5, -0.5, 2.0]


def test_zscores_zero_spread():
    assert zscores([7, 7, 7]) == [0.0, 0.0, 0.0]


def test_zscores_symmetric_pair():
    assert zscores([-1, 1]) == [-1.0, 1.0]


def test_zscores_rejects_empty():
    with pytest.raises(ValueError):
        zscores([])


def test_rounding_noise_is_zero_spread():
    values = [0.1] * 10
    assert population_std(values) == 0.0
    assert zscores(values) == [0.0] * 10


@given(st.lists(st.integers(-10**6, 10**6).map(lambda v: v / 100), min_size=2, max_size=40))
def test_zscores_have_zero_mean_unit_variance(values):
    z = np.array(zscores(values))
    if np.all(z == 0):
        return
    assert abs(z.mean()) < 1e-9
    assert abs((z ** 2).mean() - 1) < 1e-9


def test_iterative_mask_removes_single_outlier_then_stops():
    mask, passes = iterative_zscore_mask([0, 0, 0, 0, 100], 1.75)
    assert mask.tolist() == [True, True, True, True, False]
    # second round sees zero spread and stops without a pass
    assert passes == 1


def test_iterative_mask_keeps_evenly_spaced():
    mask, passes = iterative_zscore_mask([100, 110, 120, 130, 140], 1.75)
    assert mask.all()
    assert passes == 1


# --- oracle -----------------------------------------------------------------

def _all_partitions_inertia(points, k):
    """Minimum inertia over *every* labelling (not just contiguous ones)."""
    x = np.asarray(points, dtype=float)
    best = math.inf
    for labels in itertools.product(range(k), repeat=len(x)):
        if len(set(labels)) != k:
            continue
        labels = np.array(labels)
        total = sum(float(np.sum((x[labels == j] - x[labels == j].mean()) ** 2)) for j in range(k))
        best = min(best, total)
    return best


@pytest.mark.parametrize(
    "points,k",
    [([0, 10, 500], 2), ([0, 1, 100, 101], 2), ([50, 80, 260, 300], 2), ([3, 9, 1, 40, 41, 90], 3)],
)
def test_brute_force_matches_unrestricted_enumeration(points, k):
    assert brute_force_clusters(points, k).inertia == pytest.approx(_all_partitions_inertia(points, k), abs=1e-9)


def test_brute_force_examples():
    m = brute_force_clusters([0, 10, 500], 2)
    assert m.assignment == (0, 0, 1)
    assert m.centroids == (5.0, 500.0)

    assert brute_force_clusters([1, 2, 3], 3).inertia == 0.0

    m = brute_force_clusters([0, 1, 100, 101], 2)
    assert m.assignment == (0, 0, 1, 1)
    assert m.inertia == pytest.approx(1.0)


def test_brute_force_unsorted_input_maps_back():
    m = brute_force_clusters([101, 0, 100, 1], 2)
    assert m.assignment == (1, 0, 1, 0)


def test_brute_force_size_guard():
    with pytest.raises(ValueError):
        brute_force_clusters(list(range(BRUTE_FORCE_MAX_POINTS + 1)), 2)


# --- kmeans -----------------------------------------------------------------

def test_kmeans_two_columns():
    m = kmeans_1d([50, 80, 260, 300], 2)
    assert m.centroids == (65.0, 280.0)
    assert m.assignment == (0, 0, 1, 1)
    # frozen from the brute-force oracle: (15^2 + 15^2) + (20^2 + 20^2)
    assert m.inertia == pytest.approx(1250.0, abs=1e-9)
    assert m.inertia == pytest.approx(brute_force_clusters([50, 80, 260, 300], 2).inertia, abs=1e-9)


def test_kmeans_k_equals_n_is_exact():
    pts = [5, 1, 9, 3]
    m = kmeans_1d(pts, 4)
    assert m.inertia == 0.0
    assert m.centroids == (1.0, 3.0, 5.0, 9.0)
    assert m.assignment == (2, 0, 3, 1)


def test_kmeans_single_cluster_is_mean():
    pts = [2.0, 4.0, 9.0, 1.0]
    m = kmeans_1d(pts, 1)
    assert m.centroids[0] == pytest.approx(np.mean(pts))
    assert m.inertia == pytest.approx(np.var(pts) * len(pts))


def test_kmeans_rejects_k_above_n():
    with pytest.raises(ValueError):
        kmeans_1d([1, 2], 3)


def test_kmeans_reseeds_empty_clusters():
    # duplicate seeds collapse onto one value; re-seeding must still yield k non-empty clusters
    m = kmeans_1d([0, 0, 0, 0, 10], 3)
    assert sorted(set(m.assignment)) == [0, 1, 2]


def test_quantile_seeding_can_stall_in_a_local_optimum():
    # seeds 0, 1, 6 pull 4 and 6 together; gap seeding starts from the optimum
    pts = [0.0, 0.5, 1.0, 4.0, 6.0]
    stalled = kmeans_1d(pts, 3, init="quantile")
    assert stalled.assignment == (0, 0, 1, 2, 2)
    assert stalled.inertia > brute_force_clusters(pts, 3).inertia
    assert kmeans_1d(pts, 3).assignment == (0, 0, 0, 1, 2)


def test_kmeans_rejects_unknown_init():
    with pytest.raises(ValueError):
        kmeans_1d([1, 2, 3], 2, init="random")


def test_kmeans_is_deterministic():
    rng = np.random.default_rng(3)
    pts = rng.uniform(0, 1000, 30)
    assert kmeans_1d(pts, 4) == kmeans_1d(pts, 4)


def _separated(draw_clusters):
    points = []
    offset = 0.0
    for spread, size, gap_factor in draw_clusters:
        cluster = [offset + spread * i / max(size - 1, 1) for i in range(size)]
        points.extend(cluster)
        # gap strictly larger than every diameter
        offset = cluster[-1] + gap_factor
    return points


@st.composite
def separated_points(draw):
    k = draw(st.integers(1, 4))
    sizes = draw(st.lists(st.integers(1, 3), min_size=k, max_size=k))
    spreads = draw(st.lists(st.floats(0, 50), min_size=k, max_size=k))
    max_diam = max(spreads)
    clusters = [(s, n, max_diam + draw(st.floats(1, 400))) for s, n in zip(spreads, sizes)]
    points = _separated(clusters)
    perm = draw(st.permutations(range(len(points))))
    return [points[i] for i in perm], k


@given(separated_points())
@settings(max_examples=200, deadline=None)
def test_kmeans_matches_oracle_on_separated_points(case):
    points, k = case
    got = kmeans_1d(points, k)
    want = brute_force_clusters(points, k)
    assert got.assignment == want.assignment
    assert abs(got.inertia - want.inertia) <= 1e-9


@given(st.lists(st.floats(0, 2000), min_size=1, max_size=40), st.integers(1, 6),
       st.sampled_from(["gaps", "quantile"]))
@settings(max_examples=300, deadline=None)
def test_lloyd_invariants(points, k, init):
    k = min(k, len(points))
    m = kmeans_1d(points, k, init=init)
    hist = m.inertia_history
    scale = max(1.0, hist[0])
    assert all(b <= a + 1e-12 * scale for a, b in zip(hist, hist[1:]))
    assert m.inertia <= hist[-1] + 1e-12 * scale
    assert m.inertia == pytest.approx(inertia(points, m.assignment, m.centroids))
    assert list(m.centroids) == sorted(m.centroids)
    # every point sits with its nearest centroid
    x = np.asarray(points)
    c = np.asarray(m.centroids)
    d = np.abs(x[:, None] - c[None, :])
    assert np.all(d[np.arange(len(x)), m.assignment] <= d.min(axis=1) + 1e-9)


def test_cluster_model_members():
    m = ClusterModel(centroids=(0.0, 5.0), assignment=(1, 0, 1), inertia=0.0)
    assert m.members() == [[1], [0, 2]]
    assert m.k == 2
