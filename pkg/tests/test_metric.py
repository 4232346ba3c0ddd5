"""Contract tests for metric construction and exact gap evaluation."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from gapsampler import (GapError, build_cloud, build_euclidean, build_explicit,
                        build_graph, build_graph_metric, diameter, gap_fraction,
                        gap_ratio, genmet_reduce, make_sample, max_gap, min_gap)


def line_metric(n=10):
    return build_euclidean(build_cloud([float(i) for i in range(n)]))


def c6_metric():
    g = build_graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)])
    return build_graph_metric(g)


# ---------------------------------------------------------------------------
# construction


def test_euclidean_345():
    m = build_euclidean(build_cloud([[0.0, 0.0], [3.0, 4.0]]))
    assert m.dist[0, 1] == 5.0
    assert m.source == "euclidean" and m.exact2x is None


def test_euclidean_line_matrix():
    m = build_euclidean(build_cloud([0.0, 1.0, 3.0]))
    assert np.array_equal(m.dist, [[0, 1, 3], [1, 0, 2], [3, 2, 0]])


def test_euclidean_triangle_inequality_exhaustive():
    rng = np.random.default_rng(7)
    m = build_euclidean(build_cloud(rng.random((10, 3))))
    for i, j, k in itertools.permutations(range(10), 3):
        assert m.dist[i, j] <= m.dist[i, k] + m.dist[k, j] + 1e-12


def test_cloud_dedupe_keeps_first():
    cloud = build_cloud([[1.0, 2.0], [3.0, 4.0], [1.0, 2.0]], labels=["a", "b", "c"])
    assert cloud.n == 2 and cloud.duplicates_removed == 1
    assert cloud.labels == ("a", "b")


def test_cloud_rejects_bad_input():
    with pytest.raises(GapError, match="no points"):
        build_cloud([])
    with pytest.raises(GapError) as e:
        build_cloud([[0.0], [np.nan]])
    assert e.value.code == "nonfinite-coordinate"
    with pytest.raises(GapError):
        build_cloud([[1.0, 2.0]], labels=["a", "b"])


def test_graph_validation():
    with pytest.raises(GapError, match="out of range"):
        build_graph(3, [(0, 5)])
    with pytest.raises(GapError, match="self-loop"):
        build_graph(3, [(1, 1)])
    with pytest.raises(GapError, match="parallel"):
        build_graph(3, [(0, 1), (1, 0)])
    with pytest.raises(GapError, match="not positive"):
        build_graph(3, [(0, 1, -2.0)])
    with pytest.raises(GapError) as e:
        build_graph(4, [(0, 1), (2, 3)])
    assert e.value.code == "disconnected-graph"
    assert "0" in str(e.value) and "2" in str(e.value)  # names an unreachable pair


def test_graph_metric_path():
    m = build_graph_metric(build_graph(3, [(0, 1), (1, 2)]))
    assert m.dist[0, 2] == 2.0 and m.exact2x[0, 2] == 4
    assert m.source == "graph"


def test_graph_metric_c6_antipodal():
    m = c6_metric()
    assert m.dist[0, 3] == 3.0


def test_graph_metric_weighted_12_clique():
    # complete K4 with {1,2} weights; no 2-hop shortcut can beat a direct edge
    edges = [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0),
             (0, 2, 2.0), (1, 3, 2.0)]
    m = build_graph_metric(build_graph(4, edges))
    for u, v, w in edges:
        assert m.dist[u, v] == w
    assert m.exact2x is not None and m.exact2x[0, 2] == 4


def test_graph_metric_weighted_shortcut():
    # heavy direct edge loses to the two-hop path
    m = build_graph_metric(build_graph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 5.0)]))
    assert m.dist[0, 2] == 2.0


def test_graph_metric_non_half_integer_weights():
    m = build_graph_metric(build_graph(2, [(0, 1, 0.3)]))
    assert m.exact2x is None


def test_explicit_validation():
    with pytest.raises(GapError):
        build_explicit([[0.0, 1.0], [2.0, 0.0]])  # asymmetric
    with pytest.raises(GapError):
        build_explicit([[1.0, 1.0], [1.0, 0.0]])  # nonzero diagonal
    with pytest.raises(GapError):
        build_explicit([[0.0, 0.0], [0.0, 0.0]])  # zero off-diagonal
    bad = [[0.0, 1.0, 9.0], [1.0, 0.0, 1.0], [9.0, 1.0, 0.0]]
    with pytest.raises(GapError, match="triangle"):
        build_explicit(bad)
    with pytest.raises(GapError, match="exact2x"):
        build_explicit([[0.0, 1.0], [1.0, 0.0]], exact2x=[[0, 3], [3, 0]])


def test_explicit_accepts_exact():
    m = build_explicit([[0.0, 1.5], [1.5, 0.0]], exact2x=[[0, 3], [3, 0]])
    assert m.source == "explicit" and m.exact2x[0, 1] == 3


# ---------------------------------------------------------------------------
# samples


def test_make_sample_sorted_and_validated():
    s = make_sample([5, 1, 3], 10)
    assert s.indices == (1, 3, 5)
    with pytest.raises(GapError, match="at least 2"):
        make_sample([1], 10)
    with pytest.raises(GapError, match="distinct"):
        make_sample([1, 1], 10)
    with pytest.raises(GapError, match="outside"):
        make_sample([0, 10], 10)


# ---------------------------------------------------------------------------
# gap evaluation


def test_min_gap_single_pair():
    m = build_euclidean(build_cloud([0.0, 1.0, 3.0]))
    r, pair = min_gap(m, [0, 2])
    assert r == 1.5 and pair == (0, 2)


def test_min_gap_c6_exact():
    r, pair = min_gap(c6_metric(), [0, 3])
    assert r == 1.5 and pair == (0, 3)


def test_min_gap_full_sample():
    m = build_euclidean(build_cloud([0.0, 1.0, 3.0]))
    r, pair = min_gap(m, [0, 1, 2])
    assert r == 0.5 and pair == (0, 1)


def test_max_gap_line_witness_low_tie():
    R, site = max_gap(line_metric(), [0, 9])
    assert R == 4.0 and site == 4  # 4 and 5 tie; smaller index reported


def test_max_gap_whole_space_zero():
    m = line_metric(5)
    R, site = max_gap(m, range(5))
    assert R == 0.0


def test_max_gap_c6():
    R, site = max_gap(c6_metric(), [0, 3])
    assert R == 1.0


def test_gap_ratio_c6_exact_two_thirds():
    m = c6_metric()
    rep = gap_ratio(m, [0, 3])
    assert rep.r == 1.5 and rep.R == 1.0 and rep.exact
    assert gap_fraction(m, [0, 3]) == Fraction(2, 3)


def test_gap_ratio_clique_reduction_c4():
    # 4-cycle edges weight 1, diagonals weight 2: opposite pair is perfect
    c4 = build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    rep = gap_ratio(genmet_reduce(c4), [0, 2])
    assert rep.r == 1.0 and rep.R == 1.0 and rep.gap_ratio == 1.0


def test_gap_ratio_two_cliques_half():
    # unit-distance triple plus a 0.25-distance triple, far apart; sampling
    # one whole clique and one vertex of the other gives GR = 0.25/0.5
    D = np.full((6, 6), 10.0)
    for i in range(3):
        for j in range(3):
            if i != j:
                D[i, j] = 1.0
                D[3 + i, 3 + j] = 0.25
    np.fill_diagonal(D, 0.0)
    rep = gap_ratio(build_explicit(D), [0, 1, 2, 3])
    assert rep.r == 0.5 and rep.R == 0.25 and rep.gap_ratio == 0.5


def test_gap_fraction_requires_exact():
    with pytest.raises(GapError) as e:
        gap_fraction(line_metric(), [0, 9])
    assert e.value.code == "exact-unavailable"


def test_diameter_examples():
    assert diameter(line_metric()) == (0, 9, 9.0)
    assert diameter(c6_metric()) == (0, 3, 3.0)
    pair = build_euclidean(build_cloud([2.0, 7.0]))
    assert diameter(pair) == (0, 1, 5.0)


# ---------------------------------------------------------------------------
# invariants


def test_witnesses_reproduce_radii_bit_exact():
    rng = np.random.default_rng(11)
    for _ in range(20):
        pts = rng.random((rng.integers(5, 20), 2))
        m = build_euclidean(build_cloud(pts))
        idx = rng.choice(m.n, size=rng.integers(2, m.n + 1), replace=False)
        rep = gap_ratio(m, idx)
        i, j = rep.closest_pair
        assert m.dist[i, j] / 2.0 == rep.r
        assert m.dist[rep.farthest_site, sorted(idx)].min() == rep.R
        assert rep.gap_ratio == rep.R / rep.r


def test_exact_and_float_paths_agree():
    rng = np.random.default_rng(3)
    m = c6_metric()
    for k in (2, 3, 4):
        idx = sorted(rng.choice(6, size=k, replace=False))
        rep = gap_ratio(m, idx)
        frac = gap_fraction(m, idx)
        assert abs(rep.gap_ratio - float(frac)) < 1e-12
        assert rep.r * 4 == m.exact2x[rep.closest_pair]  # halves are exact


def test_duplicate_sample_indices_rejected():
    with pytest.raises(GapError):
        gap_ratio(line_metric(), [1, 1, 4])
