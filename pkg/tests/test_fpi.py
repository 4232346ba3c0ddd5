"""Farthest-point insertion: traces, guarantees, ratio formulas."""

from math import sqrt

import numpy as np
import pytest

from gapsampler import (GapError, build_cloud, build_euclidean, build_graph,
                        build_graph_metric, farthest_point_insertion,
                        fpi_ratio_bound, rho)


def line_metric(n=10):
    return build_euclidean(build_cloud([float(i) for i in range(n)]))


def test_line10_k3_trace():
    sample, trace = farthest_point_insertion(line_metric(), 3)
    assert sample.indices == (0, 4, 9)  # tie 4 vs 5 broken low
    assert trace.init_pair == (0, 9) and trace.r_init == 4.5 and trace.R_init == 4.0
    step = trace.steps[0]
    assert step.chosen == 4 and step.R_before == 4.0
    assert step.r_after == 2.0 and step.R_after == 2.0
    assert trace.final.gap_ratio == 1.0


def test_k_equals_n():
    sample, trace = farthest_point_insertion(line_metric(5), 5)
    assert sample.indices == (0, 1, 2, 3, 4)
    assert trace.final.R == 0.0 and trace.final.gap_ratio == 0.0


def test_k_out_of_range():
    for k in (1, 11):
        with pytest.raises(GapError) as e:
            farthest_point_insertion(line_metric(), k)
        assert e.value.code == "k-out-of-range"


def test_c6_run_is_exact():
    g = build_graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)])
    m = build_graph_metric(g)
    sample, trace = farthest_point_insertion(m, 3)
    assert trace.init_pair == (0, 3)
    # after {0,3} every vertex is at distance 1; smallest index wins
    assert trace.steps[0].chosen == 1
    assert sample.indices == (0, 1, 3)
    assert trace.final.r == 0.5 and trace.final.R == 1.0


def step_invariants(trace):
    prev_R = trace.R_init
    for step in trace.steps:
        # the trigger distance IS the covering radius of the previous set
        assert step.R_before == prev_R
        assert step.r_after == step.R_before / 2.0  # bit-exact halving
        assert step.R_after <= step.R_before
        assert step.R_after / step.r_after <= 2.0 + 1e-12
        prev_R = step.R_after
    assert trace.R_init / trace.r_init <= 2.0 + 1e-12


def test_step_invariants_random_euclidean():
    rng = np.random.default_rng(42)
    for _ in range(25):
        n = int(rng.integers(5, 60))
        d = int(rng.integers(1, 4))
        m = build_euclidean(build_cloud(rng.random((n, d))))
        k = int(rng.integers(2, min(n, 12) + 1))
        _, trace = farthest_point_insertion(m, k)
        step_invariants(trace)
        assert trace.final.gap_ratio <= 2.0 + 1e-12


def test_scaling_invariance():
    rng = np.random.default_rng(5)
    pts = rng.random((30, 2))
    s1, t1 = farthest_point_insertion(build_euclidean(build_cloud(pts)), 6)
    s2, t2 = farthest_point_insertion(build_euclidean(build_cloud(pts * 4.0)), 6)
    assert s1.indices == s2.indices
    assert t2.final.r == pytest.approx(4.0 * t1.final.r, rel=1e-12)
    assert t2.final.R == pytest.approx(4.0 * t1.final.R, rel=1e-12)


def test_ratio_bound_values():
    assert fpi_ratio_bound(1.0) == 2.0
    assert fpi_ratio_bound(2.0 / 3.0) == 3.0
    assert fpi_ratio_bound(0.5) == pytest.approx(8.0 / 3.0)
    assert fpi_ratio_bound(2.0) == 1.0
    # the two branches meet continuously at 2/3
    assert fpi_ratio_bound(2.0 / 3.0 - 1e-12) == pytest.approx(3.0, abs=1e-9)
    with pytest.raises(GapError):
        fpi_ratio_bound(0.0)


def test_ratio_bound_never_exceeds_three():
    for a in np.linspace(0.01, 5.0, 500):
        assert fpi_ratio_bound(float(a)) <= 3.0 + 1e-12


def test_rho_values():
    assert rho(100) == pytest.approx(1.9405796632080388, rel=1e-15)
    assert abs(rho(10 ** 8) - sqrt(3.0)) < 1e-3
    with pytest.raises(GapError):
        rho(1)


def test_rho_monotone_decreasing():
    vals = [rho(k) for k in range(2, 10001)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] > sqrt(3.0)
