"""Exhaustive oracle and the two domination-reduction certifiers."""

import itertools

import numpy as np
import pytest

from gapsampler import (GapError, GuardExceeded, build_cloud,
                        build_euclidean, build_graph, build_graph_metric,
                        check_eds_equivalence, check_genmet_equivalence,
                        gap_ratio, genmet_reduce, is_efficient_dominating,
                        is_independent_dominating, optimal_gap_ratio)


def c6():
    return build_graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)])


def c4():
    return build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


def p4():
    return build_graph(4, [(0, 1), (1, 2), (2, 3)])


# ---------------------------------------------------------------------------
# oracle


def test_line4_k2():
    m = build_euclidean(build_cloud([0.0, 1.0, 2.0, 3.0]))
    res = optimal_gap_ratio(m, 2)
    assert res.best_sample.indices == (0, 3)
    assert res.gr_opt == pytest.approx(2.0 / 3.0, rel=1e-15)
    assert res.R_opt == 1.0 and res.r_opt == 1.5
    assert res.subsets_examined == 6


def test_c6_k2_exact_floor():
    res = optimal_gap_ratio(build_graph_metric(c6()), 2)
    assert res.best_sample.indices == (0, 3)
    assert res.gr_opt == pytest.approx(2.0 / 3.0, rel=1e-15)


def test_k_equals_n_zero():
    m = build_euclidean(build_cloud([0.0, 1.0, 5.0]))
    res = optimal_gap_ratio(m, 3)
    assert res.gr_opt == 0.0 and res.R_opt == 0.0


def test_guard_refuses_huge_enumerations():
    m = build_euclidean(build_cloud(np.random.default_rng(0).random((40, 2))))
    with pytest.raises(GuardExceeded):
        optimal_gap_ratio(m, 16, guard=1000)
    res = optimal_gap_ratio(m, 2, guard=1000)  # C(40,2) = 780 fits
    assert res.subsets_examined == 780


def test_oracle_matches_bruteforce_replay():
    rng = np.random.default_rng(19)
    pts = rng.random((9, 2))
    m = build_euclidean(build_cloud(pts))
    res = optimal_gap_ratio(m, 3)
    best = None
    R_best, r_best = np.inf, -np.inf
    for subset in itertools.combinations(range(9), 3):
        rep = gap_ratio(m, subset)
        if best is None or rep.gap_ratio < best[1]:
            best = (subset, rep.gap_ratio)
        R_best = min(R_best, rep.R)
        r_best = max(r_best, rep.r)
    assert res.best_sample.indices == best[0]
    assert res.gr_opt == best[1]
    # R_opt and r_opt are independent optima, generally from other subsets
    assert res.R_opt == R_best and res.r_opt == r_best


def test_oracle_tie_break_lexicographic():
    # unit square: the two diagonal pairs tie, (0, 3) enumerates first
    m = build_euclidean(build_cloud([[0, 0], [1, 0], [0, 1], [1, 1]]))
    res = optimal_gap_ratio(m, 2)
    first, best = None, np.inf
    for subset in itertools.combinations(range(4), 2):
        gr = gap_ratio(m, subset).gap_ratio
        if gr < best:
            best, first = gr, subset
    assert res.best_sample.indices == first == (0, 3)


# ---------------------------------------------------------------------------
# domination predicates


def test_independent_dominating_examples():
    assert is_independent_dominating(c4(), [0, 2])
    assert not is_independent_dominating(c4(), [0, 1])  # edge inside D
    p3 = build_graph(3, [(0, 1), (1, 2)])
    assert is_independent_dominating(p3, [1])


def test_efficient_dominating_examples():
    assert is_efficient_dominating(p4(), [0, 3])
    subsets = itertools.chain.from_iterable(
        itertools.combinations(range(4), k) for k in range(1, 5))
    assert not any(is_efficient_dominating(c4(), s) for s in subsets)
    k1 = build_graph(1, [])
    assert is_efficient_dominating(k1, [0])


def test_domination_input_validation():
    with pytest.raises(GapError):
        is_independent_dominating(c4(), [0, 9])
    with pytest.raises(GapError):
        is_efficient_dominating(c4(), [0, 0])


# ---------------------------------------------------------------------------
# reductions


def test_genmet_reduce_matrices():
    p3 = build_graph(3, [(0, 1), (1, 2)])
    m = genmet_reduce(p3)
    assert m.dist[0, 1] == 1.0 and m.dist[1, 2] == 1.0 and m.dist[0, 2] == 2.0
    assert m.exact2x[0, 2] == 4 and m.source == "explicit"
    k3 = build_graph(3, [(0, 1), (0, 2), (1, 2)])
    assert (genmet_reduce(k3).dist + np.eye(3) == 1.0).all()
    e3 = build_graph(3, [], require_connected=False)
    assert (genmet_reduce(e3).dist + 2.0 * np.eye(3) == 2.0).all()


def test_genmet_equivalence_c4():
    answer, certs = check_genmet_equivalence(c4(), 2)
    assert answer
    assert certs["independent_dominating"] == (0, 2)
    assert certs["gap_ratio_one"] == (0, 2)
    assert certs["subsets_examined"] == 6


def test_genmet_equivalence_k3_negative():
    k3 = build_graph(3, [(0, 1), (0, 2), (1, 2)])
    answer, certs = check_genmet_equivalence(k3, 2)
    assert not answer
    assert certs["independent_dominating"] is None
    assert certs["gap_ratio_one"] is None


def test_genmet_witness_has_gap_ratio_one():
    g = build_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    answer, certs = check_genmet_equivalence(g, 2)
    assert answer
    rep = gap_ratio(genmet_reduce(g), certs["gap_ratio_one"])
    assert rep.gap_ratio == 1.0


def test_eds_equivalence_p4_and_c6():
    ok, certs = check_eds_equivalence(p4(), 2)
    assert ok and certs["efficient_dominating"] == (0, 3)
    rep = gap_ratio(build_graph_metric(p4()), (0, 3))
    assert rep.r == 1.5 and rep.R == 1.0
    ok, certs = check_eds_equivalence(c6(), 2)
    assert ok and certs["efficient_dominating"] == (0, 3)
    assert certs["eds_count"] == 3  # the three antipodal pairs


def test_eds_negative_case():
    ok, certs = check_eds_equivalence(c4(), 2)
    assert not ok and certs["efficient_dominating"] is None


def test_certifier_k_range():
    for k in (1, 4):
        with pytest.raises(GapError) as e:
            check_genmet_equivalence(c4(), k)
        assert e.value.code == "k-out-of-range"
    with pytest.raises(GapError):
        check_eds_equivalence(c4(), 1)


def test_eds_rejects_weighted():
    g = build_graph(3, [(0, 1, 2.0), (1, 2, 2.0)])
    with pytest.raises(GapError) as e:
        check_eds_equivalence(g, 2)
    assert e.value.code == "weighted-unsupported"


def test_certifiers_small_exhaustive():
    # every labeled graph on 4 vertices, every valid k; the certifiers
    # raise CertificationError on any internal disagreement
    for mask in range(1 << 6):
        edges = [e for b, e in enumerate(itertools.combinations(range(4), 2))
                 if (mask >> b) & 1]
        g = build_graph(4, edges, require_connected=False)
        for k in (2, 3):
            check_genmet_equivalence(g, k)
            if _connected(g):
                check_eds_equivalence(g, k)


def _connected(g):
    adj = {u: set() for u in range(g.n)}
    for u, v, _ in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    seen, stack = {0}, [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n
