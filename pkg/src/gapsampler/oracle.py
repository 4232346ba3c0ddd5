"""Exhaustive gap-ratio oracle and executable reduction certificates.

The oracle enumerates every k-subset of a finite metric and reports three
independent optima: the best gap ratio GR_OPT, the smallest covering radius
R_OPT, and the largest packing radius r_OPT.  Note GR_OPT is generally NOT
R_OPT / r_OPT; the three quantities are optimized by different subsets.

The certifiers turn two combinatorial equivalences into runnable checks,
both on exact doubled-integer arithmetic so that equalities are equalities:

- a graph has an independent dominating set of size k iff the complete
  metric that gives its edges weight 1 and its non-edges weight 2 admits a
  k-sample with gap ratio exactly 1;
- on the shortest-path metric of a connected unweighted graph, a vertex set
  D is an efficient dominating set (|N[v] & D| = 1 for every v) iff the
  sample D has minimum gap exactly 3/2 and covering radius exactly 1,
  which is the only way a graph sample attains the global floor GR = 2/3.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, islice
from math import comb
from typing import Iterator, Optional

import numpy as np

from .errors import GapError, GuardExceeded, CertificationError
from .metric import (FiniteMetric, Graph, Sample, build_explicit,
                     build_graph_metric, gap_ratio, make_sample)

DEFAULT_GUARD = 10_000_000


@dataclass(frozen=True)
class OracleResult:
    best_sample: Sample
    gr_opt: float   # minimum gap ratio over all k-subsets
    R_opt: float    # minimum covering radius over all k-subsets
    r_opt: float    # maximum packing radius over all k-subsets
    subsets_examined: int


# ---------------------------------------------------------------------------
# vectorized subset enumeration (shared with the coreset search)


def iter_subset_chunks(n: int, k: int, chunk: int = 65536) -> Iterator[np.ndarray]:
    """Yield (m, k) index arrays covering all k-subsets of range(n) in
    lexicographic order."""
    gen = combinations(range(n), k)
    while True:
        block = list(islice(gen, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.int64)


def subset_gap_stats(dist: np.ndarray, idx: np.ndarray) -> tuple:
    """Per-subset (gap_ratio, r, R) for an (m, k) index array.

    r and R are both measured inside the space `dist` describes: r from the
    subset's pairwise distances, R as the covering radius over all sites.
    """
    k = idx.shape[1]
    sub = dist[idx[:, :, None], idx[:, None, :]]  # (m, k, k)
    iu = np.triu_indices(k, 1)
    q = sub[:, iu[0], iu[1]].min(axis=1)
    cover = dist[idx].min(axis=1).max(axis=1)  # (m, k, n) -> (m, n) -> (m,)
    r = q / 2.0
    return cover / r, r, cover


def optimal_gap_ratio(m: FiniteMetric, k: int, guard: int = DEFAULT_GUARD,
                      force: bool = False) -> OracleResult:
    """Exhaustive minimum of GR over all k-subsets, lexicographic tie-break.

    Refuses instances with more than ``guard`` subsets unless forced.
    """
    k = int(k)
    if not 2 <= k <= m.n:
        raise GapError("k-out-of-range", f"k must satisfy 2 <= k <= {m.n}, got {k}")
    total = comb(m.n, k)
    if total > guard and not force:
        raise GuardExceeded(
            f"C({m.n}, {k}) = {total} subsets exceeds the guard {guard}; "
            f"raise --guard or force to proceed")
    best_gr = np.inf
    best_idx: Optional[np.ndarray] = None
    R_opt = np.inf
    r_opt = -np.inf
    for idx in iter_subset_chunks(m.n, k):
        gr, r, cover = subset_gap_stats(m.dist, idx)
        pos = int(np.argmin(gr))  # first occurrence keeps lexicographic order
        if gr[pos] < best_gr:
            best_gr = float(gr[pos])
            best_idx = idx[pos]
        R_opt = min(R_opt, float(cover.min()))
        r_opt = max(r_opt, float(r.max()))
    assert best_idx is not None
    return OracleResult(best_sample=make_sample(best_idx, m.n),
                        gr_opt=best_gr, R_opt=R_opt, r_opt=r_opt,
                        subsets_examined=total)


# ---------------------------------------------------------------------------
# domination predicates


def _check_vertices(g: Graph, D) -> list:
    verts = [int(v) for v in D]
    for v in verts:
        if not 0 <= v < g.n:
            raise GapError("index-out-of-range", f"vertex {v} outside [0, {g.n})")
    if len(set(verts)) != len(verts):
        raise GapError("duplicate-indices", "vertex set has duplicates")
    return verts


def _adjacency_matrix(g: Graph) -> np.ndarray:
    adj = np.zeros((g.n, g.n), dtype=bool)
    for u, v, _ in g.edges:
        adj[u, v] = adj[v, u] = True
    return adj


def is_independent_dominating(g: Graph, D) -> bool:
    """True iff D spans no edge and every vertex is in or adjacent to D."""
    verts = _check_vertices(g, D)
    if not verts:
        return g.n == 0
    adj = _adjacency_matrix(g)
    idx = np.array(verts)
    if adj[np.ix_(idx, idx)].any():
        return False
    closed = adj[idx].any(axis=0)
    closed[idx] = True
    return bool(closed.all())


def is_efficient_dominating(g: Graph, D) -> bool:
    """True iff every closed neighborhood N[v] meets D exactly once."""
    verts = _check_vertices(g, D)
    adj = _adjacency_matrix(g).astype(np.int64)
    np.fill_diagonal(adj, 1)
    if not verts:
        return False
    counts = adj[:, np.array(verts)].sum(axis=1)
    return bool((counts == 1).all())


# ---------------------------------------------------------------------------
# reductions


def genmet_reduce(g: Graph) -> FiniteMetric:
    """Complete {1, 2}-metric of a simple graph: edges get weight 1,
    non-edges weight 2.  Any weight profile in {1, 2} satisfies the triangle
    inequality, so this is a metric for every simple graph, connected or not.
    """
    if g.n < 2:
        raise GapError("too-few-sites", "reduction needs at least 2 vertices")
    adj = _adjacency_matrix(g)
    dist = np.where(adj, 1.0, 2.0)
    np.fill_diagonal(dist, 0.0)
    exact2x = np.where(adj, 2, 4).astype(np.int64)
    np.fill_diagonal(exact2x, 0)
    return build_explicit(dist, exact2x=exact2x)


def _gap_ratio_one_witness(exact2x: np.ndarray, k: int) -> Optional[tuple]:
    """First k-subset (lexicographic) with gap ratio exactly 1.

    With e = exact2x: GR = 2*R2/q2 where q2 is the subset's doubled minimum
    pairwise distance and R2 its doubled covering radius, so GR == 1 is the
    integer test 2*R2 == q2.
    """
    n = exact2x.shape[0]
    iu = np.triu_indices(k, 1)
    for idx in iter_subset_chunks(n, k):
        sub = exact2x[idx[:, :, None], idx[:, None, :]]
        q2 = sub[:, iu[0], iu[1]].min(axis=1)
        R2 = exact2x[idx].min(axis=1).max(axis=1)
        where = np.flatnonzero(2 * R2 == q2)
        if where.size:
            return tuple(int(v) for v in idx[where[0]])
    return None


def check_genmet_equivalence(g: Graph, k: int, guard: int = DEFAULT_GUARD) -> tuple:
    """Certify: an independent dominating set of size k exists iff the
    {1, 2}-metric admits a k-sample with gap ratio exactly 1.

    Returns (answer, certificates); raises CertificationError if the two
    exhaustive searches ever disagree.
    """
    k = int(k)
    if not 2 <= k < g.n:
        raise GapError("k-out-of-range",
                       f"certifier needs 2 <= k < n, got k={k}, n={g.n}")
    total = comb(g.n, k)
    if total > guard:
        raise GuardExceeded(f"C({g.n}, {k}) = {total} exceeds the guard {guard}")
    ids_witness = None
    for subset in combinations(range(g.n), k):
        if is_independent_dominating(g, subset):
            ids_witness = subset
            break
    metric = genmet_reduce(g)
    gr1_witness = _gap_ratio_one_witness(metric.exact2x, k)
    if (ids_witness is None) != (gr1_witness is None):
        raise CertificationError(
            f"equivalence failed on n={g.n}, k={k}: "
            f"independent dominating witness {ids_witness}, "
            f"gap-ratio-1 witness {gr1_witness}")
    answer = ids_witness is not None
    certificates = {
        "independent_dominating": ids_witness,
        "gap_ratio_one": gr1_witness,
        "subsets_examined": total,
    }
    return answer, certificates


def check_eds_equivalence(g: Graph, k: int, guard: int = DEFAULT_GUARD) -> tuple:
    """Certify, for every k-subset D of a connected unweighted graph:
    D is an efficient dominating set iff the sample D has r = 3/2 and R = 1
    on the shortest-path metric (integer arithmetic: q2 = 6, R2 = 2).

    Returns (exists, certificates) where ``exists`` says whether any size-k
    efficient dominating set was found.
    """
    k = int(k)
    if not 2 <= k < g.n:
        raise GapError("k-out-of-range",
                       f"certifier needs 2 <= k < n, got k={k}, n={g.n}")
    if g.weighted:
        raise GapError("weighted-unsupported",
                       "efficient-domination equivalence needs an unweighted graph")
    total = comb(g.n, k)
    if total > guard:
        raise GuardExceeded(f"C({g.n}, {k}) = {total} exceeds the guard {guard}")
    metric = build_graph_metric(g)
    e = metric.exact2x
    witness = None
    count = 0
    iu = np.triu_indices(k, 1)
    for subset in combinations(range(g.n), k):
        idx = np.array(subset)
        sub = e[np.ix_(idx, idx)]
        q2 = int(sub[iu].min())
        R2 = int(e[:, idx].min(axis=1).max())
        profile = (q2 == 6) and (R2 == 2)  # r = 3/2 and R = 1
        eds = is_efficient_dominating(g, subset)
        if eds != profile:
            raise CertificationError(
                f"equivalence failed on n={g.n}, k={k}, D={subset}: "
                f"efficient-dominating={eds} but (r=3/2, R=1)={profile}")
        if eds:
            count += 1
            if witness is None:
                witness = subset
    certificates = {
        "efficient_dominating": witness,
        "eds_count": count,
        "subsets_examined": total,
    }
    return witness is not None, certificates
