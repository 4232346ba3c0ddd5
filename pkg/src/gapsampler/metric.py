"""Finite metric spaces and exact gap evaluation.

A sample P drawn from a finite metric space (M, delta) is judged by two
radii.  The minimum gap r is half the smallest pairwise distance inside P:
the radius of the largest equal balls around the sampled sites whose
interiors stay disjoint.  The maximum gap R is the covering radius: the
largest distance from any site of M to its nearest sampled site.  Their
quotient GR = R / r is the gap ratio; the lower it is, the more evenly the
sample spreads over the space.

Distances live in float64 matrices.  Metrics whose distances are all
half-integers (shortest paths of unweighted graphs, the {1,2} clique
reductions) also carry ``exact2x``, the doubled distance matrix in int64,
so that equality tests on r, R and GR can run on integers instead of
tolerances.  Halves are exactly representable in binary floats, so the two
representations agree bit for bit wherever both exist.

All functions here are pure; every returned object is immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import GapError

# Tolerance for the triangle-inequality audit of explicit matrices.
TRIANGLE_TOL = 1e-9


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class PointCloud:
    """Deduplicated ordered list of d-dimensional points.

    ``duplicates_removed`` records how many exact coordinate duplicates were
    dropped at ingestion (keeping the first occurrence).  Duplicates would
    allow samples with r = 0, for which the gap ratio is undefined.
    """

    dim: int
    points: np.ndarray  # (n, dim) float64, C-contiguous, read-only
    labels: Optional[tuple] = None
    duplicates_removed: int = 0

    @property
    def n(self) -> int:
        return int(self.points.shape[0])


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; unweighted edges carry weight 1.0."""

    n: int
    edges: tuple  # ((u, v, w), ...) with u < v
    weighted: bool


@dataclass(frozen=True)
class FiniteMetric:
    """Symmetric distance matrix over n sites.

    ``exact2x`` is 2*dist as int64 whenever every distance is an exact
    half-integer; it is always present for unweighted graph metrics.
    ``source`` is one of ``euclidean``, ``graph``, ``explicit``.
    """

    n: int
    dist: np.ndarray  # (n, n) float64
    source: str
    exact2x: Optional[np.ndarray] = None  # (n, n) int64


@dataclass(frozen=True)
class Sample:
    """Strictly increasing site indices, k >= 2 (r is undefined below that)."""

    indices: tuple


@dataclass(frozen=True)
class GapReport:
    """Minimum gap, maximum gap, their ratio, and realizing witnesses."""

    r: float
    R: float
    gap_ratio: float
    closest_pair: tuple  # (i, j), i < j, realizes 2*r
    farthest_site: int  # realizes R; smallest such index
    exact: bool  # computed with an exact2x matrix present


# ---------------------------------------------------------------------------
# constructors


def build_cloud(points: Iterable, labels: Optional[Sequence] = None) -> PointCloud:
    """Ingest points, validating coordinates and dropping exact duplicates."""
    arr = np.asarray(list(points) if not isinstance(points, np.ndarray) else points,
                     dtype=np.float64)
    if arr.ndim == 1 and arr.size > 0:
        arr = arr[:, None]  # allow plain scalars for 1-D clouds
    if arr.size == 0:
        raise GapError("empty-cloud", "point cloud has no points")
    if arr.ndim != 2:
        raise GapError("malformed-points", "points must be an (n, d) array")
    if not np.isfinite(arr).all():
        bad = np.argwhere(~np.isfinite(arr))[0]
        raise GapError("nonfinite-coordinate",
                       f"point {bad[0]} has a non-finite coordinate {bad[1]}")
    if labels is not None and len(labels) != arr.shape[0]:
        raise GapError("malformed-points", "labels length does not match points")

    seen: dict = {}
    keep = []
    for i in range(arr.shape[0]):
        key = arr[i].tobytes()
        if key not in seen:
            seen[key] = i
            keep.append(i)
    dropped = arr.shape[0] - len(keep)
    arr = np.ascontiguousarray(arr[keep])
    arr.setflags(write=False)
    kept_labels = tuple(labels[i] for i in keep) if labels is not None else None
    return PointCloud(dim=int(arr.shape[1]), points=arr, labels=kept_labels,
                      duplicates_removed=dropped)


def build_graph(n: int, edges: Iterable, weighted: Optional[bool] = None,
                require_connected: bool = True) -> Graph:
    """Validate a simple undirected graph.

    ``edges`` yields (u, v) or (u, v, w) tuples, 0-based.  When ``weighted``
    is None it is inferred: True iff any edge came with an explicit weight.
    Connectivity is required by default; the {1,2} clique reduction is the
    one consumer that accepts disconnected inputs.
    """
    if n < 1:
        raise GapError("empty-graph", "graph needs at least one vertex")
    norm = []
    seen = set()
    saw_weight = False
    for e in edges:
        if len(e) == 2:
            u, v = e
            w = 1.0
        elif len(e) == 3:
            u, v, w = e
            saw_weight = True
        else:
            raise GapError("malformed-graph", f"edge {e!r} is not (u, v) or (u, v, w)")
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise GapError("malformed-graph", f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise GapError("malformed-graph", f"self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GapError("malformed-graph", f"parallel edge ({key[0]}, {key[1]})")
        seen.add(key)
        w = float(w)
        if not (w > 0 and np.isfinite(w)):
            raise GapError("malformed-graph", f"edge ({u}, {v}) weight {w} not positive")
        norm.append((key[0], key[1], w))
    if weighted is None:
        weighted = saw_weight
    g = Graph(n=n, edges=tuple(sorted(norm)), weighted=bool(weighted))
    if require_connected:
        pair = _unreachable_pair(g)
        if pair is not None:
            raise GapError("disconnected-graph",
                           f"vertices {pair[0]} and {pair[1]} are not connected")
    return g


def _adjacency_lists(g: Graph) -> list:
    adj: list = [[] for _ in range(g.n)]
    for u, v, w in g.edges:
        adj[u].append((v, w))
        adj[v].append((u, w))
    return adj


def _unreachable_pair(g: Graph) -> Optional[tuple]:
    adj = _adjacency_lists(g)
    seen = np.zeros(g.n, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        u = stack.pop()
        for v, _ in adj[u]:
            if not seen[v]:
                seen[v] = True
                stack.append(v)
    if seen.all():
        return None
    return (0, int(np.flatnonzero(~seen)[0]))


def build_euclidean(cloud: PointCloud) -> FiniteMetric:
    """L2 distance matrix over a point cloud."""
    pts = cloud.points
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=-1))
    np.fill_diagonal(dist, 0.0)
    dist.setflags(write=False)
    return FiniteMetric(n=cloud.n, dist=dist, source="euclidean")


def build_graph_metric(g: Graph) -> FiniteMetric:
    """All-pairs shortest-path metric of a connected graph.

    Breadth-first search per source for unweighted graphs, Floyd-Warshall
    otherwise.  exact2x is populated whenever every edge weight is an exact
    half-integer (then every path length is too).
    """
    pair = _unreachable_pair(g)
    if pair is not None:
        raise GapError("disconnected-graph",
                       f"vertices {pair[0]} and {pair[1]} are not connected")
    n = g.n
    if not g.weighted:
        adj = _adjacency_lists(g)
        dist = np.zeros((n, n), dtype=np.float64)
        for s in range(n):
            d = np.full(n, -1, dtype=np.int64)
            d[s] = 0
            frontier = [s]
            while frontier:
                nxt = []
                for u in frontier:
                    for v, _ in adj[u]:
                        if d[v] < 0:
                            d[v] = d[u] + 1
                            nxt.append(v)
                frontier = nxt
            dist[s] = d
        exact2x = (2 * dist).astype(np.int64)
    else:
        dist = np.full((n, n), np.inf)
        np.fill_diagonal(dist, 0.0)
        for u, v, w in g.edges:
            dist[u, v] = min(dist[u, v], w)
            dist[v, u] = dist[u, v]
        for k in range(n):
            np.minimum(dist, dist[:, k:k + 1] + dist[k:k + 1, :], out=dist)
        half = all(float(w * 2).is_integer() for _, _, w in g.edges)
        exact2x = (2 * dist).astype(np.int64) if half else None
    dist.setflags(write=False)
    if exact2x is not None:
        exact2x.setflags(write=False)
    return FiniteMetric(n=n, dist=dist, source="graph", exact2x=exact2x)


def build_explicit(dist, exact2x=None) -> FiniteMetric:
    """Validate and wrap an explicit distance matrix.

    Checks symmetry, a zero diagonal with positive off-diagonal entries, and
    the triangle inequality within TRIANGLE_TOL.
    """
    d = np.asarray(dist, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] < 1:
        raise GapError("invalid-matrix", "distance matrix must be square")
    n = d.shape[0]
    if not np.isfinite(d).all():
        raise GapError("invalid-matrix", "distance matrix has non-finite entries")
    if not (d == d.T).all():
        raise GapError("invalid-matrix", "distance matrix is not symmetric")
    if (np.diag(d) != 0).any():
        raise GapError("invalid-matrix", "diagonal must be zero")
    off = d + np.where(np.eye(n, dtype=bool), np.inf, 0.0)
    if (off <= 0).any():
        i, j = np.argwhere(off <= 0)[0]
        raise GapError("invalid-matrix", f"distance between distinct sites {i} and {j} is not positive")
    # min over k of d[i,k]+d[k,j]; k=i makes this <= d[i,j], so only check the deficit
    best = np.full((n, n), np.inf)
    for k in range(n):
        np.minimum(best, d[:, k:k + 1] + d[k:k + 1, :], out=best)
    viol = d - best
    if (viol > TRIANGLE_TOL).any():
        i, j = np.argwhere(viol > TRIANGLE_TOL)[0]
        raise GapError("invalid-matrix",
                       f"triangle inequality violated at sites ({i}, {j})")
    if exact2x is not None:
        e = np.asarray(exact2x, dtype=np.int64)
        if e.shape != d.shape or (e / 2.0 != d).any():
            raise GapError("invalid-matrix", "exact2x does not equal 2*dist")
        e = e.copy()
        e.setflags(write=False)
        exact2x = e
    d = d.copy()
    d.setflags(write=False)
    return FiniteMetric(n=n, dist=d, source="explicit", exact2x=exact2x)


# ---------------------------------------------------------------------------
# samples


def make_sample(indices: Iterable, n: int) -> Sample:
    """Validate indices: distinct, in [0, n), k >= 2; stored sorted."""
    idx = [int(i) for i in indices]
    if len(idx) < 2:
        raise GapError("sample-too-small", "a sample needs at least 2 sites")
    if len(set(idx)) != len(idx):
        raise GapError("duplicate-indices", "sample indices must be distinct")
    if min(idx) < 0 or max(idx) >= n:
        raise GapError("index-out-of-range",
                       f"sample index outside [0, {n})")
    return Sample(indices=tuple(sorted(idx)))


def _as_indices(m: FiniteMetric, p, min_size: int) -> np.ndarray:
    if isinstance(p, Sample):
        idx = list(p.indices)
    else:
        idx = [int(i) for i in p]
    if len(idx) < min_size:
        raise GapError("sample-too-small",
                       f"operation needs at least {min_size} sampled sites")
    if len(set(idx)) != len(idx):
        raise GapError("duplicate-indices", "sample indices must be distinct")
    arr = np.array(sorted(idx), dtype=np.int64)
    if arr[0] < 0 or arr[-1] >= m.n:
        raise GapError("index-out-of-range", f"sample index outside [0, {m.n})")
    return arr


# ---------------------------------------------------------------------------
# gap evaluation


def min_gap(m: FiniteMetric, p) -> tuple:
    """(r, closest_pair): half the minimum pairwise distance within p.

    The witness pair is the lexicographically smallest one realizing the
    minimum.  Runs on exact2x when present (the float path gives bit-equal
    results since half-integers are exact, but ties are then integer ties).
    """
    idx = _as_indices(m, p, 2)
    mat = m.exact2x if m.exact2x is not None else m.dist
    sub = mat[np.ix_(idx, idx)]
    k = len(idx)
    iu = np.triu_indices(k, 1)
    vals = sub[iu]
    pos = int(np.argmin(vals))  # first occurrence = lexicographic pair
    i, j = int(idx[iu[0][pos]]), int(idx[iu[1][pos]])
    r = float(m.dist[i, j]) / 2.0
    return r, (i, j)


def max_gap(m: FiniteMetric, p) -> tuple:
    """(R, farthest_site): covering radius of p over all sites of m.

    R = max over sites q of min over sampled s of dist(q, s); 0 when p = M.
    Witness is the smallest site index realizing R.
    """
    idx = _as_indices(m, p, 1)
    mat = m.exact2x if m.exact2x is not None else m.dist
    nearest = mat[:, idx].min(axis=1)
    site = int(np.argmax(nearest))  # first occurrence = smallest index
    return float(m.dist[site, idx].min()), site


def gap_ratio(m: FiniteMetric, p) -> GapReport:
    """Full gap report for a sample: r, R, GR = R/r and both witnesses."""
    idx = _as_indices(m, p, 2)
    r, pair = min_gap(m, idx)
    R, site = max_gap(m, idx)
    return GapReport(r=r, R=R, gap_ratio=R / r, closest_pair=pair,
                     farthest_site=site, exact=m.exact2x is not None)


def gap_fraction(m: FiniteMetric, p) -> Fraction:
    """Gap ratio as an exact rational; requires exact2x.

    With e = exact2x = 2*dist: r = min_pair(e)/4 and R = cover(e)/2, so
    GR = 2*cover(e)/min_pair(e).
    """
    if m.exact2x is None:
        raise GapError("exact-unavailable",
                       "metric has no exact doubled-integer representation")
    idx = _as_indices(m, p, 2)
    sub = m.exact2x[np.ix_(idx, idx)]
    iu = np.triu_indices(len(idx), 1)
    q2 = int(sub[iu].min())
    r2 = int(m.exact2x[:, idx].min(axis=1).max())
    return Fraction(2 * r2, q2)


def diameter(m: FiniteMetric) -> tuple:
    """(i, j, dist): lexicographically smallest pair at maximum distance."""
    if m.n < 2:
        raise GapError("too-few-sites", "diameter needs at least 2 sites")
    mat = m.exact2x if m.exact2x is not None else m.dist
    iu = np.triu_indices(m.n, 1)
    vals = mat[iu]
    pos = int(np.argmax(vals))  # row-major first occurrence = lexicographic
    i, j = int(iu[0][pos]), int(iu[1][pos])
    return i, j, float(m.dist[i, j])
