"""One-pass streaming coreset via the doubling algorithm.

The stream is summarized twice at once.  A center set T of at most k points
tracks scale: a new point joins T when it is farther than 2*R_thresh from
every center, and when T overflows to k+1 the threshold doubles and T is
greedily re-filtered (in insertion order, keeping a center only if it is
more than R_thresh from everything already kept) until at most k remain.
The threshold only doubles, so R_thresh stays within a constant factor of
the best possible covering radius for k centers; every seen point stays
within 2*R_thresh of T, giving the covering guarantee R_T <= 8 * R_OPT.

A grid coreset rides on top: cell side eps3 * R_thresh / (2 sqrt(d)) with

    eps1 = eps / (2 + eps),   eps3 = eps1 / (4 (3 + 2 eps1)),

representatives are first-seen per cell, and whenever R_thresh doubles the
cell side doubles with it, merging sibling cells (the representative of the
lexicographically smallest nonempty child survives).  Cell indices merge by
integer halving, never by re-deriving from coordinates, so merges are exact.
The final coreset is searched exhaustively like the static one; for
eps < 1/8 the winner's gap ratio over the full stream is within (1 + eps)
of optimal.

Ingestion is strictly sequential; finalization delegates to the shared
subset search.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Iterable, Optional

import numpy as np

from .coreset import GridCoreset, best_k_subset
from .errors import GapError
from .metric import build_cloud, build_euclidean, make_sample


@dataclass(frozen=True)
class StreamParams:
    eps: float   # user eps in (0, 1/8)
    eps1: float  # eps / (2 + eps)
    eps3: float  # eps1 / (4 (3 + 2 eps1)), always < eps1 / 12
    d: int


@dataclass
class StreamState:
    """Mutable doubling-algorithm state; treat as owned by one consumer."""

    params: StreamParams
    k: int
    origin: np.ndarray          # grid anchor: the first point seen
    cell_side: float
    cells: dict                 # cell index tuple -> (stream index, point)
    T: list                     # [(stream index, point), ...] insertion order
    R_thresh: float
    points_seen: int = 0
    phase: int = 0              # number of doublings so far
    peak_cells: int = 0


def stream_params(eps: float, d: int) -> StreamParams:
    eps = float(eps)
    if not 0.0 < eps < 0.125:
        raise GapError("eps-out-of-range", f"eps must lie in (0, 1/8), got {eps}")
    d = int(d)
    if d < 1:
        raise GapError("invalid-dimension", f"dimension must be >= 1, got {d}")
    eps1 = eps / (2.0 + eps)
    eps3 = eps1 / (4.0 * (3.0 + 2.0 * eps1))
    return StreamParams(eps=eps, eps1=eps1, eps3=eps3, d=d)


def _cell_of(state: StreamState, x: np.ndarray) -> tuple:
    raw = np.floor((x - state.origin) / state.cell_side).astype(np.int64)
    return tuple(int(c) for c in raw)


def _grid_insert(state: StreamState, idx: int, x: np.ndarray) -> None:
    cell = _cell_of(state, x)
    if cell not in state.cells:
        state.cells[cell] = (idx, x)
        state.peak_cells = max(state.peak_cells, len(state.cells))


def _merge_cells(cells: dict) -> dict:
    """Halve every cell index; the lexicographically smallest nonempty child
    donates the representative of each merged cell."""
    merged: dict = {}
    for c in sorted(cells):
        parent = tuple(ci // 2 for ci in c)
        if parent not in merged:
            merged[parent] = cells[c]
    return merged


def _dist_to(points: list, x: np.ndarray) -> float:
    return min(float(np.linalg.norm(x - p)) for _, p in points)


def stream_init(first_points: Iterable, k: int, eps: float) -> StreamState:
    """Consume a stream prefix holding at least k distinct points.

    T becomes the first k distinct points and R_thresh their minimum
    pairwise distance; the grid (anchored at the very first point, cell side
    eps3 * R_thresh / (2 sqrt(d))) is seeded with everything consumed so
    far.  Any remaining points of ``first_points`` are ingested normally.
    """
    k = int(k)
    if k < 2:
        raise GapError("k-out-of-range", f"k must be >= 2, got {k}")
    it = iter(first_points)
    prefix = []   # every consumed point, duplicates included
    distinct = []
    rest = []
    for x in it:
        x = np.asarray(x, dtype=np.float64).reshape(-1)
        if len(distinct) < k:
            prefix.append(x)
            if not any(np.array_equal(x, t) for t in distinct):
                distinct.append(x)
        else:
            rest.append(x)
    if len(distinct) < k:
        raise GapError("too-few-distinct",
                       f"stream has only {len(distinct)} distinct points, k={k}")
    d = distinct[0].shape[0]
    for x in prefix + rest:
        if x.shape[0] != d:
            raise GapError("dimension-mismatch", "stream points differ in dimension")
    params = stream_params(eps, d)
    R = min(float(np.linalg.norm(a - b))
            for i, a in enumerate(distinct) for b in distinct[i + 1:])
    state = StreamState(params=params, k=k, origin=prefix[0].copy(),
                        cell_side=params.eps3 * R / (2.0 * sqrt(d)),
                        cells={}, T=[], R_thresh=R)
    seen_distinct = []
    for x in prefix:
        idx = state.points_seen
        state.points_seen += 1
        _grid_insert(state, idx, x)
        if not any(np.array_equal(x, t) for t in seen_distinct):
            seen_distinct.append(x)
            state.T.append((idx, x))
    for x in rest:
        stream_ingest(state, x)
    return state


def stream_ingest(state: StreamState, x) -> StreamState:
    """Feed one point: grid insert, center test, doubling phases as needed."""
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.shape[0] != state.params.d:
        raise GapError("dimension-mismatch",
                       f"point has dimension {x.shape[0]}, stream is {state.params.d}-D")
    idx = state.points_seen
    state.points_seen += 1
    _grid_insert(state, idx, x)
    if _dist_to(state.T, x) > 2.0 * state.R_thresh:
        state.T.append((idx, x))
    while len(state.T) > state.k:
        state.phase += 1
        state.R_thresh *= 2.0
        state.cell_side *= 2.0
        state.cells = _merge_cells(state.cells)
        kept: list = []
        for entry in state.T:  # insertion order
            if not kept or _dist_to(kept, entry[1]) > state.R_thresh:
                kept.append(entry)
        state.T = kept
    return state


def stream_reps(state: StreamState) -> tuple:
    """(stream indices, points array) of the live coreset, by stream order."""
    items = sorted(state.cells.values(), key=lambda iv: iv[0])
    indices = [iv[0] for iv in items]
    pts = np.array([iv[1] for iv in items])
    return indices, pts


def stream_finalize(state: StreamState, k: Optional[int] = None,
                    guard: int = 50_000_000, force: bool = False) -> tuple:
    """Search the final grid coreset for the best k-subset.

    Returns (Sample of stream indices, GapReport measured inside the
    coreset, GridCoreset snapshot).  Stream indices count every ingested
    point (duplicates included) starting at 0.
    """
    k = state.k if k is None else int(k)
    indices, pts = stream_reps(state)
    if len(indices) < k:
        raise GapError("coreset-too-small",
                       f"coreset has {len(indices)} cells but k={k}")
    metric = build_euclidean(build_cloud(pts))
    local_sample, report = best_k_subset(metric, k, guard=guard, force=force)
    chosen = [indices[i] for i in local_sample.indices]
    sample = make_sample(chosen, state.points_seen)
    grid = GridCoreset(origin=state.origin.copy(), cell_side=state.cell_side,
                       cells={c: iv[0] for c, iv in state.cells.items()})
    return sample, report, grid
