"""Static grid coreset and (1+eps)-optimal sampling by exhaustive search.

The pipeline: run farthest-point insertion to learn a covering radius
R_P1, lay an axis-aligned grid whose cell side is

    eps2 = eps1 * R_P1 / (2 sqrt(d)),   eps1 = eps / (3 + 2 eps),

keep one representative site per nonempty cell, and search the coreset
exhaustively for the k-subset with the smallest gap ratio.  Cells are small
enough that swapping any site for its representative moves distances by at
most eps1 * R_P1 / 2, which is what makes the final sample's gap ratio over
the full space land within (1 + eps) of optimal for eps < 1/2.

The subset search measures both r and R inside the coreset (the coreset is
treated as its own metric space); the end-to-end report re-measures the
winning sample over the full input, which is the quantity the (1 + eps)
guarantee speaks about.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, sqrt
from typing import Optional

import numpy as np

from .errors import GapError, GuardExceeded
from .fpi import farthest_point_insertion
from .metric import (FiniteMetric, GapReport, PointCloud, Sample,
                     build_cloud, build_euclidean, gap_ratio, make_sample)
from .oracle import iter_subset_chunks, subset_gap_stats

ENUM_GUARD = 50_000_000


@dataclass(frozen=True)
class EpsParams:
    """Derived grid parameters for a user eps in (0, 1/2)."""

    eps: float
    eps1: float  # eps / (3 + 2 eps), always < 1/5
    eps2: float  # eps1 * R_P1 / (2 sqrt(d)); the grid cell side
    d: int
    R_P1: float  # covering radius of the farthest-point k-sample


@dataclass(frozen=True)
class GridCoreset:
    """Axis-aligned grid keeping one representative site per nonempty cell.

    ``cells`` maps integer cell indices (d-tuples) to the representative's
    site index.  Cell membership is by half-open boxes
    [origin + c*side, origin + (c+1)*side).
    """

    origin: np.ndarray  # (d,)
    cell_side: float
    cells: dict

    @property
    def size(self) -> int:
        return len(self.cells)

    def representatives(self) -> list:
        """Representative site indices, ascending."""
        return sorted(self.cells.values())


def static_params(eps: float, R_P1: float, d: int) -> EpsParams:
    eps = float(eps)
    if not 0.0 < eps < 0.5:
        raise GapError("eps-out-of-range",
                       f"eps must lie in (0, 1/2), got {eps}")
    if not R_P1 > 0:
        raise GapError("invalid-radius", f"covering radius must be positive, got {R_P1}")
    d = int(d)
    if d < 1:
        raise GapError("invalid-dimension", f"dimension must be >= 1, got {d}")
    eps1 = eps / (3.0 + 2.0 * eps)
    eps2 = eps1 * float(R_P1) / (2.0 * sqrt(d))
    return EpsParams(eps=eps, eps1=eps1, eps2=eps2, d=d, R_P1=float(R_P1))


def build_grid_coreset(cloud: PointCloud, cell_side: float,
                       seed: Optional[int] = None) -> GridCoreset:
    """Grid anchored at the bounding-box minimum; half-open cells.

    Without a seed the representative of a cell is its lowest-index member;
    with a seed it is a uniform choice per cell (fixed seed, fixed result).
    """
    cell_side = float(cell_side)
    if not cell_side > 0:
        raise GapError("invalid-cell-side", f"cell side must be positive, got {cell_side}")
    pts = cloud.points
    origin = pts.min(axis=0)
    raw = np.floor((pts - origin) / cell_side).astype(np.int64)
    members: dict = {}
    for i in range(cloud.n):
        members.setdefault(tuple(int(c) for c in raw[i]), []).append(i)
    cells: dict = {}
    if seed is None:
        for c, idxs in members.items():
            cells[c] = idxs[0]  # members are in index order
    else:
        rng = np.random.default_rng(int(seed))
        for c in sorted(members):
            idxs = members[c]
            cells[c] = idxs[int(rng.integers(len(idxs)))]
    return GridCoreset(origin=origin.copy(), cell_side=cell_side, cells=cells)


def best_k_subset(coreset_metric: FiniteMetric, k: int, guard: int = ENUM_GUARD,
                  force: bool = False) -> tuple:
    """Exhaustive search over all k-subsets of a (coreset) metric.

    Enumeration is lexicographic and the first subset attaining the minimum
    gap ratio wins, so results are replayable.  r and R are both measured
    within the given metric.
    """
    k = int(k)
    if k < 2:
        raise GapError("k-out-of-range", f"k must be >= 2, got {k}")
    if coreset_metric.n < k:
        raise GapError("coreset-too-small",
                       f"coreset has {coreset_metric.n} sites but k={k}; "
                       f"use a smaller eps")
    total = comb(coreset_metric.n, k)
    if total > guard and not force:
        raise GuardExceeded(
            f"C({coreset_metric.n}, {k}) = {total} subsets exceeds the guard "
            f"{guard}; raise --guard or force to proceed")
    best = np.inf
    best_idx = None
    for idx in iter_subset_chunks(coreset_metric.n, k):
        gr, _, _ = subset_gap_stats(coreset_metric.dist, idx)
        pos = int(np.argmin(gr))
        if gr[pos] < best:
            best = float(gr[pos])
            best_idx = idx[pos]
    sample = make_sample(best_idx, coreset_metric.n)
    return sample, gap_ratio(coreset_metric, sample)


def approx_sample(cloud: PointCloud, k: int, eps: float,
                  seed: Optional[int] = None, guard: int = ENUM_GUARD,
                  force: bool = False) -> tuple:
    """End-to-end (1+eps)-approximate k-sample of a point cloud.

    Returns (Sample over the full cloud, GapReport over the full cloud,
    EpsParams, GridCoreset).  The k = n corner (covering radius of the
    farthest-point sample is 0, so no grid parameters exist) short-circuits
    to the exact answer, the whole site set, with params and coreset None.
    """
    k = int(k)
    if not 2 <= k <= cloud.n:
        raise GapError("k-out-of-range", f"k must satisfy 2 <= k <= {cloud.n}, got {k}")
    metric_full = build_euclidean(cloud)
    if k == cloud.n:
        sample = make_sample(range(cloud.n), cloud.n)
        return sample, gap_ratio(metric_full, sample), None, None
    _, trace = farthest_point_insertion(metric_full, k)
    params = static_params(eps, trace.final.R, cloud.dim)
    grid = build_grid_coreset(cloud, params.eps2, seed=seed)
    reps = grid.representatives()
    if len(reps) < k:
        raise GapError("coreset-too-small",
                       f"coreset has {len(reps)} cells but k={k}; use a smaller eps")
    sub_cloud = build_cloud(cloud.points[reps])
    local_sample, _ = best_k_subset(build_euclidean(sub_cloud), k,
                                    guard=guard, force=force)
    chosen = [reps[i] for i in local_sample.indices]
    sample = make_sample(chosen, cloud.n)
    return sample, gap_ratio(metric_full, sample), params, grid
