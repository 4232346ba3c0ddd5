"""Uniformity measures: exact 2-D star discrepancy, a gap-based bound on
it, and closed-form gap-ratio floors.

Star discrepancy compares, over every origin-anchored axis-parallel
rectangle [0,x] x [0,y], the rectangle's area against the fraction of
sample points it holds; the supremum of the deviation is attained (or
approached) with x and y drawn from the point coordinates or 1.  Each
candidate rectangle is scored twice: with the closed count (<= x, <= y)
for deviations where the count overshoots the area, and with the open-limit
count (< x, < y) for rectangles shrunk infinitesimally below a point, where
the count undershoots.  That pair of evaluations makes the finite scan
exact.

The gap-based bound converts a gap report (r, R) into a discrepancy bound:
a rectangle with count/n >= xy cannot deviate by more than
A(x,y) = (x^2+y^2)/(r^2 n) - xy (disjoint r-balls pack the rectangle's
quarter-ellipse), and one with count/n <= xy by more than
B(x,y) = xy - (x^2+y^2)/(4 R^2 n) (2R-side cells must all be hit).  The
reported bound is max(sup A, sup B) over the same candidate grid, clamped
below at zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .errors import GapError
from .metric import PointCloud

SQUARE_FLOOR_C = 2.0 ** 1.5 / 3.0 ** 0.75


@dataclass(frozen=True)
class DiscrepancyReport:
    d_star: float
    witness: tuple  # (x, y, kind) with kind in {closed, open-limit}
    n: int


def _square_points(cloud: PointCloud) -> np.ndarray:
    if cloud.dim != 2:
        raise GapError("invalid-dimension", f"star discrepancy needs d=2, got {cloud.dim}")
    pts = cloud.points
    if (pts < 0.0).any() or (pts > 1.0).any():
        i = int(np.argwhere((pts < 0.0) | (pts > 1.0))[0][0])
        raise GapError("point-outside-square", f"point {i} lies outside the unit square")
    return pts


def _candidate_axes(pts: np.ndarray) -> tuple:
    xs = np.unique(np.append(pts[:, 0], 1.0))
    ys = np.unique(np.append(pts[:, 1], 1.0))
    return xs, ys


def _counts(pts: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> tuple:
    """Closed and open-limit counts for every candidate rectangle.

    count[i, j] = #{p : px (<=|<) xs[i] and py (<=|<) ys[j]}, computed as a
    0/1 matrix product (AND of coordinate indicators summed over points).
    """
    le_x = (pts[None, :, 0] <= xs[:, None]).astype(np.int64)  # (mx, n)
    lt_x = (pts[None, :, 0] < xs[:, None]).astype(np.int64)
    le_y = (pts[None, :, 1] <= ys[:, None]).astype(np.int64)  # (my, n)
    lt_y = (pts[None, :, 1] < ys[:, None]).astype(np.int64)
    closed = le_x @ le_y.T
    open_ = lt_x @ lt_y.T
    return closed, open_


def star_discrepancy(cloud: PointCloud) -> DiscrepancyReport:
    """Exact star discrepancy of points in the closed unit square."""
    pts = _square_points(cloud)
    n = pts.shape[0]
    xs, ys = _candidate_axes(pts)
    closed, open_ = _counts(pts, xs, ys)
    area = xs[:, None] * ys[None, :]
    over = closed / n - area          # maximized by closed counts
    under = area - open_ / n          # maximized by open-limit counts
    oi = np.unravel_index(int(np.argmax(over)), over.shape)
    ui = np.unravel_index(int(np.argmax(under)), under.shape)
    if over[oi] >= under[ui]:
        d_star = float(over[oi])
        witness = (float(xs[oi[0]]), float(ys[oi[1]]), "closed")
    else:
        d_star = float(under[ui])
        witness = (float(xs[ui[0]]), float(ys[ui[1]]), "open-limit")
    return DiscrepancyReport(d_star=d_star, witness=witness, n=n)


def gap_based_discrepancy_bound(cloud: PointCloud, r: float, R: float) -> float:
    """max(sup A, sup B) over the candidate grid; never below 0.

    A applies where some count convention puts count/n at or above the
    area, B where one puts it at or below; both conditions are checked with
    the closed and the open-limit counts.
    """
    pts = _square_points(cloud)
    if not r > 0:
        raise GapError("invalid-radius", f"minimum gap must be positive, got {r}")
    if not R > 0:
        raise GapError("invalid-radius", f"covering radius must be positive, got {R}")
    n = pts.shape[0]
    xs, ys = _candidate_axes(pts)
    closed, open_ = _counts(pts, xs, ys)
    area = xs[:, None] * ys[None, :]
    s2 = xs[:, None] ** 2 + ys[None, :] ** 2
    a_vals = s2 / (r * r * n) - area
    b_vals = area - s2 / (4.0 * R * R * n)
    a_ok = (closed >= n * area) | (open_ >= n * area)
    b_ok = (closed <= n * area) | (open_ <= n * area)
    best = 0.0
    if a_ok.any():
        best = max(best, float(a_vals[a_ok].max()))
    if b_ok.any():
        best = max(best, float(b_vals[b_ok].max()))
    return best


def analytic_bounds(kind: str, k=None) -> float:
    """Closed-form gap-ratio floors.

    graph: 2/3 for connected unweighted graph metrics.
    unit-square: 2/sqrt(3) - C/sqrt(k), C = 2^(3/2)/3^(3/4), needs k >= 2.
    path-connected: 1 for any path-connected space.
    """
    name = str(kind).replace("_", "-")
    if name == "graph":
        return 2.0 / 3.0
    if name == "path-connected":
        return 1.0
    if name == "unit-square":
        if k is None:
            raise GapError("missing-k", "unit-square bound needs k")
        k = int(k)
        if k < 2:
            raise GapError("k-out-of-range", f"unit-square bound needs k >= 2, got {k}")
        return 2.0 / sqrt(3.0) - SQUARE_FLOOR_C / sqrt(k)
    raise GapError("unknown-space", f"unknown space kind {kind!r}")
