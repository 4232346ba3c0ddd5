"""Planar support: Delaunay triangulation and unit-square uniformity audits.

The covering radius of a finite set over the continuous square [0,1]^2 is
attained at a largest-empty-circle center, and every candidate center is one
of: a Voronoi vertex inside the square, an intersection of a Voronoi edge
with the square's boundary, or a corner of the square.  Voronoi structure is
taken by duality from the Delaunay triangulation (vertices are triangle
circumcenters, edges lie on pairwise perpendicular bisectors), so the
boundary candidates used here are the full set of pairwise-bisector /
boundary intersections, a superset of the Voronoi-edge crossings.  Extra
candidates are harmless: each is inside the square, so its nearest-site
distance never exceeds the true covering radius.  The superset also covers
the degenerate layouts (1 or 2 points, all points collinear) where no
triangulation exists.

Triangulation is incremental with a bounding super-triangle that is removed
at the end.  Orientation and in-circumcircle predicates are determinant
tests with tolerance 1e-12; exactly cocircular insertions do not evict
earlier triangles, so cocircular ties resolve by insertion order.  This is a
documented desk-scale choice, not exact arithmetic.

The angle audit ties the triangulation to the gap ratio g = R/r: any
triangle whose vertices all sit at distance >= R from the boundary has every
angle in [arcsin(1/g), pi - 2 arcsin(1/g)] (a sample with a low gap ratio
cannot produce skinny interior triangles).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import asin, pi, sqrt
from typing import Optional

import numpy as np

from .errors import GapError
from .metric import PointCloud

PREDICATE_TOL = 1e-12

_CORNERS = ((0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0))


@dataclass(frozen=True)
class Triangulation:
    sites: np.ndarray         # (n, 2)
    triangles: np.ndarray     # (m, 3) vertex indices, counterclockwise
    circumcenters: np.ndarray  # (m, 2)
    circumradii: np.ndarray   # (m,)
    neighbors: np.ndarray     # (m, 3) adjacent triangle per edge, -1 if none


@dataclass(frozen=True)
class SquareGapReport:
    r: float
    R: float
    gap_ratio: float
    closest_pair: tuple
    farthest_point: np.ndarray  # (2,) in [0,1]^2, realizes R
    candidate_kind: str         # voronoi-vertex | boundary-intersection | corner


@dataclass(frozen=True)
class AngleAuditReport:
    gap_ratio: float
    covering_radius: float
    theta_bound: float          # arcsin(min(1, 1/g)) in radians
    interior_triangles: tuple   # triangle indices with all vertices >= R from the boundary
    min_interior_angle: Optional[float]
    violations: tuple           # (triangle index, min angle, max angle) entries


# ---------------------------------------------------------------------------
# predicates


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _in_circumcircle(a, b, c, p) -> float:
    """Positive when p lies strictly inside the circumcircle of CCW (a,b,c)."""
    ax, ay = a[0] - p[0], a[1] - p[1]
    bx, by = b[0] - p[0], b[1] - p[1]
    cx, cy = c[0] - p[0], c[1] - p[1]
    return ((ax * ax + ay * ay) * (bx * cy - by * cx)
            - (bx * bx + by * by) * (ax * cy - ay * cx)
            + (cx * cx + cy * cy) * (ax * by - ay * bx))


def _circumcircle(a, b, c) -> tuple:
    bx, by = b[0] - a[0], b[1] - a[1]
    cx, cy = c[0] - a[0], c[1] - a[1]
    d = 2.0 * (bx * cy - by * cx)
    if d == 0.0:
        raise GapError("degenerate-triangle", "circumcircle of collinear points")
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    center = np.array([a[0] + ux, a[1] + uy])
    return center, sqrt(ux * ux + uy * uy)


# ---------------------------------------------------------------------------
# triangulation


def _require_2d(cloud: PointCloud) -> np.ndarray:
    if cloud.dim != 2:
        raise GapError("invalid-dimension", f"planar operation needs d=2, got d={cloud.dim}")
    return cloud.points


def delaunay(cloud: PointCloud) -> Triangulation:
    """Incremental Delaunay triangulation (super-triangle, then removal).

    Insertion order is input order; a point exactly on a circumcircle does
    not evict the triangle, so cocircular configurations keep the earlier
    diagonal.
    """
    pts = _require_2d(cloud)
    n = pts.shape[0]
    if n < 3:
        raise GapError("too-few-points", f"triangulation needs >= 3 points, got {n}")
    anchor = 0
    far = int(np.argmax(((pts - pts[0]) ** 2).sum(axis=1)))
    cross = np.abs(_orient(pts[anchor], pts[far], pts.T))
    if cross.max() <= PREDICATE_TOL:
        raise GapError("collinear-points", "all points are collinear")

    lo, hi = pts.min(axis=0), pts.max(axis=0)
    center = (lo + hi) / 2.0
    m = 1024.0 * max(1.0, float((hi - lo).max()))
    sup = np.array([[center[0] - 3.0 * m, center[1] - m],
                    [center[0] + 3.0 * m, center[1] - m],
                    [center[0], center[1] + 3.0 * m]])
    verts = np.vstack([pts, sup])
    tris = [(n, n + 1, n + 2)]

    for pi_ in range(n):
        p = verts[pi_]
        bad = []
        for t, (ia, ib, ic) in enumerate(tris):
            if _in_circumcircle(verts[ia], verts[ib], verts[ic], p) > PREDICATE_TOL:
                bad.append(t)
        directed = set()
        for t in bad:
            ia, ib, ic = tris[t]
            directed.update([(ia, ib), (ib, ic), (ic, ia)])
        boundary = [(u, v) for (u, v) in directed if (v, u) not in directed]
        tris = [tri for t, tri in enumerate(tris) if t not in set(bad)]
        for u, v in boundary:
            if _orient(verts[u], verts[v], p) > 0:
                tris.append((u, v, pi_))

    tris = [t for t in tris if max(t) < n]
    if not tris:
        raise GapError("collinear-points", "no triangle survives; points nearly collinear")
    triangles = np.array(sorted(tris), dtype=np.int64)
    centers = np.empty((len(triangles), 2))
    radii = np.empty(len(triangles))
    for t, (ia, ib, ic) in enumerate(triangles):
        centers[t], radii[t] = _circumcircle(pts[ia], pts[ib], pts[ic])
    edge_owner: dict = {}
    neighbors = np.full((len(triangles), 3), -1, dtype=np.int64)
    for t, (ia, ib, ic) in enumerate(triangles):
        for e, (u, v) in enumerate(((ia, ib), (ib, ic), (ic, ia))):
            key = (min(u, v), max(u, v))
            if key in edge_owner:
                s, se = edge_owner[key]
                neighbors[t, e] = s
                neighbors[s, se] = t
            else:
                edge_owner[key] = (t, e)
    return Triangulation(sites=pts, triangles=triangles, circumcenters=centers,
                         circumradii=radii, neighbors=neighbors)


def circumcircle_margins(tri: Triangulation) -> np.ndarray:
    """(m, n) distances site-to-circumcenter minus circumradius.

    The empty-circumcircle property says every entry is >= 0 up to
    predicate noise; the triangle's own vertices land at exactly 0.
    """
    diff = tri.circumcenters[:, None, :] - tri.sites[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=-1))
    return dist - tri.circumradii[:, None]


# ---------------------------------------------------------------------------
# unit-square covering radius (largest empty circle)


def _validate_in_square(pts: np.ndarray) -> None:
    if (pts < 0.0).any() or (pts > 1.0).any():
        i = int(np.argwhere((pts < 0.0) | (pts > 1.0))[0][0])
        raise GapError("point-outside-square",
                       f"point {i} lies outside the unit square")


def _bisector_boundary_candidates(pts: np.ndarray) -> list:
    """All intersections of pairwise perpendicular bisectors with the square
    boundary.  Every Voronoi edge lies on one of these lines, so the true
    boundary candidates are included; extras are harmless."""
    out = []
    n = pts.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            mid = (pts[i] + pts[j]) / 2.0
            nx, ny = pts[j] - pts[i]
            # bisector: (x - mid) . (nx, ny) = 0
            if ny != 0.0:
                for x in (0.0, 1.0):
                    y = mid[1] + (mid[0] - x) * nx / ny
                    if 0.0 <= y <= 1.0:
                        out.append((x, y))
            if nx != 0.0:
                for y in (0.0, 1.0):
                    x = mid[0] + (mid[1] - y) * ny / nx
                    if 0.0 <= x <= 1.0:
                        out.append((x, y))
    return out


def covering_radius_unit_square(cloud: PointCloud) -> tuple:
    """(R, witness point, candidate kind) over the continuous unit square.

    Exact up to the finite candidate set: Voronoi vertices inside the
    square, bisector/boundary intersections, and the four corners.  With one
    or two points, or a collinear layout, the Voronoi part is empty or
    degenerate and the remaining candidates already carry the maximum.
    """
    pts = _require_2d(cloud)
    _validate_in_square(pts)
    cands = [np.array(c) for c in _CORNERS]
    kinds = ["corner"] * 4
    if pts.shape[0] >= 3:
        try:
            tri = delaunay(cloud)
        except GapError as e:
            if e.code != "collinear-points":
                raise
            tri = None
        if tri is not None:
            for c in tri.circumcenters:
                if 0.0 <= c[0] <= 1.0 and 0.0 <= c[1] <= 1.0:
                    cands.append(c.copy())
                    kinds.append("voronoi-vertex")
    for c in _bisector_boundary_candidates(pts):
        cands.append(np.array(c))
        kinds.append("boundary-intersection")
    cand = np.array(cands)
    diff = cand[:, None, :] - pts[None, :, :]
    nearest = np.sqrt((diff * diff).sum(axis=-1)).min(axis=1)
    best = int(np.argmax(nearest))  # first occurrence: fixed candidate order
    return float(nearest[best]), cand[best].copy(), kinds[best]


def gap_report_unit_square(cloud: PointCloud) -> SquareGapReport:
    """Gap report with M = the continuous unit square."""
    pts = _require_2d(cloud)
    if pts.shape[0] < 2:
        raise GapError("sample-too-small", "gap report needs >= 2 points")
    _validate_in_square(pts)
    diff = pts[:, None, :] - pts[None, :, :]
    d = np.sqrt((diff * diff).sum(axis=-1))
    iu = np.triu_indices(pts.shape[0], 1)
    vals = d[iu]
    pos = int(np.argmin(vals))
    pair = (int(iu[0][pos]), int(iu[1][pos]))
    r = float(vals[pos]) / 2.0
    R, witness, kind = covering_radius_unit_square(cloud)
    return SquareGapReport(r=r, R=R, gap_ratio=R / r, closest_pair=pair,
                           farthest_point=witness, candidate_kind=kind)


# ---------------------------------------------------------------------------
# angle audit


def _triangle_angles(a, b, c) -> np.ndarray:
    def ang(p, q, s):
        u, v = q - p, s - p
        cosv = (u @ v) / (np.linalg.norm(u) * np.linalg.norm(v))
        return float(np.arccos(np.clip(cosv, -1.0, 1.0)))
    return np.array([ang(a, b, c), ang(b, c, a), ang(c, a, b)])


def delaunay_angle_audit(cloud: PointCloud) -> AngleAuditReport:
    """Check interior Delaunay triangles against the gap-ratio angle bound.

    A triangle is interior when all three vertices are at distance >= R from
    the square's boundary.  Every interior triangle must satisfy
    min angle >= arcsin(min(1, 1/g)) and max angle <= pi - 2 arcsin(1/g),
    up to 1e-9.
    """
    report = gap_report_unit_square(cloud)
    tri = delaunay(cloud)
    g = report.gap_ratio
    R = report.R
    theta = asin(min(1.0, 1.0 / g))
    pts = tri.sites
    boundary_dist = np.minimum.reduce([pts[:, 0], 1.0 - pts[:, 0],
                                       pts[:, 1], 1.0 - pts[:, 1]])
    interior = []
    violations = []
    min_angle = None
    for t, (ia, ib, ic) in enumerate(tri.triangles):
        if min(boundary_dist[ia], boundary_dist[ib], boundary_dist[ic]) < R:
            continue
        interior.append(t)
        angles = _triangle_angles(pts[ia], pts[ib], pts[ic])
        lo, hi = float(angles.min()), float(angles.max())
        if min_angle is None or lo < min_angle:
            min_angle = lo
        if lo < theta - 1e-9 or hi > pi - 2.0 * theta + 1e-9:
            violations.append((t, lo, hi))
    return AngleAuditReport(gap_ratio=g, covering_radius=R, theta_bound=theta,
                            interior_triangles=tuple(interior),
                            min_interior_angle=min_angle,
                            violations=tuple(violations))
