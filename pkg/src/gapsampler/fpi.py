"""Farthest-point insertion with a diameter-pair start.

The sampler keeps the set S_i and repeatedly inserts the site of M farthest
from S_i, starting from a pair realizing the diameter.  Two per-step facts
make it useful: the covering radius R_{S_i} never increases, and the minimum
gap right after an insertion equals exactly half the covering radius that
triggered it (the inserted site sits R_{S_i} away from everything chosen so
far, and no earlier pair is closer).  Together they cap the gap ratio at 2
after every iteration.

Both facts hold bit-exactly in floats: every quantity involved is either a
distance-matrix entry or such an entry halved, and halving is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .errors import GapError
from .metric import FiniteMetric, GapReport, Sample, diameter, gap_ratio, make_sample


@dataclass(frozen=True)
class FpiStep:
    """One insertion: S had ``size_before`` sites, gained ``chosen``."""

    size_before: int
    chosen: int
    R_before: float  # covering radius of S before the insertion = dist(chosen, S)
    r_after: float   # minimum gap after; equals R_before / 2 exactly
    R_after: float   # covering radius after; <= R_before


@dataclass(frozen=True)
class FpiTrace:
    init_pair: tuple  # diameter pair (i, j), i < j
    r_init: float     # diam / 2
    R_init: float     # covering radius of the diameter pair
    steps: tuple      # FpiStep per insertion beyond the pair
    final: GapReport


def farthest_point_insertion(m: FiniteMetric, k: int) -> tuple:
    """Greedy k-sample of m: (Sample, FpiTrace).

    Ties in the per-step argmax (and in the diameter scan) break toward the
    smallest site index, so runs are replayable.  The nearest-sample
    distances are maintained incrementally: one matrix row per insertion.
    """
    k = int(k)
    if not 2 <= k <= m.n:
        raise GapError("k-out-of-range", f"k must satisfy 2 <= k <= {m.n}, got {k}")
    i, j, diam = diameter(m)
    order = [i, j]
    dmin = np.minimum(m.dist[i], m.dist[j])
    q = diam  # minimum pairwise distance within the current sample
    r_init = diam / 2.0
    R_init = float(dmin.max())
    steps = []
    while len(order) < k:
        size_before = len(order)
        chosen = int(np.argmax(dmin))  # first occurrence = smallest index
        R_before = float(dmin[chosen])
        order.append(chosen)
        np.minimum(dmin, m.dist[chosen], out=dmin)
        # new closest pair involves the inserted site: R_before <= q always
        q = min(q, R_before)
        steps.append(FpiStep(size_before=size_before, chosen=chosen,
                             R_before=R_before, r_after=q / 2.0,
                             R_after=float(dmin.max())))
    sample = make_sample(order, m.n)
    trace = FpiTrace(init_pair=(i, j), r_init=r_init, R_init=R_init,
                     steps=tuple(steps), final=gap_ratio(m, sample))
    return sample, trace


def fpi_ratio_bound(alpha: float) -> float:
    """Worst-case GR_FPI / GR_OPT as a function of alpha = GR_OPT.

    2/alpha when alpha >= 2/3 (so at most 3, and at most 2 once alpha >= 1),
    4/(2 - alpha) below; the two branches meet at alpha = 2/3 with value 3,
    and the bound never exceeds 3.
    """
    alpha = float(alpha)
    if not alpha > 0:
        raise GapError("alpha-out-of-range", f"alpha must be positive, got {alpha}")
    if alpha >= 2.0 / 3.0:
        return 2.0 / alpha
    return 4.0 / (2.0 - alpha)


def rho(k: int) -> float:
    """Approximation-ratio curve of the greedy sampler on the unit square:

        rho(k) = 27^(1/4) sqrt(k) / (3^(1/4) sqrt(k) - sqrt(2))

    This is 2/alpha evaluated at the square's gap-ratio floor
    2/sqrt(3) - C/sqrt(k); it decreases monotonically toward sqrt(3).
    """
    k = int(k)
    if k < 2:
        raise GapError("k-out-of-range", f"k must be >= 2, got {k}")
    return 27.0 ** 0.25 * sqrt(k) / (3.0 ** 0.25 * sqrt(k) - sqrt(2.0))
