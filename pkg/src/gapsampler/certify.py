"""Exhaustive certification sweeps over all labeled graphs of small order.

Each sweep enumerates every edge subset of the complete graph K_n as a
bitmask, decodes chunks of masks into batched adjacency matrices, runs a
batched Floyd-Warshall for the shortest-path metrics, and evaluates the
claim under test with integer arithmetic only (distances on unweighted
graphs are integers; gap-ratio comparisons reduce to products).  No
isomorphism reduction is attempted: labeled enumeration is cheap at these
sizes and keeps the bookkeeping trivial.

Claims covered:

- greedy guarantees: along every farthest-point run, the covering radius
  never increases, the minimum pairwise distance after an insertion equals
  the covering radius that triggered it, and the gap ratio stays <= 2;
- greedy vs oracle: the greedy k-sample's gap ratio is within the
  alpha-dependent factor (2/alpha above 2/3, else 4/(2-alpha), never more
  than 3) of the exhaustive optimum;
- graph floor: every sample with 2 <= k < n has GR >= 2/3, with equality
  forcing R = 1 and r = 3/2;
- reduction certificates: the independent-domination <-> gap-ratio-1
  equivalence on the {1,2}-metric (all simple graphs) and the
  efficient-domination <-> (r = 3/2, R = 1) equivalence on shortest-path
  metrics (all connected graphs).

The scalar library functions compute the same quantities one graph at a
time; the test suite cross-validates the two paths on random masks.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterator, Optional

import numpy as np

from .metric import Graph, build_graph

BIG = 64  # unreachable marker; n <= 7 keeps real distances <= 6


def graph_from_mask(n: int, mask: int, require_connected: bool = True) -> Graph:
    """Decode an edge-subset bitmask (bit e = e-th pair of K_n, pairs in
    lexicographic order) into a Graph."""
    pairs = list(combinations(range(n), 2))
    edges = [(u, v) for e, (u, v) in enumerate(pairs) if (mask >> e) & 1]
    return build_graph(n, edges, require_connected=require_connected)


def adjacency_batch(n: int, masks: np.ndarray) -> np.ndarray:
    """(B, n, n) boolean adjacency matrices for a vector of bitmasks."""
    pairs = list(combinations(range(n), 2))
    bits = ((masks[:, None] >> np.arange(len(pairs))) & 1).astype(bool)
    adj = np.zeros((masks.shape[0], n, n), dtype=bool)
    for e, (u, v) in enumerate(pairs):
        adj[:, u, v] = bits[:, e]
        adj[:, v, u] = bits[:, e]
    return adj


def apsp_batch(adj: np.ndarray) -> np.ndarray:
    """Batched Floyd-Warshall on unweighted adjacency; BIG = unreachable."""
    B, n, _ = adj.shape
    D = np.where(adj, 1, BIG).astype(np.int16)
    D[:, np.arange(n), np.arange(n)] = 0
    for k in range(n):
        np.minimum(D, D[:, :, k][:, :, None] + D[:, k, :][:, None, :], out=D)
    return D


def iter_connected_metrics(n: int, chunk: int = 65536) -> Iterator[tuple]:
    """Yield (masks, D) for every connected labeled graph on n vertices."""
    total = 1 << (n * (n - 1) // 2)
    for start in range(0, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        D = apsp_batch(adjacency_batch(n, masks))
        connected = D.max(axis=(1, 2)) < BIG
        if connected.any():
            yield masks[connected], D[connected]


def _subset_pair_lists(n: int) -> dict:
    """subset (tuple) -> (pair_i, pair_j) index arrays for its inner pairs."""
    out = {}
    for k in range(2, n + 1):
        for s in combinations(range(n), k):
            pi, pj = zip(*combinations(s, 2))
            out[s] = (np.array(pi), np.array(pj))
    return out


# ---------------------------------------------------------------------------
# batched farthest-point insertion


def fpi_batch(D: np.ndarray) -> dict:
    """Replay farthest-point insertion on every metric of a batch.

    Returns per-graph arrays: the insertion order, and for each sample size
    s = 2..n the minimum pairwise distance q[s] and covering radius R[s]
    (integer-valued, straight from D).  Tie-breaks match the scalar
    implementation: lexicographic diameter pair, then smallest index.
    """
    B, n, _ = D.shape
    ar = np.arange(B)
    triu = np.triu(np.ones((n, n), dtype=bool), 1)
    flat = np.where(triu[None], D, -1).reshape(B, n * n)
    pos = flat.argmax(axis=1)  # row-major first occurrence = lexicographic
    i, j = pos // n, pos % n
    order = np.empty((B, n), dtype=np.int64)
    order[:, 0], order[:, 1] = i, j
    dmin = np.minimum(D[ar, i], D[ar, j])
    q = D[ar, i, j].astype(np.int64)
    qs = {2: q.copy()}
    Rs = {2: dmin.max(axis=1).astype(np.int64)}
    for size in range(2, n):
        c = dmin.argmax(axis=1)  # first occurrence = smallest index
        Rb = dmin[ar, c].astype(np.int64)
        order[:, size] = c
        dmin = np.minimum(dmin, D[ar, c])
        q = np.minimum(q, Rb)
        qs[size + 1] = q.copy()
        Rs[size + 1] = dmin.max(axis=1).astype(np.int64)
    return {"order": order, "q": qs, "R": Rs}


# ---------------------------------------------------------------------------
# sweeps


def sweep_fpi_guarantees(max_n: int = 7, chunk: int = 65536) -> dict:
    """Greedy per-step guarantees on every connected graph with n <= max_n.

    Checks, in integers, for every step growing the sample from s to s+1:
    R[s+1] <= R[s], q[s+1] == R[s] (the half-radius identity, since
    r = q/2), and R[s] <= q[s] (gap ratio <= 2) for every s >= 2.
    """
    graphs = 0
    steps_checked = 0
    violations = []
    for n in range(2, max_n + 1):
        for masks, D in iter_connected_metrics(n, chunk):
            res = fpi_batch(D)
            graphs += masks.shape[0]
            for s in range(2, n + 1):
                bad = res["R"][s] > res["q"][s]  # GR(S_s) <= 2
                if s > 2:
                    bad |= res["q"][s] != res["R"][s - 1]   # r identity
                    bad |= res["R"][s] > res["R"][s - 1]    # monotone covering
                steps_checked += masks.shape[0]
                for b in np.flatnonzero(bad)[:5]:
                    violations.append({"n": n, "mask": int(masks[b]), "size": s})
    return {"graphs": graphs, "steps_checked": steps_checked,
            "violations": violations}


def sweep_fpi_vs_oracle(max_n: int = 7, ks: tuple = (2, 3),
                        chunk: int = 65536) -> dict:
    """Greedy vs exhaustive optimum on every connected graph with n <= max_n.

    For each k, asserts GR_FPI <= bound(GR_OPT) * GR_OPT + 1e-9 with
    bound(a) = 2/a when a >= 2/3 else 4/(2-a), and GR_FPI <= 3 * GR_OPT.
    """
    graphs = 0
    pairs_checked = 0
    violations = []
    worst_ratio = 0.0
    for n in range(2, max_n + 1):
        subsets = {k: [s for s in combinations(range(n), k)] for k in ks if k <= n}
        pair_arrays = _subset_pair_lists(n)
        for masks, D in iter_connected_metrics(n, chunk):
            graphs += masks.shape[0]
            res = fpi_batch(D)
            Df = D.astype(np.float64)
            for k in ks:
                if not 2 <= k <= n:
                    continue
                gr_fpi = 2.0 * res["R"][k] / res["q"][k]
                gr_opt = np.full(masks.shape[0], np.inf)
                for s in subsets[k]:
                    pi, pj = pair_arrays[s]
                    qv = Df[:, pi, pj].min(axis=1)
                    Rv = Df[:, :, list(s)].min(axis=2).max(axis=1)
                    np.minimum(gr_opt, 2.0 * Rv / qv, out=gr_opt)
                with np.errstate(divide="ignore", invalid="ignore"):
                    bound = np.where(gr_opt >= 2.0 / 3.0, 2.0 / gr_opt,
                                     4.0 / (2.0 - gr_opt))
                    # k = n gives gr_opt = gr_fpi = 0 and an unusable bound
                    ok = np.where(gr_opt > 0,
                                  (gr_fpi <= bound * gr_opt + 1e-9)
                                  & (gr_fpi <= 3.0 * gr_opt + 1e-9),
                                  gr_fpi <= 1e-9)
                pairs_checked += masks.shape[0]
                pos = gr_opt > 0
                if pos.any():
                    worst_ratio = max(worst_ratio,
                                      float((gr_fpi[pos] / gr_opt[pos]).max()))
                for b in np.flatnonzero(~ok)[:5]:
                    violations.append({"n": n, "mask": int(masks[b]), "k": k})
    return {"graphs": graphs, "pairs_checked": pairs_checked,
            "worst_ratio": worst_ratio, "violations": violations}


def sweep_graph_lower_bound(max_n: int = 7, chunk: int = 65536) -> dict:
    """GR >= 2/3 for every sample 2 <= k < n on every connected graph.

    Integer form: 3R >= q (since GR = 2R/q), and 3R == q forces R == 1
    (hence q == 3, i.e. r = 3/2).  Exhaustive and exact.
    """
    graphs = 0
    samples_checked = 0
    equality_cases = 0
    violations = []
    for n in range(3, max_n + 1):
        pair_arrays = _subset_pair_lists(n)
        subsets = [s for k in range(2, n) for s in combinations(range(n), k)]
        for masks, D in iter_connected_metrics(n, chunk):
            graphs += masks.shape[0]
            Dl = D.astype(np.int64)
            for s in subsets:
                pi, pj = pair_arrays[s]
                q = Dl[:, pi, pj].min(axis=1)
                R = Dl[:, :, list(s)].min(axis=2).max(axis=1)
                samples_checked += masks.shape[0]
                bad = 3 * R < q
                eq = 3 * R == q
                bad |= eq & (R != 1)
                equality_cases += int(eq.sum())
                for b in np.flatnonzero(bad)[:5]:
                    violations.append({"n": n, "mask": int(masks[b]), "sample": s})
    return {"graphs": graphs, "samples_checked": samples_checked,
            "equality_cases": equality_cases, "violations": violations}


def sweep_reduction_certificates(max_n: int = 6, chunk: int = 65536) -> dict:
    """Both reduction equivalences over every graph with n <= max_n.

    The {1,2}-metric equivalence runs over ALL simple graphs (it needs no
    connectivity); the efficient-domination equivalence runs over connected
    graphs (its metric side is the shortest-path metric).  k ranges over
    2 <= k < n.
    """
    genmet_graphs = 0
    genmet_checked = 0
    genmet_true = 0
    eds_graphs = 0
    eds_checked = 0
    eds_true = 0
    violations = []
    for n in range(3, max_n + 1):
        pair_arrays = _subset_pair_lists(n)
        subsets = {k: [s for s in combinations(range(n), k)] for k in range(2, n)}
        total = 1 << (n * (n - 1) // 2)
        eye = np.eye(n, dtype=bool)
        for start in range(0, total, chunk):
            masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
            adj = adjacency_batch(n, masks)
            B = masks.shape[0]
            genmet_graphs += B
            D2x = np.where(adj, 2, 4).astype(np.int64)
            D2x[:, np.arange(n), np.arange(n)] = 0
            D = apsp_batch(adj).astype(np.int64)
            connected = D.max(axis=(1, 2)) < BIG
            eds_graphs += int(connected.sum())
            closed_nb = adj | eye
            for k in range(2, n):
                ids_exists = np.zeros(B, dtype=bool)
                gr1_exists = np.zeros(B, dtype=bool)
                eds_exists = np.zeros(B, dtype=bool)
                eds_agree = np.ones(B, dtype=bool)
                for s in subsets[k]:
                    pi, pj = pair_arrays[s]
                    sl = list(s)
                    # independent dominating on the raw graph
                    indep = ~adj[:, pi, pj].any(axis=1)
                    dom = adj[:, sl, :].any(axis=1)
                    dom[:, sl] = True
                    ids_exists |= indep & dom.all(axis=1)
                    # gap ratio 1 on the {1,2}-metric: 2*R2 == q2
                    q2 = D2x[:, pi, pj].min(axis=1)
                    R2 = D2x[:, :, sl].min(axis=2).max(axis=1)
                    gr1_exists |= 2 * R2 == q2
                    # efficient domination vs (r = 3/2, R = 1) on shortest paths
                    eds = (closed_nb[:, :, sl].sum(axis=2) == 1).all(axis=1)
                    q = D[:, pi, pj].min(axis=1)
                    R = D[:, :, sl].min(axis=2).max(axis=1)
                    prof = (q == 3) & (R == 1)
                    eds_agree &= ~connected | (eds == prof)
                    eds_exists |= eds & connected
                genmet_checked += B
                genmet_true += int(ids_exists.sum())
                eds_checked += int(connected.sum())
                eds_true += int((eds_exists & connected).sum())
                bad_genmet = ids_exists != gr1_exists
                for b in np.flatnonzero(bad_genmet)[:5]:
                    violations.append({"claim": "genmet", "n": n,
                                       "mask": int(masks[b]), "k": k})
                for b in np.flatnonzero(~eds_agree)[:5]:
                    violations.append({"claim": "eds", "n": n,
                                       "mask": int(masks[b]), "k": k})
    return {"genmet_graphs": genmet_graphs, "genmet_checked": genmet_checked,
            "genmet_true": genmet_true, "eds_graphs": eds_graphs,
            "eds_checked": eds_checked, "eds_true": eds_true,
            "violations": violations}
