"""Comparison baselines and the group-vs-top-k overlap study."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .errors import CapacityError
from .graph import Graph, require_connected
from .greedy import GroupResult, IterationStats
from .topk import top_k_closeness

DEFAULT_REFERENCE_CAP = 2000


def _apsp(g: Graph) -> np.ndarray:
    d = shortest_path(g.adjacency_matrix(), method="D", unweighted=True, directed=False)
    return d.astype(np.int64)


def greedy_reference(g: Graph, k: int, n_cap: int = DEFAULT_REFERENCE_CAP) -> GroupResult:
    """Plain greedy over two n x n matrices: d holds all distances, M[u, w] = d(S + u, w).

    Each round lowers M[u, :] to d[s, :] for the node s just added, then
    picks the u with the smallest row sum over non-members (lowest id on ties).
    The first node is the one of highest closeness, as in ``greedy_pp``.
    """
    n = g.n
    if n > n_cap:
        raise CapacityError(f"reference greedy needs two {n}x{n} matrices, cap is n={n_cap}", n, n_cap)
    if not 1 <= k < n:
        raise ValueError(f"k={k} out of range 1..{n - 1}")
    require_connected(g)
    d = _apsp(g).reshape(-1)
    M = d.copy()
    outside = np.ones(n, dtype=bool)

    far = d.reshape(n, n).sum(axis=1)
    s = int(np.argmin(far))  # argmin returns the first, i.e. lowest id
    outside[s] = False
    group = [s]
    trace = [IterationStats(0, s, None, n, 0, n * n)]
    current = int(d[s * n : (s + 1) * n].sum())
    while len(group) < k:
        for u in np.flatnonzero(outside):
            row = M[u * n : (u + 1) * n]
            np.minimum(row, d[s * n : (s + 1) * n], out=row)
        sums = M.reshape(n, n)[:, outside].sum(axis=1)
        sums[~outside] = np.iinfo(np.int64).max
        s = int(np.argmin(sums))
        gain = current - int(sums[s])
        current = int(sums[s])
        outside[s] = False
        group.append(s)
        trace.append(IterationStats(len(group) - 1, s, gain, int(outside.sum()) + 1, 0, n * n))
    return GroupResult(group, current, n, "greedy-ref", trace)


def degree_group(g: Graph, k: int) -> list[int]:
    """The k nodes of highest degree, ties to the lowest id."""
    if not 1 <= k <= g.n:
        raise ValueError(f"k={k} out of range 1..{g.n}")
    order = np.lexsort((np.arange(g.n), -g.degree()))
    return [int(v) for v in order[:k]]


def topk_group(g: Graph, k: int) -> list[int]:
    """The k nodes of highest individual closeness."""
    return [v for v, _ in top_k_closeness(g, k)]


def overlap_percent(a, b, k: int) -> float:
    a, b = set(a), set(b)
    if len(a) != k or len(b) != k:
        raise ValueError(f"both sets must have {k} members, got {len(a)} and {len(b)}")
    return 100.0 * len(a & b) / k


@dataclass(frozen=True)
class OverlapReport:
    k: int
    overlap_topk_pct: float
    overlap_degree_pct: float
    group: list[int]
    topk: list[int]
    degree: list[int]

    def row(self) -> dict:
        return {"k": self.k, "overlap_topk_pct": self.overlap_topk_pct,
                "overlap_degree_pct": self.overlap_degree_pct}

    def as_dict(self) -> dict:
        return asdict(self)


def overlap_report(g: Graph, ks, group: list[int] | None = None) -> list[OverlapReport]:
    """Overlap of the greedy group with top-k closeness and top-k degree, per k.

    Greedy groups are nested, so one run of size max(ks) serves every k;
    likewise one top-k closeness run.  ``group`` may supply a precomputed
    greedy group of at least max(ks) nodes.
    """
    from .greedy import greedy_pp

    ks = sorted(set(int(k) for k in ks))
    kmax = ks[-1]
    if group is None:
        group = greedy_pp(g, kmax).group
    elif len(group) < kmax:
        raise ValueError(f"group has {len(group)} nodes, need {kmax}")
    top = topk_group(g, kmax)
    deg = degree_group(g, kmax)
    reports = []
    for k in ks:
        a, t, d = group[:k], top[:k], deg[:k]
        reports.append(OverlapReport(k, overlap_percent(a, t, k), overlap_percent(a, d, k), a, t, d))
    return reports
