"""Exact top-k closeness via degree-ordered, bound-pruned BFS."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import UndefinedMeasureError
from .graph import Graph, bfs_distances, require_connected

CUT = -1
NO_CUT = np.iinfo(np.int64).max


def closeness(g: Graph, v: int) -> Fraction:
    """c(v) = (n-1) / sum of distances from v, as an exact rational."""
    if g.n < 2:
        raise UndefinedMeasureError("closeness needs at least two nodes")
    return Fraction(g.n - 1, farness(g, v))


def farness(g: Graph, v: int) -> int:
    dist = bfs_distances(g, v).dist
    if (dist < 0).any():
        raise UndefinedMeasureError(f"node {v} does not reach every node")
    return int(dist.sum())


class CutResult(NamedTuple):
    """Outcome of one bounded BFS.  ``farness`` is None when the search was cut."""

    farness: int | None
    closeness: Fraction | None
    visited: int
    levels: int

    @property
    def cut(self) -> bool:
        return self.farness is None


def _threshold(n: int, x_k) -> int:
    # x_k >= (n-1)/bound  <=>  bound >= (n-1)/x_k  <=>  bound >= ceil((n-1)/x_k)
    x_k = Fraction(x_k)
    if x_k <= 0:
        return NO_CUT
    return math.ceil(Fraction(n - 1) / x_k)


def bfs_cut(g: Graph, v: int, x_k, _scratch=None) -> CutResult:
    """BFS from ``v`` abandoned as soon as its closeness upper bound drops to ``x_k``."""
    if g.n < 2:
        raise UndefinedMeasureError("closeness needs at least two nodes")
    sc = _scratch or _kernels.Scratch(g.n)
    far, visited, levels = _kernels.bfs_cut(
        g.indptr, g.indices, v, _threshold(g.n, x_k), sc.mark, sc.next_stamp(), sc.queue
    )
    if far < 0:
        return CutResult(None, None, int(visited), int(levels))
    return CutResult(int(far), Fraction(g.n - 1, int(far)), int(visited), int(levels))


def closeness_bounds(g: Graph, v: int) -> list[Fraction]:
    """The per-level optimistic bounds a bounded BFS from ``v`` would compare against."""
    dist = bfs_distances(g, v).dist
    n = g.n
    bounds = []
    for d in range(int(dist.max()) + 1):
        within = dist[dist <= d]
        r, s = within.size, int(within.sum())
        bounds.append(Fraction(n - 1, s + (n - r) * (d + 1)))
    return bounds


@dataclass
class TopKState:
    """Bookkeeping of one top-k run.

    ``farness[v]`` is the exact distance sum of ``v`` or ``CUT``.  ``x_k`` is the
    k-th best closeness among exactly evaluated nodes (0 until k are known);
    ``x_k_history`` records it after every processed node.
    """

    k: int
    n: int
    farness: np.ndarray
    x_k: Fraction = Fraction(0)
    x_k_history: list = field(default_factory=list)
    visited: int = 0
    exact_evaluations: int = 0
    cuts: int = 0

    def scores(self) -> dict[int, Fraction]:
        return {int(v): Fraction(self.n - 1, int(f)) for v, f in enumerate(self.farness) if f != CUT}

    def ranking(self) -> list[tuple[int, Fraction]]:
        exact = [(int(f), v) for v, f in enumerate(self.farness) if f != CUT]
        exact.sort()
        return [(v, Fraction(self.n - 1, f)) for f, v in exact[: self.k]]


def run_top_k(g: Graph, k: int) -> TopKState:
    """Degree-ordered bounded-BFS search for the k nodes of highest closeness.

    Nodes are visited by decreasing degree (ascending id among equal
    degrees).  Ties are resolved towards the lower node id, and a node whose
    bound exactly equals the current k-th entry is only cut if it would lose
    that tie, so the result equals the brute-force ranking by
    (closeness desc, id asc).
    """
    n = g.n
    if n < 2:
        raise UndefinedMeasureError("closeness needs at least two nodes")
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    require_connected(g)
    order = np.lexsort((np.arange(n), -g.degree()))
    sc = _kernels.Scratch(n)
    state = TopKState(k, n, np.full(n, CUT, dtype=np.int64))
    # max-heap of the current top-k as (-farness, -id): root is the k-th best
    top: list[tuple[int, int]] = []
    for v in order.tolist():
        if len(top) < k:
            cut_at = NO_CUT
        else:
            f_k, id_k = -top[0][0], -top[0][1]
            cut_at = f_k + (0 if v > id_k else 1)
        far, visited, _ = _kernels.bfs_cut(g.indptr, g.indices, v, cut_at, sc.mark, sc.next_stamp(), sc.queue)
        state.visited += int(visited)
        if far < 0:
            state.cuts += 1
        else:
            state.exact_evaluations += 1
            state.farness[v] = far
            item = (-int(far), -v)
            if len(top) < k:
                heapq.heappush(top, item)
            elif item > top[0]:
                heapq.heapreplace(top, item)
            if len(top) == k:
                state.x_k = Fraction(n - 1, -top[0][0])
        state.x_k_history.append(state.x_k)
    return state


def top_k_closeness(g: Graph, k: int) -> list[tuple[int, Fraction]]:
    """The k nodes of highest closeness as (node, score), best first, ties by id."""
    return run_top_k(g, k).ranking()
