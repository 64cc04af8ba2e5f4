"""Greedy group-closeness maximisation with pruned BFS and lazy gain re-evaluation."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import _kernels
from .errors import UndefinedMeasureError
from .graph import Graph, multi_source_distances, require_connected
from .topk import run_top_k

# prev_gain of a node never evaluated; larger than any distance-sum reduction
UNKNOWN_GAIN = np.iinfo(np.int64).max

# candidates handed to the thread pool per lazy batch; fixed so that the
# evaluated set does not depend on the thread count
PARALLEL_BATCH = 512


def default_threads() -> int:
    return max(1, int(os.environ.get("GCM_THREADS", "1")))


@dataclass(frozen=True)
class IterationStats:
    """One greedy step.  Iteration 0 is the top-closeness seed and has no gain."""

    iteration: int
    node: int
    gain: int | None
    evaluated: int
    skipped: int
    visited: int


@dataclass
class GroupResult:
    group: list[int]
    distance_sum: int
    n: int
    algorithm: str = "greedy++"
    gain_trace: list[IterationStats] = field(default_factory=list)
    peak_memory_bytes: int | None = None

    @property
    def k(self) -> int:
        return len(self.group)

    @property
    def score(self) -> Fraction:
        return group_score(self.n, self.k, self.distance_sum)

    def total_visited(self, include_seed: bool = False) -> int:
        return sum(t.visited for t in self.gain_trace if include_seed or t.iteration > 0)

    def total_skipped(self) -> int:
        return sum(t.skipped for t in self.gain_trace if t.iteration > 0)

    def total_evaluated(self) -> int:
        return sum(t.evaluated for t in self.gain_trace if t.iteration > 0)


def group_score(n: int, k: int, distance_sum: int) -> Fraction:
    if not 0 < k < n:
        raise UndefinedMeasureError(f"group closeness undefined for |S|={k}, n={n}")
    return Fraction(n - k, distance_sum)


@dataclass(frozen=True)
class DistanceToSet:
    """d(S, v) for every node v, its sum, and the members of S in insertion order."""

    dist: np.ndarray
    total: int
    members: tuple[int, ...]

    @classmethod
    def from_group(cls, g: Graph, members: Iterable[int]) -> "DistanceToSet":
        members = tuple(int(s) for s in members)
        dist = multi_source_distances(g, members)
        return cls(dist, int(dist.sum()), members)

    def augment(self, g: Graph, s: int) -> "DistanceToSet":
        return augment(self, s, g)


@dataclass
class GainCache:
    """Last computed gain per node and the iteration it was computed in (-1: never)."""

    prev_gain: np.ndarray
    stamp: np.ndarray

    @classmethod
    def empty(cls, n: int) -> "GainCache":
        return cls(np.full(n, UNKNOWN_GAIN, dtype=np.int64), np.full(n, -1, dtype=np.int64))


def group_closeness(g: Graph, S: Iterable[int]) -> tuple[int, Fraction]:
    """(distance sum of the non-members to S, c(S)) for a group S."""
    members = set(int(s) for s in S)
    if not members or len(members) >= g.n:
        raise UndefinedMeasureError(f"group closeness undefined for |S|={len(members)}, n={g.n}")
    dist = multi_source_distances(g, sorted(members))
    if (dist < 0).any():
        raise UndefinedMeasureError("group does not reach every node")
    total = int(dist.sum())
    return total, group_score(g.n, len(members), total)


def pruned_sssp_gain(g: Graph, u: int, dS: DistanceToSet, _scratch=None) -> tuple[int, int]:
    """(distance-sum reduction from adding u, nodes dequeued by the pruned BFS)."""
    if dS.dist[u] == 0:
        raise ValueError(f"node {u} is already in the group")
    sc = _scratch or _kernels.Scratch(g.n)
    gain, visited = _kernels.pruned_gain(
        g.indptr, g.indices, u, dS.dist, sc.mark, sc.next_stamp(), sc.du, sc.queue
    )
    return int(gain), int(visited)


def augment(dS: DistanceToSet, s: int, g: Graph) -> DistanceToSet:
    """Add s to the group: one full BFS from s, then an element-wise minimum."""
    if dS.dist[s] == 0:
        raise ValueError(f"node {s} is already in the group")
    d = np.empty(g.n, dtype=np.int32)
    queue = np.empty(g.n, dtype=np.int64)
    _kernels.bfs(g.indptr, g.indices, s, d, queue)
    dist = np.minimum(dS.dist, d)
    gain = int(dS.dist.sum(dtype=np.int64) - dist.sum(dtype=np.int64))
    return DistanceToSet(dist, dS.total - gain, dS.members + (int(s),))


class _Round:
    """State shared by the workers of one augmentation round (read-only for them)."""

    def __init__(self, g, dS, cache, lazy):
        self.g = g
        self.dS = dS
        self.cache = cache
        self.lazy = lazy


def _scan(rnd: _Round, order: np.ndarray, best: tuple[int, int], sc: _kernels.Scratch):
    gains = np.empty(order.size, dtype=np.int64)
    best_gain, best_id, evaluated, visited, sc.stamp = _kernels.scan_candidates(
        rnd.g.indptr, rnd.g.indices, order, rnd.cache.prev_gain, rnd.dS.dist, rnd.lazy,
        best[0], best[1], gains, sc.mark, sc.du, sc.queue, sc.stamp + 1,
    )
    sc.stamp -= 1
    return (int(best_gain), int(best_id)), order[:evaluated], gains[:evaluated], int(visited)


def _better(a: tuple[int, int], b: tuple[int, int]) -> bool:
    """Gain desc, then id asc."""
    return a[0] > b[0] or (a[0] == b[0] and a[1] < b[1])


def greedy_pp(g: Graph, k: int, lazy: bool = True, threads: int | None = None) -> GroupResult:
    """Greedy group of size k with a (1 - 1/e) guarantee on c(S).

    The seed is the node of highest closeness (bounded-BFS top-1).  Each later
    round adds the node of largest distance-sum reduction, computed by pruned
    BFS; with ``lazy`` only candidates whose previous gain could still beat
    the round's best are re-evaluated.  Ties go to the lowest node id, so the
    selected group does not depend on ``lazy`` or ``threads``.
    """
    n = g.n
    if not 1 <= k < n:
        raise ValueError(f"k={k} out of range 1..{n - 1}")
    require_connected(g)
    threads = default_threads() if threads is None else threads
    if threads < 1:
        raise ValueError("threads must be >= 1")

    seed = run_top_k(g, 1)
    s0 = seed.ranking()[0][0]
    dS = DistanceToSet.from_group(g, [s0])
    trace = [IterationStats(0, s0, None, seed.exact_evaluations, seed.cuts, seed.visited)]
    cache = GainCache.empty(n)
    in_group = np.zeros(n, dtype=bool)
    in_group[s0] = True

    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    scratches = [_kernels.Scratch(n) for _ in range(threads)]
    try:
        for it in range(1, k):
            cand = np.flatnonzero(~in_group)
            order = cand[np.lexsort((cand, -cache.prev_gain[cand]))]
            rnd = _Round(g, dS, cache, lazy)
            best = (-1, n)
            evaluated = visited = 0
            if pool is None:
                best, done, gains, visited = _scan(rnd, order, best, scratches[0])
                cache.prev_gain[done] = gains
                cache.stamp[done] = it
                evaluated = done.size
            else:
                for start in range(0, order.size, PARALLEL_BATCH):
                    batch = order[start : start + PARALLEL_BATCH]
                    if lazy and _better(best, (int(cache.prev_gain[batch[0]]), int(batch[0]))):
                        break
                    chunks = np.array_split(batch, threads)
                    results = list(pool.map(_scan, [rnd] * threads, chunks, [best] * threads, scratches))
                    for local_best, done, gains, vis in results:
                        cache.prev_gain[done] = gains
                        cache.stamp[done] = it
                        evaluated += done.size
                        visited += vis
                        if _better(local_best, best):
                            best = local_best
            gain, s = best
            new = augment(dS, s, g)
            assert dS.total - new.total == gain
            dS = new
            in_group[s] = True
            trace.append(IterationStats(it, s, gain, evaluated, order.size - evaluated, visited))
    finally:
        if pool is not None:
            pool.shutdown()

    return GroupResult(list(dS.members), dS.total, n, "greedy++", trace)
