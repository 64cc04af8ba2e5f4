"""Compiled traversal kernels over CSR adjacency (indptr, indices).

All kernels release the GIL so callers can fan them out over threads.
Scratch arrays are passed in by the caller; a kernel never allocates per call
except where noted.
"""

import numba
import numpy as np

UNREACHED = -1

_jit = numba.njit(cache=True, nogil=True)


@_jit
def bfs(indptr, indices, source, dist, queue):
    """Plain BFS from ``source``; fills ``dist`` (-1 = unreached). Returns nodes reached."""
    n = indptr.size - 1
    for i in range(n):
        dist[i] = UNREACHED
    dist[source] = 0
    queue[0] = source
    head = 0
    tail = 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for e in range(indptr[u], indptr[u + 1]):
            w = indices[e]
            if dist[w] == UNREACHED:
                dist[w] = du
                queue[tail] = w
                tail += 1
    return tail


@_jit
def multi_source_bfs(indptr, indices, sources, dist, queue):
    """BFS seeded with every node in ``sources`` at distance 0. Returns nodes reached."""
    n = indptr.size - 1
    for i in range(n):
        dist[i] = UNREACHED
    tail = 0
    for s in sources:
        if dist[s] == UNREACHED:
            dist[s] = 0
            queue[tail] = s
            tail += 1
    head = 0
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for e in range(indptr[u], indptr[u + 1]):
            w = indices[e]
            if dist[w] == UNREACHED:
                dist[w] = du
                queue[tail] = w
                tail += 1
    return tail


@_jit
def bfs_cut(indptr, indices, v, cut_at, mark, stamp, queue):
    """Level-synchronous BFS from ``v`` that stops once its optimistic farness reaches ``cut_at``.

    After all nodes up to distance d are settled (r of them, distance sum s),
    every unsettled node is at least d+1 away, so s + (n - r)(d + 1) is a lower
    bound on the farness of ``v``.  If that bound is >= ``cut_at`` the search
    is abandoned.

    Returns (farness, visited, levels); farness is -1 when cut.
    """
    n = indptr.size - 1
    mark[v] = stamp
    queue[0] = v
    head = 0
    tail = 1
    level_end = 1
    d = 0
    s = 0
    while head < tail:
        while head < level_end:
            u = queue[head]
            head += 1
            for e in range(indptr[u], indptr[u + 1]):
                w = indices[e]
                if mark[w] != stamp:
                    mark[w] = stamp
                    queue[tail] = w
                    tail += 1
        d += 1
        s += (tail - level_end) * d
        level_end = tail
        if tail == n:
            return s, tail, d
        bound = s + (n - tail) * (d + 1)
        if bound >= cut_at:
            return -1, tail, d
    # disconnected: callers reject this before calling
    return -1, tail, d


@_jit
def pruned_gain(indptr, indices, u, dist_s, mark, stamp, du, queue):
    """Distance-sum reduction from adding ``u`` to the group, via a pruned BFS.

    A dequeued node w with d(u, w) < dist_s[w] contributes the difference and
    expands its neighbours; otherwise it contributes nothing and its subtree
    is not explored.  Returns (gain, dequeued).
    """
    mark[u] = stamp
    du[u] = 0
    queue[0] = u
    head = 0
    tail = 1
    gain = 0
    while head < tail:
        w = queue[head]
        head += 1
        dw = du[w]
        if dw >= dist_s[w]:
            continue
        gain += dist_s[w] - dw
        for e in range(indptr[w], indptr[w + 1]):
            x = indices[e]
            if mark[x] != stamp:
                mark[x] = stamp
                du[x] = dw + 1
                queue[tail] = x
                tail += 1
    return gain, head


@_jit
def scan_candidates(indptr, indices, order, prev_gain, dist_s, lazy, best_gain, best_id,
                    gains, mark, du, queue, stamp):
    """Evaluate candidates in ``order`` until none left can beat the running best.

    ``order`` must be sorted by (prev_gain desc, id asc).  The running best is
    compared on (gain desc, id asc); with ``lazy`` set, the scan stops at the
    first candidate whose previous gain cannot beat it, since gains never
    grow between rounds.  ``gains[i]`` receives the gain of ``order[i]`` for
    every evaluated position.

    Returns (best_gain, best_id, evaluated, visited, next_stamp).
    """
    visited = 0
    evaluated = 0
    for i in range(order.size):
        u = order[i]
        if lazy:
            ub = prev_gain[u]
            if ub < best_gain or (ub == best_gain and u > best_id):
                break
        g, vis = pruned_gain(indptr, indices, u, dist_s, mark, stamp, du, queue)
        stamp += 1
        gains[i] = g
        visited += vis
        evaluated += 1
        if g > best_gain or (g == best_gain and u < best_id):
            best_gain = g
            best_id = u
    return best_gain, best_id, evaluated, visited, stamp


class Scratch:
    """Per-thread buffers for the stamped traversals; ``stamp`` is the last stamp used."""

    __slots__ = ("mark", "du", "queue", "stamp")

    def __init__(self, n):
        self.mark = np.zeros(n, dtype=np.int64)
        self.du = np.zeros(n, dtype=np.int32)
        self.queue = np.empty(n, dtype=np.int64)
        self.stamp = 0

    def next_stamp(self):
        self.stamp += 1
        return self.stamp
