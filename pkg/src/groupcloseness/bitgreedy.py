"""Bit-parallel greedy group closeness.

Row u of a level set holds B_i(u): bit j is set iff d(u, j) <= i.  The
marginal gain of u with respect to a group S is the sum over levels of
popcount(B_i(u) AND NOT B_i(S)), stopping at the first empty level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numba
import numpy as np

from .errors import CapacityError
from .graph import Graph, multi_source_distances, require_connected
from .greedy import DistanceToSet, GainCache, GroupResult, IterationStats, augment
from .topk import run_top_k

DEFAULT_MEMORY_CAP = 8 * 1024**3
LIVE_LEVEL_SETS = 2

_jit = numba.njit(cache=True, nogil=True)


def words_per_row(n: int) -> int:
    return (n + 63) // 64


def required_bytes(n: int) -> int:
    """Bytes held by the live level sets plus one group vector."""
    w = words_per_row(n)
    return LIVE_LEVEL_SETS * n * w * 8 + w * 8


@_jit
def _popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@_jit
def _propagate(indptr, indices, prev, cur):
    """cur[u] = prev[u] OR prev[v] for every neighbour v of u."""
    n, w = prev.shape
    for u in range(n):
        for j in range(w):
            cur[u, j] = prev[u, j]
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            for j in range(w):
                cur[u, j] |= prev[v, j]


@_jit
def _propagate_rows(indptr, indices, prev, cur, rows):
    """As ``_propagate`` but only for the listed rows; other rows of ``cur`` are left stale."""
    w = prev.shape[1]
    for r in range(rows.size):
        u = rows[r]
        for j in range(w):
            cur[u, j] = prev[u, j]
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            for j in range(w):
                cur[u, j] |= prev[v, j]


@_jit
def _masked_counts(rows, group_vec, nodes, out):
    """out[i] = popcount(rows[nodes[i]] AND NOT group_vec)."""
    w = group_vec.size
    for i in range(nodes.size):
        u = nodes[i]
        c = 0
        for j in range(w):
            c += _popcount64(rows[u, j] & ~group_vec[j])
        out[i] = c


def _identity(rows: np.ndarray) -> np.ndarray:
    n = rows.shape[0]
    rows.fill(0)
    ids = np.arange(n)
    rows[ids, ids // 64] = np.left_shift(np.uint64(1), (ids % 64).astype(np.uint64))
    return rows


def pack_bits(mask: np.ndarray) -> np.ndarray:
    """Boolean vector -> uint64 words, bit j in word j // 64 at position j % 64."""
    w = words_per_row(mask.size)
    padded = np.zeros(w * 64, dtype=bool)
    padded[: mask.size] = mask
    return np.packbits(padded, bitorder="little").view("<u8").astype(np.uint64)


def unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    return np.unpackbits(words.astype("<u8").view(np.uint8), bitorder="little")[:n].astype(bool)


def popcount(words: np.ndarray) -> int:
    return int(np.bitwise_count(words).sum())


@dataclass(frozen=True)
class BitLevelState:
    """B_i(u) for every node, B_i(S), and which non-members still gain at level i."""

    level: int
    node_vecs: np.ndarray  # (n, words) uint64
    group_vec: np.ndarray  # (words,) uint64
    active: np.ndarray  # (n,) bool
    members: tuple[int, ...]


def _group_union(node_vecs, members):
    return np.bitwise_or.reduce(node_vecs[list(members)], axis=0)


def _active(node_vecs, group_vec, previous=None):
    n = node_vecs.shape[0]
    counts = np.empty(n, dtype=np.int64)
    _masked_counts(node_vecs, group_vec, np.arange(n, dtype=np.int64), counts)
    act = counts > 0
    return act if previous is None else act & previous


def initial_state(g: Graph, members: Sequence[int]) -> BitLevelState:
    members = tuple(int(s) for s in members)
    vecs = _identity(np.empty((g.n, words_per_row(g.n)), dtype=np.uint64))
    group = _group_union(vecs, members)
    return BitLevelState(0, vecs, group, _active(vecs, group), members)


def advance_levels(state: BitLevelState, g: Graph) -> BitLevelState:
    """Level i from level i-1.  B_i(u) also keeps B_{i-1}(u) so bit u survives."""
    cur = np.empty_like(state.node_vecs)
    _propagate(g.indptr, g.indices, state.node_vecs, cur)
    group = _group_union(cur, state.members)
    return BitLevelState(state.level + 1, cur, group, _active(cur, group, state.active), state.members)


def level_history(g: Graph, members: Sequence[int]) -> list[BitLevelState]:
    """States from level 0 until no non-member gains any more."""
    states = [initial_state(g, members)]
    while states[-1].active.any():
        states.append(advance_levels(states[-1], g))
    return states


def bit_marginal_gain(u: int, history: Sequence[BitLevelState]) -> int:
    """Sum over levels of |B_i(u) AND NOT B_i(S)| up to the first empty level."""
    if u in history[0].members:
        raise ValueError(f"node {u} is already in the group")
    gain = 0
    for state in history:
        c = popcount(state.node_vecs[u] & ~state.group_vec)
        if c == 0:
            return gain
        gain += c
    raise ValueError("history ends before the gain of node %d is complete" % u)


def _round(g, dS, cache, lazy, cand, prev, cur):
    """One bit-parallel augmentation round; returns (best, evaluated, skipped, row_levels).

    Every candidate's count is zero from level max d(S, .) on, and the row of
    a node x only influences candidate u at level i if d(u, x) <= i, so each
    propagation step is restricted to rows close enough to a still-active
    candidate to matter before that level.
    """
    n = g.n
    gains = np.zeros(n, dtype=np.int64)
    counts = np.empty(n, dtype=np.int64)
    active = cand.copy()
    finished = []
    skipped = 0
    row_levels = 0
    ub = cache.prev_gain
    horizon = int(dS.dist.max())
    _identity(prev)
    level = 0
    while active.size:
        group_vec = pack_bits(dS.dist <= level)
        c = counts[: active.size]
        _masked_counts(prev, group_vec, active, c)
        row_levels += active.size
        gains[active] += c
        done = c == 0
        finished.append(active[done])
        active = active[~done]
        if lazy and active.size:
            # partial sums are lower bounds, previous gains upper bounds
            pool = np.concatenate([active] + finished)
            g_max = gains[pool].max()
            lb_id = pool[gains[pool] == g_max].min()
            keep = (ub[active] > g_max) | ((ub[active] == g_max) & (active <= lb_id))
            skipped += int((~keep).sum())
            active = active[keep]
        if level + 1 >= horizon:
            # B_horizon(S) covers every node: all remaining counts are zero
            finished.append(active)
            break
        if not active.size:
            break
        reach = multi_source_distances(g, active)
        rows = np.flatnonzero((reach >= 0) & (reach <= horizon - 2 - level))
        _propagate_rows(g.indptr, g.indices, prev, cur, rows)
        prev, cur = cur, prev
        level += 1
    done = np.concatenate(finished)
    best_gain = gains[done].max()
    best_id = int(done[gains[done] == best_gain].min())
    cache.prev_gain[done] = gains[done]
    return (int(best_gain), best_id), done, skipped, row_levels


def bit_greedy_pp(
    g: Graph, k: int, lazy: bool = True, memory_cap: int = DEFAULT_MEMORY_CAP
) -> GroupResult:
    """Greedy group of size k using level bit vectors for the marginal gains.

    Selects the same group as ``greedy_pp`` (gain desc, id asc).  Raises
    ``CapacityError`` before allocating if the level sets exceed ``memory_cap``.
    ``visited`` in the trace counts (candidate, level) popcount evaluations.
    """
    n = g.n
    if not 1 <= k < n:
        raise ValueError(f"k={k} out of range 1..{n - 1}")
    need = required_bytes(n)
    if need > memory_cap:
        raise CapacityError(
            f"bit-parallel levels for n={n} need {need} bytes, cap is {memory_cap}", need, memory_cap
        )
    require_connected(g)

    seed = run_top_k(g, 1)
    s0 = seed.ranking()[0][0]
    dS = DistanceToSet.from_group(g, [s0])
    trace = [IterationStats(0, s0, None, seed.exact_evaluations, seed.cuts, seed.visited)]
    if k == 1:
        return GroupResult([s0], dS.total, n, "bitgreedy++", trace, 0)

    w = words_per_row(n)
    prev = np.empty((n, w), dtype=np.uint64)
    cur = np.empty((n, w), dtype=np.uint64)
    peak = prev.nbytes + cur.nbytes + w * 8
    cache = GainCache.empty(n)
    in_group = np.zeros(n, dtype=bool)
    in_group[s0] = True
    for it in range(1, k):
        cand = np.flatnonzero(~in_group)
        (gain, s), done, skipped, row_levels = _round(g, dS, cache, lazy, cand, prev, cur)
        cache.stamp[done] = it
        new = augment(dS, s, g)
        assert dS.total - new.total == gain
        dS = new
        in_group[s] = True
        trace.append(IterationStats(it, s, gain, done.size, skipped, row_levels))
    return GroupResult(list(dS.members), dS.total, n, "bitgreedy++", trace, peak)
