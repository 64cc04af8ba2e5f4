"""Exact optimum by exhaustive enumeration, and an LP export of the p-median style ILP."""

from __future__ import annotations

import io
import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import BinaryIO, TextIO

import numpy as np

from . import _kernels
from .errors import CapacityError
from .graph import Graph, require_connected
from .greedy import GroupResult, group_score

DEFAULT_BUDGET = 10_000_000
DEFAULT_ILP_CAP = 5000


@dataclass(frozen=True)
class ExactResult:
    group: tuple[int, ...]
    distance_sum: int
    subsets_evaluated: int
    n: int

    @property
    def k(self) -> int:
        return len(self.group)

    @property
    def score(self) -> Fraction:
        return group_score(self.n, self.k, self.distance_sum)


def exact_group_enumeration(g: Graph, k: int, budget: int = DEFAULT_BUDGET) -> ExactResult:
    """Minimum distance sum over all size-k groups; ties go to the lexicographically smallest.

    Every subset gets a fresh multi-source BFS.  Slow on purpose: this is the
    reference the faster solvers are checked against.
    """
    n = g.n
    if not 1 <= k < n:
        raise ValueError(f"k={k} out of range 1..{n - 1}")
    total = math.comb(n, k)
    if total > budget:
        raise CapacityError(f"C({n},{k}) = {total} subsets exceeds budget {budget}", total, budget)
    require_connected(g)

    dist = np.empty(n, dtype=np.int32)
    queue = np.empty(n, dtype=np.int64)
    best_sum, best_group = None, None
    count = 0
    for group in itertools.combinations(range(n), k):
        _kernels.multi_source_bfs(g.indptr, g.indices, np.array(group, dtype=np.int64), dist, queue)
        s = int(dist.sum())
        count += 1
        # strict: the first (lexicographically smallest) subset wins ties
        if best_sum is None or s < best_sum:
            best_sum, best_group = s, group
    return ExactResult(best_group, best_sum, count, n)


def approximation_ratio(exact: ExactResult, approx: GroupResult | ExactResult) -> Fraction:
    """exact.distance_sum / approx.distance_sum; 1 means the approximation is optimal."""
    if exact.k != approx.k:
        raise ValueError(f"group sizes differ: exact k={exact.k}, approximate k={approx.k}")
    if approx.distance_sum == 0:
        return Fraction(1)
    return Fraction(exact.distance_sum, approx.distance_sum)


_NAME_OK = re.compile(r"^[A-Za-z0-9]+$")


def _names(g: Graph) -> list[str]:
    # keep input labels when they are safe LP identifiers; fall back to ids otherwise
    if all(_NAME_OK.match(lab) for lab in g.labels):
        return list(g.labels)
    return [str(i) for i in range(g.n)]


def _wrap(head: str, terms: list[str], tail: str = "", width: int = 250) -> str:
    lines, line = [], head
    for t in terms:
        if len(line) + len(t) + 1 > width:
            lines.append(line)
            line = "   "
        line += " " + t
    line += tail
    lines.append(line)
    return "\n".join(lines) + "\n"


def _all_pairs(g: Graph) -> np.ndarray:
    d = np.empty((g.n, g.n), dtype=np.int32)
    queue = np.empty(g.n, dtype=np.int64)
    for i in range(g.n):
        _kernels.bfs(g.indptr, g.indices, i, d[i], queue)
    return d


def export_ilp(g: Graph, k: int, sink: BinaryIO | TextIO, n_cap: int = DEFAULT_ILP_CAP) -> None:
    """Write the assignment ILP for a size-k group in CPLEX LP format.

    Variables: y_j = 1 iff j is in the group, x_i_j = 1 iff i is served by j.
    minimize    sum_ij d(i, j) x_i_j
    subject to  sum_j x_i_j = 1           for every i
                sum_j y_j = k
                x_i_j - y_j <= 0          for every i, j
    Self-assignment x_i_i has cost 0, so members serve themselves.
    """
    n = g.n
    if n > n_cap:
        raise CapacityError(f"ILP export needs all-pairs distances for n={n}, cap is {n_cap}", n, n_cap)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    require_connected(g)
    d = _all_pairs(g)
    names = _names(g)
    x = [[f"x_{names[i]}_{names[j]}" for j in range(n)] for i in range(n)]
    y = [f"y_{names[j]}" for j in range(n)]

    out = io.StringIO()
    out.write(f"\\ group closeness ILP: n={n} m={g.m} k={k}\n")
    out.write("Minimize\n")
    obj = [f"{'+' if t else ''} {int(d[i, j])} {x[i][j]}".strip() for t, (i, j) in
           enumerate(itertools.product(range(n), repeat=2))]
    out.write(_wrap(" obj:", obj))
    out.write("Subject To\n")
    for i in range(n):
        terms = [("+ " if j else "") + x[i][j] for j in range(n)]
        out.write(_wrap(f" assign_{names[i]}:", terms, " = 1"))
    out.write(_wrap(" size:", [("+ " if j else "") + y[j] for j in range(n)], f" = {k}"))
    for i in range(n):
        for j in range(n):
            out.write(f" link_{names[i]}_{names[j]}: {x[i][j]} - {y[j]} <= 0\n")
    out.write("Binary\n")
    for i in range(n):
        out.write(_wrap("", x[i]))
    out.write(_wrap("", y))
    out.write("End\n")

    text = out.getvalue()
    try:
        sink.write(text)
    except TypeError:  # binary sink
        sink.write(text.encode("ascii"))
