"""Immutable CSR graph, edge-list ingestion, connectivity and plain BFS."""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, Sequence

import numpy as np
from scipy.sparse import csgraph, csr_matrix

from . import _kernels
from .errors import DisconnectedGraphError, GraphFormatError

COMMENT_PREFIXES = ("#", "%")


@dataclass(frozen=True)
class IngestionReport:
    nodes: int
    edges: int
    duplicates_dropped: int = 0
    self_loops_dropped: int = 0

    def as_dict(self):
        return {
            "nodes": self.nodes,
            "edges": self.edges,
            "duplicates_dropped": self.duplicates_dropped,
            "self_loops_dropped": self.self_loops_dropped,
        }

    def __str__(self):
        return " ".join(f"{k}={v}" for k, v in self.as_dict().items())


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected, unweighted graph over nodes 0..n-1 in CSR form.

    ``indices[indptr[u]:indptr[u+1]]`` are the neighbours of ``u``, sorted
    ascending.  ``labels[u]`` is the label the node had in its source file.
    """

    indptr: np.ndarray
    indices: np.ndarray
    labels: tuple = ()
    ingestion: IngestionReport | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return self.indptr.size - 1

    @property
    def m(self) -> int:
        return self.indices.size // 2

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u] : self.indptr[u + 1]]

    def degree(self, u: int | None = None):
        deg = np.diff(self.indptr)
        return deg if u is None else int(deg[u])

    def adjacency(self) -> list[list[int]]:
        return [self.neighbors(u).tolist() for u in range(self.n)]

    def adjacency_matrix(self) -> csr_matrix:
        data = np.ones(self.indices.size, dtype=np.int8)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def edges(self):
        """Each undirected edge once, as (u, v) with u < v, in ascending order."""
        for u in range(self.n):
            for v in self.neighbors(u):
                if u < v:
                    yield u, int(v)

    def label(self, u: int) -> str:
        return self.labels[u] if self.labels else str(u)

    def node_of(self, label) -> int:
        """Compact id of an original label (linear scan; for CLI and tests)."""
        label = str(label)
        for i, lab in enumerate(self.labels or map(str, range(self.n))):
            if lab == label:
                return i
        raise KeyError(label)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], n: int | None = None, labels=None) -> "Graph":
        """Build from integer edges over 0..n-1, symmetrising and dropping loops/duplicates."""
        arr = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if n is None:
            n = int(arr.max()) + 1 if arr.size else 0
        arr = arr[arr[:, 0] != arr[:, 1]]
        both = np.concatenate([arr, arr[:, ::-1]])
        if both.size:
            both = np.unique(both, axis=0)  # sorts by (src, dst)
        src = both[:, 0] if both.size else np.empty(0, np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        indices = (both[:, 1] if both.size else np.empty(0, np.int64)).astype(np.int32)
        if labels is None:
            labels = tuple(str(i) for i in range(n))
        return cls(indptr, indices, tuple(labels))


@dataclass(frozen=True)
class DistanceArray:
    source: int
    dist: np.ndarray  # int32, -1 for unreachable

    def total(self) -> int:
        return int(self.dist[self.dist > 0].sum())


def _token_splitter(separator):
    if separator is None or separator == "whitespace":
        return str.split
    if separator == "tab":
        return lambda s: s.split("\t")
    if separator == "comma":
        return lambda s: [t.strip() for t in s.split(",")]
    return lambda s: s.split(separator)


def load_edge_list(
    source: str | bytes | BinaryIO | Iterable[bytes] | Iterable[str],
    comment_prefixes: Sequence[str] = COMMENT_PREFIXES,
    separator: str | None = None,
    extra_columns: str = "error",
) -> Graph:
    """Parse a SNAP/KONECT-style edge list.

    Labels are compacted to 0..n-1 in order of first appearance.  Edges are
    symmetrised; self-loops and repeated edges are dropped and counted in
    ``graph.ingestion``.  ``extra_columns="ignore"`` accepts KONECT files with
    weight/timestamp columns by reading only the first two tokens.
    """
    if isinstance(source, (str, bytes)):
        source = source.splitlines()
    split = _token_splitter(separator)
    ids: dict[str, int] = {}
    labels: list[str] = []
    seen: set[tuple[int, int]] = set()
    src: list[int] = []
    dst: list[int] = []
    duplicates = loops = 0

    def node(tok):
        i = ids.get(tok)
        if i is None:
            i = ids[tok] = len(labels)
            labels.append(tok)
        return i

    for line_no, raw in enumerate(source, start=1):
        line = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        line = line.strip()
        if not line or line.startswith(tuple(comment_prefixes)):
            continue
        toks = [t for t in split(line) if t != ""]
        if len(toks) != 2 and not (extra_columns == "ignore" and len(toks) > 2):
            raise GraphFormatError(f"expected 2 tokens, got {len(toks)}: {line!r}", line_no)
        u, v = node(toks[0]), node(toks[1])
        if u == v:
            loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        src.append(key[0])
        dst.append(key[1])

    if not seen:
        raise GraphFormatError("graph has no edges")
    g = Graph.from_edges(zip(src, dst), n=len(labels), labels=labels)
    report = IngestionReport(g.n, g.m, duplicates, loops)
    return Graph(g.indptr, g.indices, g.labels, report)


def read_edge_list(path, **options) -> Graph:
    with open(path, "rb") as fh:
        return load_edge_list(fh, **options)


def write_edge_list(g: Graph, sink) -> None:
    """Serialise as one ``label label`` line per undirected edge."""
    text = isinstance(sink, io.TextIOBase)
    for u, v in g.edges():
        line = f"{g.label(u)} {g.label(v)}\n"
        sink.write(line if text else line.encode("utf-8"))


def _label_key(label: str):
    return (0, int(label), "") if re.fullmatch(r"-?\d+", label) else (1, 0, label)


def connected_components(g: Graph) -> np.ndarray:
    """Component label per node."""
    _, comp = csgraph.connected_components(g.adjacency_matrix(), directed=False)
    return comp


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return False
    dist = np.empty(g.n, dtype=np.int32)
    queue = np.empty(g.n, dtype=np.int64)
    return _kernels.bfs(g.indptr, g.indices, 0, dist, queue) == g.n


def require_connected(g: Graph) -> None:
    if not is_connected(g):
        raise DisconnectedGraphError(
            "graph is not connected; extract the largest connected component first"
        )


def subgraph(g: Graph, keep: np.ndarray) -> Graph:
    """Induced subgraph on the boolean mask ``keep``; relative id order is preserved."""
    new_id = np.full(g.n, -1, dtype=np.int64)
    kept = np.flatnonzero(keep)
    new_id[kept] = np.arange(kept.size)
    src = np.repeat(np.arange(g.n), np.diff(g.indptr))
    dst = g.indices.astype(np.int64)
    sel = keep[src] & keep[dst] & (src < dst)
    edges = np.stack([new_id[src[sel]], new_id[dst[sel]]], axis=1)
    labels = tuple(g.labels[i] for i in kept) if g.labels else None
    return Graph.from_edges(edges, n=kept.size, labels=labels)


def largest_connected_component(g: Graph) -> Graph:
    """Subgraph induced by the largest component, ids re-compacted.

    Ties between equally large components go to the one holding the smallest
    original label (numeric labels compare numerically).
    """
    if g.n == 0:
        raise GraphFormatError("graph has no nodes")
    comp = connected_components(g)
    sizes = np.bincount(comp)
    if sizes.size == 1:
        return g
    best = sizes.max()
    candidates = np.flatnonzero(sizes == best)
    if candidates.size > 1:
        smallest = {}
        for u in range(g.n):
            c = comp[u]
            if sizes[c] == best:
                key = _label_key(g.label(u))
                if c not in smallest or key < smallest[c]:
                    smallest[c] = key
        winner = min(candidates, key=lambda c: smallest[c])
    else:
        winner = candidates[0]
    return subgraph(g, comp == winner)


def bfs_distances(g: Graph, s: int) -> DistanceArray:
    if not 0 <= s < g.n:
        raise IndexError(f"node {s} out of range for n={g.n}")
    dist = np.empty(g.n, dtype=np.int32)
    queue = np.empty(g.n, dtype=np.int64)
    _kernels.bfs(g.indptr, g.indices, s, dist, queue)
    return DistanceArray(s, dist)


def multi_source_distances(g: Graph, sources) -> np.ndarray:
    dist = np.empty(g.n, dtype=np.int32)
    queue = np.empty(g.n, dtype=np.int64)
    _kernels.multi_source_bfs(g.indptr, g.indices, np.asarray(list(sources), dtype=np.int64), dist, queue)
    return dist

