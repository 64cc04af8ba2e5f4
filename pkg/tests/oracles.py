"""Independent pure-Python references.  Nothing here imports the package under test."""

from collections import deque
from fractions import Fraction
from itertools import combinations


def adjacency(n, edges):
    adj = [set() for _ in range(n)]
    for u, v in edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    return [sorted(a) for a in adj]


def bfs(adj, sources):
    if isinstance(sources, int):
        sources = [sources]
    dist = [None] * len(adj)
    q = deque()
    for s in sources:
        dist[s] = 0
        q.append(s)
    while q:
        u = q.popleft()
        for w in adj[u]:
            if dist[w] is None:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def apsp(adj):
    return [bfs(adj, s) for s in range(len(adj))]


def group_sum(adj, group):
    return sum(bfs(adj, list(group)))


def closeness_ranking(adj):
    """All (node, closeness) sorted by closeness desc, id asc."""
    n = len(adj)
    scores = [(v, Fraction(n - 1, sum(bfs(adj, v)))) for v in range(n)]
    return sorted(scores, key=lambda t: (-t[1], t[0]))


def gain(adj, group, u):
    return group_sum(adj, group) - group_sum(adj, list(group) + [u])


def greedy(adj, k):
    """Textbook greedy: best closeness first, then largest distance-sum reduction; lowest id on ties."""
    group = [closeness_ranking(adj)[0][0]]
    while len(group) < k:
        base = group_sum(adj, group)
        best = max((base - group_sum(adj, group + [u]), -u) for u in range(len(adj)) if u not in group)
        group.append(-best[1])
    return group, group_sum(adj, group)


def optimum(adj, k):
    return min((group_sum(adj, c), c) for c in combinations(range(len(adj)), k))
