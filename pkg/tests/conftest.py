import random

import networkx as nx
import pytest

from groupcloseness import Graph, bundled_graph


def path(n):
    return Graph.from_edges([(i, i + 1) for i in range(n - 1)], n=n)


def cycle(n):
    return Graph.from_edges([(i, (i + 1) % n) for i in range(n)], n=n)


def star(n):
    return Graph.from_edges([(0, i) for i in range(1, n)], n=n)


def from_nx(G):
    G = nx.convert_node_labels_to_integers(G)
    return Graph.from_edges(list(G.edges()), n=G.number_of_nodes())


def random_connected(seed, n, extra=None):
    """Random spanning tree plus extra random edges; connected by construction."""
    rng = random.Random(seed)
    edges = [(v, rng.randrange(v)) for v in range(1, n)]
    for _ in range(extra if extra is not None else rng.randint(0, 2 * n)):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.append((u, v))
    # shuffle ids so that low ids are not always tree roots
    perm = list(range(n))
    rng.shuffle(perm)
    return Graph.from_edges([(perm[u], perm[v]) for u, v in edges], n=n)


@pytest.fixture(scope="session")
def karate():
    return bundled_graph("karate")


@pytest.fixture(scope="session")
def usa():
    return bundled_graph("contiguous-usa")


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for the terminal summary and assert on it."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(criterion, ok, detail):
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
        lines.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
