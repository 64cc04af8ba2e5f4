import pytest

from groupcloseness import (
    CapacityError,
    degree_group,
    greedy_pp,
    greedy_reference,
    group_closeness,
    overlap_percent,
    overlap_report,
    topk_group,
)

import oracles
from conftest import cycle, path, random_connected, star


def test_reference_examples():
    assert greedy_reference(path(5), 2).distance_sum == 4
    assert greedy_reference(star(4), 1).distance_sum == 3


def test_reference_matches_textbook_greedy():
    for seed in range(20):
        n = 8 + 2 * seed
        g = random_connected(seed, n)
        group, total = oracles.greedy(oracles.adjacency(n, g.edges()), 4)
        r = greedy_reference(g, 4)
        assert (r.group, r.distance_sum) == (group, total)


def test_reference_cap():
    with pytest.raises(CapacityError):
        greedy_reference(random_connected(0, 50), 2, n_cap=49)


def test_reference_trace_gains():
    g = random_connected(2, 60)
    r = greedy_reference(g, 6)
    assert [t.gain for t in r.gain_trace] == [t.gain for t in greedy_pp(g, 6).gain_trace]


def test_degree_group_examples():
    assert degree_group(star(4), 1) == [0]
    assert degree_group(cycle(4), 2) == [0, 1]
    assert degree_group(path(5), 2) == [1, 2]


def test_topk_group_examples():
    assert topk_group(path(5), 1) == [2]
    assert sorted(topk_group(cycle(4), 4)) == [0, 1, 2, 3]
    assert topk_group(star(4), 1) == [0]


def test_overlap_percent_examples():
    assert round(overlap_percent({1, 2, 3}, {2, 3, 4}, 3), 2) == 66.67
    assert overlap_percent({1, 2}, {2, 1}, 2) == 100
    assert overlap_percent({1, 2}, {3, 4}, 2) == 0
    with pytest.raises(ValueError):
        overlap_percent({1, 2}, {1}, 2)


def test_overlap_report_hand_computed():
    # P5: greedy picks 2 then 0; top-closeness 2, 1; degree 1, 2
    reports = overlap_report(path(5), [1, 2])
    assert [(r.k, r.overlap_topk_pct, r.overlap_degree_pct) for r in reports] == [(1, 100.0, 0.0), (2, 50.0, 50.0)]
    assert reports[1].group == [2, 0] and reports[1].topk == [2, 1] and reports[1].degree == [1, 2]
    assert reports[0].row() == {"k": 1, "overlap_topk_pct": 100.0, "overlap_degree_pct": 0.0}


def test_overlap_prefixes_agree_with_direct_runs():
    g = random_connected(4, 200, extra=300)
    for r in overlap_report(g, [3, 7, 12]):
        assert r.group == greedy_pp(g, r.k).group
        assert r.topk == topk_group(g, r.k)
        assert r.degree == degree_group(g, r.k)
        assert 0 <= r.overlap_topk_pct <= 100 and 0 <= r.overlap_degree_pct <= 100


def test_greedy_beats_degree_on_fixtures(karate, usa):
    # not true on every graph, but it holds on both bundled graphs
    for g in (karate, usa):
        for k in (2, 10, 20):
            assert greedy_pp(g, k).distance_sum <= group_closeness(g, degree_group(g, k))[0]
