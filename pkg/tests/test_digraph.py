import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spansub.absorber import build_absorbing_path
from spansub.digraph import (
    Digraph,
    arcs_between,
    common_out_in,
    common_out_in_counts,
    complete_digraph,
    directed_cycle,
    format_digraph,
    min_semi_degree,
    parse_digraph,
    remove_add,
)
from spansub.instances import extremal_sides, gen_extremal, gen_random_semidegree

from .oracles import arcs_of, brute_common_out_in, brute_min_semi_degree
from .strategies import digraphs


def test_min_semi_degree_complete():
    assert min_semi_degree(complete_digraph(4)) == 3


def test_min_semi_degree_cycle():
    assert min_semi_degree(directed_cycle(5)) == 1


def test_min_semi_degree_extremal():
    d = gen_extremal(20, 1, 2)
    assert min_semi_degree(d) == 7 == brute_min_semi_degree(d)


def test_min_semi_degree_arcless():
    assert min_semi_degree(Digraph(5)) == 0
    assert min_semi_degree(Digraph(0)) == 0


def test_common_out_in_complete():
    d = complete_digraph(4)
    for u, v in itertools.permutations(range(4), 2):
        assert common_out_in(d, u, v) == sorted(set(range(4)) - {u, v})


def test_common_out_in_single_arc():
    assert common_out_in(Digraph(2, [(0, 1)]), 0, 1) == []


def test_common_out_in_rejects_equal():
    with pytest.raises(ValueError):
        common_out_in(complete_digraph(3), 1, 1)


def test_common_out_in_pigeonhole(dense100):
    # delta0 >= (1/2 + 0.1) n forces |N(u, v)| >= 2 * 0.1 * n = 20
    d = dense100
    assert min_semi_degree(d) >= 60
    for u, v in itertools.permutations(range(d.n), 2):
        assert len(common_out_in(d, u, v)) >= 20


def test_common_out_in_matches_brute(dense100):
    d = dense100
    rng = np.random.default_rng(0)
    for _ in range(50):
        u, v = rng.choice(d.n, size=2, replace=False)
        assert common_out_in(d, int(u), int(v)) == brute_common_out_in(d, int(u), int(v))


def test_arcs_between_everything():
    d = gen_random_semidegree(30, 0.2, seed=3)
    assert arcs_between(d, range(30), range(30)) == arcs_of(d)


def test_arcs_between_empty_when_no_arcs_into_target():
    d = Digraph(4, [(0, 1), (2, 3)])
    assert arcs_between(d, [0], [2, 3]) == set()


def test_arcs_between_extremal_same_side():
    d = gen_extremal(20, 1, 2)
    side_a, side_b = extremal_sides(20, 1, 2)
    assert arcs_between(d, side_a, side_a) == set()
    assert arcs_between(d, side_b, side_b) == set()
    assert len(arcs_between(d, side_a, side_b)) == len(side_a) * len(side_b)


def test_remove_add_identity():
    d = gen_random_semidegree(20, 0.2, seed=4)
    sub = remove_add(d, [], [])
    assert sub.graph == d
    assert sub.labels == tuple(range(20))


def test_remove_add_single_vertex():
    d = complete_digraph(6)
    sub = remove_add(d, range(6), [3])
    assert sub.graph.n == 1 and sub.graph.num_arcs == 0
    assert sub.labels == (3,)


def test_remove_add_absorber_degree_loss(dense300):
    d = dense300
    path = build_absorbing_path(d, 0.2, 0.02, 0.15, seed=1)
    w1, w2 = path.endpoints
    sub = remove_add(d, path.vertices, [w1, w2])
    assert sub.graph.n == d.n - len(path.vertices) + 2
    assert min_semi_degree(sub.graph) >= min_semi_degree(d) - (len(path.vertices) - 2)


def test_remove_add_labels_map_back():
    d = gen_random_semidegree(25, 0.2, seed=5)
    sub = remove_add(d, [0, 5, 7], [5])
    for i, j in itertools.product(range(sub.graph.n), repeat=2):
        assert sub.graph.has_arc(i, j) == d.has_arc(sub.labels[i], sub.labels[j])


def test_invalid_arcs_rejected():
    with pytest.raises(ValueError):
        Digraph(3, [(0, 0)])
    with pytest.raises(ValueError):
        Digraph(3, [(0, 1), (0, 1)])
    with pytest.raises(ValueError):
        Digraph(3, [(0, 3)])


def test_text_round_trip():
    d = gen_random_semidegree(15, 0.2, seed=6)
    assert parse_digraph(format_digraph(d, "hello\nworld")) == d


def test_text_comments_and_errors():
    assert parse_digraph("# c\n3 2\n0 1\n# mid\n1 2\n") == Digraph(3, [(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        parse_digraph("3 2\n0 1\n")
    with pytest.raises(ValueError):
        parse_digraph("3 1\n0 x\n")
    with pytest.raises(ValueError):
        parse_digraph("")


@settings(max_examples=60, deadline=None)
@given(digraphs())
def test_degree_sums(d):
    outs = [d.out_degree(v) for v in range(d.n)]
    ins = [d.in_degree(v) for v in range(d.n)]
    assert sum(outs) == sum(ins) == d.num_arcs == len(arcs_of(d))
    for u in range(d.n):
        for v in d.out_neighbors(u):
            assert u in d.in_neighbors(v)


@settings(max_examples=60, deadline=None)
@given(digraphs(min_n=2))
def test_common_out_in_is_intersection(d):
    counts = common_out_in_counts(d)
    for u, v in itertools.permutations(range(d.n), 2):
        expected = sorted(set(d.out_neighbors(u)) & set(d.in_neighbors(v)))
        assert common_out_in(d, u, v) == expected == brute_common_out_in(d, u, v)
        assert counts[u, v] == len(expected)
    assert min_semi_degree(d) == brute_min_semi_degree(d)


@settings(max_examples=60, deadline=None)
@given(digraphs(), st.data())
def test_remove_keeps_outside_arcs(d, data):
    removed = data.draw(st.sets(st.integers(0, max(d.n - 1, 0)), max_size=d.n)) if d.n else set()
    sub = remove_add(d, removed)
    kept = {(sub.labels[u], sub.labels[v]) for u, v in sub.graph.arcs()}
    assert kept == {(u, v) for u, v in arcs_of(d) if u not in removed and v not in removed}


@pytest.mark.parametrize("seed", range(10))
def test_pigeonhole_bound_on_generated(seed):
    eps = 0.1 + 0.02 * (seed % 3)
    d = gen_random_semidegree(80 + 10 * seed, eps, seed=seed)
    counts = common_out_in_counts(d)
    np.fill_diagonal(counts, d.n)
    assert counts.min() >= math.ceil(2 * eps * d.n) - 2
