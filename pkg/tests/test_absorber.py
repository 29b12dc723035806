import itertools
import math

import numpy as np
import pytest

from spansub.absorber import (
    AbsorbingPath,
    GoodTupleSystem,
    absorb,
    build_absorbing_path,
    good_tuples_for,
    link_gadgets,
)
from spansub.digraph import Digraph, complete_digraph, directed_cycle
from spansub.errors import AbsorptionFailed, InvalidDegree, LinkageFailed

from .oracles import arcs_of, brute_good_tuple_count


def _path_ok(d, seq):
    return len(seq) == len(set(seq)) and all(d.has_arc(a, b) for a, b in zip(seq, seq[1:]))


def test_good_tuples_complete4():
    d = complete_digraph(4)
    for u in range(4):
        others = [v for v in range(4) if v != u]
        assert good_tuples_for(d, u) == set(itertools.permutations(others, 2))


def test_good_tuples_directed_triangle():
    d = directed_cycle(3)
    assert all(good_tuples_for(d, u) == set() for u in range(3))


def test_good_tuple_counts_agree(dense100):
    system = GoodTupleSystem(dense100, 0.04)
    counts = system.coverage_counts()
    for u in range(0, 100, 7):
        assert counts[u] == len(good_tuples_for(dense100, u)) == brute_good_tuple_count(dense100, u)


def test_good_tuple_density_n100(dense100):
    # at least 4 eps^2 n^2 = 400 for every vertex
    counts = GoodTupleSystem(dense100, 0.04).coverage_counts()
    assert counts.min() >= 400


def test_single_gadget_path():
    d = complete_digraph(5)
    assert link_gadgets(d, [(1, 3)]) == [1, 3]


def test_link_failure():
    d = Digraph(4, [(0, 1), (2, 3)])
    with pytest.raises(LinkageFailed):
        link_gadgets(d, [(0, 1), (2, 3)])


def test_complete60_path():
    d = complete_digraph(60)
    path = build_absorbing_path(d, 0.3, 0.05, 0.45)
    ell = len(path.slots)
    assert ell <= 6
    assert len(path.vertices) == 3 * ell - 1 <= 17
    assert _path_ok(d, path.vertices)


def test_degree_check():
    with pytest.raises(InvalidDegree):
        build_absorbing_path(directed_cycle(10), 0.3, 0.05, 0.1)


@pytest.fixture(scope="module")
def path300(dense300):
    return build_absorbing_path(dense300, 0.2, 0.02, 0.15, seed=4)


def test_path300_shape(dense300, path300):
    assert len(path300.vertices) <= 60
    assert _path_ok(dense300, path300.vertices)
    for i, (v, w) in enumerate(path300.slots):
        assert path300.vertices[3 * i] == v and path300.vertices[3 * i + 1] == w
        assert dense300.has_arc(v, w)


def test_path300_slot_counts(dense300, path300):
    on = set(path300.vertices)
    arcs = arcs_of(dense300)
    for u in range(300):
        if u in on:
            continue
        slots = sum((v, u) in arcs and (u, w) in arcs for v, w in path300.slots)
        assert slots >= 6


def _fresh(path):
    return AbsorbingPath(list(path.vertices), list(path.slots), set(path.free_slots), path.capacity)


def test_absorb_empty(dense300, path300):
    p = _fresh(path300)
    assert absorb(dense300, p, []) == path300.vertices


def test_absorb_one_slot():
    d = complete_digraph(3)
    p = AbsorbingPath([0, 1], [(0, 1)], {0}, 1)
    assert absorb(d, p, [2]) == [0, 2, 1]
    assert p.free_slots == set()


def test_absorb_rejects_path_vertex():
    d = complete_digraph(3)
    with pytest.raises(AbsorptionFailed):
        absorb(d, AbsorbingPath([0, 1], [(0, 1)], {0}, 1), [1])


def test_absorb_too_many():
    d = complete_digraph(4)
    with pytest.raises(AbsorptionFailed):
        absorb(d, AbsorbingPath([0, 1], [(0, 1)], {0}, 1), [2, 3])


@pytest.mark.parametrize("draw", range(20))
def test_absorb_random_sets(dense300, path300, draw):
    rng = np.random.default_rng(draw)
    outside = [v for v in range(300) if v not in set(path300.vertices)]
    leftover = [int(v) for v in rng.choice(outside, size=math.ceil(0.02 * 300), replace=False)]
    p = _fresh(path300)
    seq = absorb(dense300, p, leftover)
    assert _path_ok(dense300, seq)
    assert set(seq) == set(path300.vertices) | set(leftover)
    assert (seq[0], seq[-1]) == path300.endpoints


def test_absorb_matching_uses_both_slots():
    # 5 fits slots 0 and 1, 2 fits only slot 0
    arcs = {(0, 1), (1, 3), (3, 4), (0, 5), (5, 1), (3, 5), (5, 4), (0, 2), (2, 1)}
    d = Digraph(6, sorted(arcs))
    p = AbsorbingPath([0, 1, 3, 4], [(0, 1), (3, 4)], {0, 1}, 1)
    seq = absorb(d, p, [2, 5])
    assert seq == [0, 2, 1, 3, 5, 4]
    assert _path_ok(d, seq)
