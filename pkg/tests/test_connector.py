import itertools
import math

import numpy as np
import pytest

from spansub.connector import Reservoir, build_reservoir, connect_through, exclude, pair_coverage
from spansub.digraph import common_out_in, complete_digraph
from spansub.errors import FamilyNotFound, InvalidDegree, ReservoirExhausted
from spansub.instances import gen_random_semidegree

from .oracles import brute_common_out_in


def test_complete_digraph_reservoir():
    d = complete_digraph(50)
    res = build_reservoir(d, 0.3, 0.05, 0.4)
    assert len(res) <= 15
    members = set(res.members)
    for u, v in itertools.permutations(range(50), 2):
        cov = len(set(common_out_in(d, u, v)) & members)
        assert cov == len(members - {u, v}) >= 3


def test_generated_reservoir_all_pairs(dense200):
    res = build_reservoir(dense200, 0.2, 0.02, 0.15, seed=1)
    assert len(res) <= 40
    assert res.gamma_n == 4
    cov = pair_coverage(dense200, res.members)
    np.fill_diagonal(cov, 99)
    assert cov.min() >= 4
    # spot-check the vectorised count against the brute-force one
    rng = np.random.default_rng(0)
    for _ in range(30):
        u, v = (int(x) for x in rng.choice(200, size=2, replace=False))
        assert cov[u, v] == len(set(brute_common_out_in(dense200, u, v)) & set(res.members))


def test_beta_above_alpha_fails_fast(dense100):
    with pytest.raises(FamilyNotFound):
        build_reservoir(dense100, 0.05, 0.1, 0.1)


def test_degree_check():
    with pytest.raises(InvalidDegree):
        build_reservoir(gen_random_semidegree(60, 0.1, seed=1), 0.3, 0.05, 0.3)


def test_exclude_empty():
    res = Reservoir([1, 4, 7], 5)
    out = exclude(res, [])
    assert out.members == [1, 4, 7] and out.gamma_n == 5


def test_exclude_disjoint_keeps_gamma():
    out = exclude(Reservoir([1, 4, 7], 5), [2, 3])
    assert out.members == [1, 4, 7] and out.gamma_n == 5


def test_exclude_two_members(dense200):
    res = build_reservoir(dense200, 0.2, 0.02, 0.15, seed=2)
    before = pair_coverage(dense200, res.members)
    drop = res.members[:2]
    out = exclude(res, drop)
    assert out.gamma_n == res.gamma_n - 2
    after = pair_coverage(dense200, out.members)
    assert ((before - after) <= 2).all()
    keep = [v for v in range(200) if v not in drop]
    sub = after[np.ix_(keep, keep)]
    np.fill_diagonal(sub, 99)
    assert sub.min() >= out.gamma_n


def test_connect_through_exhausts():
    d = complete_digraph(8)
    res = Reservoir([5, 6, 7], 3)
    got = [connect_through(d, res, 0, 1) for _ in range(3)]
    assert sorted(got) == [5, 6, 7]
    with pytest.raises(ReservoirExhausted):
        connect_through(d, res, 0, 1)
    assert res.unused == []


def test_connect_through_needs_path():
    from spansub.digraph import Digraph

    d = Digraph(3, [(0, 2)])
    with pytest.raises(ReservoirExhausted):
        connect_through(d, Reservoir([2], 1), 0, 1)
    with pytest.raises(ValueError):
        connect_through(d, Reservoir([2], 1), 0, 0)


@pytest.mark.parametrize("seed", range(3))
def test_routing_stays_disjoint(seed, dense200):
    res = build_reservoir(dense200, 0.2, 0.04, 0.15, seed=seed)
    rng = np.random.default_rng(seed)
    outside = [v for v in range(200) if v not in res]
    used = set()
    for _ in range(res.gamma_n):
        u, v = (int(x) for x in rng.choice(outside, size=2, replace=False))
        z = connect_through(dense200, res, u, v)
        assert dense200.has_arc(u, z) and dense200.has_arc(z, v)
        assert z not in used
        used.add(z)
    assert math.isclose(len(res.unused) + len(used), len(res))
