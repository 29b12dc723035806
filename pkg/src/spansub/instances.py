"""Instance generators: dense random digraphs, the bipartite extremal family,
and random pattern digraphs."""

from __future__ import annotations

import math

import numpy as np

from .digraph import Digraph
from .errors import InfeasibleDensity, InvalidSizes

DEFAULT_MARGIN = 0.05


def gen_min_semidegree(n: int, min_degree: int, p: float, seed: int) -> Digraph:
    """Random digraph with arc probability ``p``, patched up to ``min_degree``.

    Every vertex short of out-arcs (in-arcs) receives uniformly random missing
    out-arcs (in-arcs) until it reaches ``min_degree``.
    """
    if min_degree > n - 1:
        raise InfeasibleDensity(f"semi-degree {min_degree} impossible on {n} vertices")
    rng = np.random.default_rng(seed)
    adj = rng.random((n, n)) < p
    np.fill_diagonal(adj, False)
    for v in range(n):
        missing = min_degree - int(adj[v].sum())
        if missing > 0:
            cand = np.flatnonzero(~adj[v])
            cand = cand[cand != v]
            adj[v, rng.choice(cand, size=missing, replace=False)] = True
    for v in range(n):
        missing = min_degree - int(adj[:, v].sum())
        if missing > 0:
            cand = np.flatnonzero(~adj[:, v])
            cand = cand[cand != v]
            adj[rng.choice(cand, size=missing, replace=False), v] = True
    return Digraph.from_adjacency(adj)


def gen_random_semidegree(n: int, epsilon: float, seed: int, margin: float = DEFAULT_MARGIN) -> Digraph:
    """Random digraph with ``min_semi_degree >= ceil((1/2 + epsilon) n)``."""
    if n < 4:
        raise InvalidSizes("need n >= 4")
    if not 0 < epsilon < 0.5:
        raise InvalidSizes("need 0 < epsilon < 1/2")
    p = 0.5 + epsilon + margin
    if p > 1 + 1e-12:
        raise InfeasibleDensity(f"arc probability {p:.3f} exceeds 1")
    target = math.ceil((0.5 + epsilon) * n - 1e-9)
    return gen_min_semidegree(n, target, min(p, 1.0), seed)


def extremal_sides(n: int, m: int, k: int) -> tuple[range, range]:
    a = n // 2 - (m + k)
    if a <= 0:
        raise InvalidSizes(f"floor(n/2) = {n // 2} must exceed m + k = {m + k}")
    return range(a), range(a, n)


def gen_extremal(n: int, m: int, k: int) -> Digraph:
    """Bidirected complete bipartite digraph with a short side of
    ``floor(n/2) - (m + k)`` vertices (the first ids)."""
    side_a, side_b = extremal_sides(n, m, k)
    adj = np.zeros((n, n), dtype=bool)
    adj[np.ix_(side_a, side_b)] = True
    adj[np.ix_(side_b, side_a)] = True
    return Digraph.from_adjacency(adj)


def gen_random_pattern(m: int, seed: int) -> Digraph:
    """Simple digraph with exactly ``m`` arcs and no isolated vertices."""
    if m < 1:
        raise InvalidSizes("pattern needs at least one arc")
    rng = np.random.default_rng(seed)
    smallest = 2
    while smallest * (smallest - 1) < m:
        smallest += 1
    pool = int(rng.integers(smallest, max(smallest, 2 * m) + 1))
    pairs = [(u, v) for u in range(pool) for v in range(pool) if u != v]
    chosen = [pairs[i] for i in rng.choice(len(pairs), size=m, replace=False)]
    touched = sorted({x for arc in chosen for x in arc})
    relabel = {v: i for i, v in enumerate(touched)}
    return Digraph(len(touched), sorted((relabel[u], relabel[v]) for u, v in chosen))


def single_arc() -> Digraph:
    return Digraph(2, [(0, 1)])


def two_cycle() -> Digraph:
    return Digraph(2, [(0, 1), (1, 0)])


def transitive_triangle() -> Digraph:
    return Digraph(3, [(0, 1), (1, 2), (0, 2)])
