"""Reservoir of connecting vertices.

A reservoir ``R`` is a small vertex set such that every ordered pair of
distinct vertices has at least ``gamma_n`` common out/in-neighbours inside
``R``; pairs are then joined by a two-arc path ``u -> z -> v`` with a fresh
``z`` from ``R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .digraph import Digraph, bits_to_list, min_semi_degree
from .errors import InvalidDegree, ReservoirExhausted
from .tuples import TupleSystem, ceil_frac, select_family


class ConnectorSystem(TupleSystem):
    """``X`` = ordered pairs of distinct vertices, ``t = 1``,
    ``(u, v) ~ (w,)`` iff ``u -> w -> v``."""

    def __init__(self, d: Digraph, density: float):
        self.graph = d
        n = d.n
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        super().__init__(pairs, n, 1, density)
        self._us = np.array([p[0] for p in pairs], dtype=np.intp)
        self._vs = np.array([p[1] for p in pairs], dtype=np.intp)

    def member(self, i: int, z) -> bool:
        (w,) = z
        u, v = self.xs[i]
        return self.graph.has_arc(u, w) and self.graph.has_arc(w, v)

    def incidence_matrix(self, tuples):
        ws = np.array([z[0] for z in tuples], dtype=np.intp)
        adj = self.graph.adj
        if len(ws) == 0:
            return np.zeros((0, len(self.xs)), dtype=bool)
        # row w: adj[u, w] & adj[w, v] over all pairs (u, v)
        return adj[self._us][:, ws].T & adj[ws][:, self._vs]

    def incidence(self, z):
        return self.incidence_matrix([z])[0]

    def coverage_counts(self):
        a = self.graph.adj.astype(np.int32)
        return (a @ a)[self._us, self._vs]


@dataclass
class Reservoir:
    members: list[int]
    gamma_n: int
    used: set[int] = field(default_factory=set)

    @property
    def unused(self) -> list[int]:
        return [z for z in self.members if z not in self.used]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, v: int) -> bool:
        return v in self._member_set

    @property
    def _member_set(self) -> set[int]:
        return set(self.members)


def build_reservoir(
    d: Digraph,
    alpha: float,
    beta: float,
    epsilon: float,
    seed: int = 0,
    max_retries: int = 20,
) -> Reservoir:
    """Reservoir with ``|R| <= alpha n`` and per-pair coverage ``>= ceil(beta n)``."""
    n = d.n
    required = math.ceil((0.5 + epsilon) * n - 1e-9)
    have = min_semi_degree(d)
    if have < required:
        raise InvalidDegree(f"min semi-degree {have} < ceil((1/2 + {epsilon}) * {n}) = {required}")
    system = ConnectorSystem(d, 2 * epsilon)
    family = select_family(system, alpha, beta, seed=seed, max_retries=max_retries)
    return Reservoir(sorted(z[0] for z in family), ceil_frac(beta * n))


def exclude(reservoir: Reservoir, vertices: Iterable[int]) -> Reservoir:
    """Drop ``vertices`` from the reservoir; coverage falls by the number
    actually removed."""
    drop = set(vertices) & set(reservoir.members)
    return Reservoir(
        [z for z in reservoir.members if z not in drop],
        reservoir.gamma_n - len(drop),
        set(reservoir.used) - drop,
    )


def connect_through(d: Digraph, reservoir: Reservoir, u: int, v: int) -> int:
    """Smallest unused ``z`` in the reservoir with ``u -> z -> v``; marks it used."""
    if u == v:
        raise ValueError("connect_through needs distinct endpoints")
    free = 0
    for z in reservoir.members:
        if z not in reservoir.used:
            free |= 1 << z
    cands = bits_to_list(d.out_bits(u) & d.in_bits(v) & free)
    if not cands:
        raise ReservoirExhausted(f"no unused reservoir vertex joins {u} -> {v}")
    z = cands[0]
    reservoir.used.add(z)
    return z


def pair_coverage(d: Digraph, members: Sequence[int]) -> np.ndarray:
    """Matrix of ``|common_out_in(u, v) & members|`` (diagonal zeroed)."""
    a = d.adj.astype(np.int32)
    idx = np.asarray(sorted(members), dtype=np.intp)
    cov = a[:, idx] @ a[idx, :]
    np.fill_diagonal(cov, 0)
    return cov
