"""Absorbing paths.

An absorbing path strings together disjoint gadgets ``(v_i, w_i)`` with
linking vertices: ``v1 w1 x1 v2 w2 x2 ... v_l w_l``.  Any vertex ``u`` with
``v_i -> u -> w_i`` can later be spliced into slot ``i`` in place of the arc
``v_i -> w_i`` without moving the endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .digraph import Digraph, bits_to_list, min_semi_degree
from .errors import AbsorptionFailed, FamilyNotFound, InvalidDegree, LinkageFailed
from .tuples import TupleSystem, ceil_frac, select_family


class GoodTupleSystem(TupleSystem):
    """``X = Y = V(D)``, ``t = 2``; ``(v, w)`` is good for ``u`` when
    ``v -> u``, ``u -> w`` and ``v -> w`` are all arcs."""

    def __init__(self, d: Digraph, density: float):
        self.graph = d
        super().__init__(list(range(d.n)), d.n, 2, density)

    def member(self, u: int, z) -> bool:
        v, w = z
        g = self.graph
        return v != w and g.has_arc(v, u) and g.has_arc(u, w) and g.has_arc(v, w)

    def incidence_matrix(self, tuples):
        if not tuples:
            return np.zeros((0, self.n), dtype=bool)
        z = np.asarray(tuples, dtype=np.intp)
        vs, ws = z[:, 0], z[:, 1]
        adj = self.graph.adj
        ok = adj[vs, ws] & (vs != ws)
        return adj[vs, :] & adj[:, ws].T & ok[:, None]

    def incidence(self, z):
        return self.incidence_matrix([z])[0]

    def coverage_counts(self):
        a = self.graph.adj.astype(np.int64)
        # sum_v a[v,u] * #{w : v->w, u->w}
        return (a * (a @ a.T)).sum(axis=0)


def good_tuples_for(d: Digraph, u: int) -> set[tuple[int, int]]:
    found = set()
    outs = d.out_bits(u)
    for v in d.in_neighbors(u):
        for w in bits_to_list(d.out_bits(v) & outs):
            found.add((v, w))
    return found


@dataclass
class AbsorbingPath:
    vertices: list[int]
    slots: list[tuple[int, int]]
    free_slots: set[int] = field(default_factory=set)
    capacity: int = 0

    @property
    def endpoints(self) -> tuple[int, int]:
        return self.vertices[0], self.vertices[-1]

    def compatible_slots(self, d: Digraph, u: int) -> list[int]:
        return [i for i in sorted(self.free_slots) if d.has_arc(self.slots[i][0], u) and d.has_arc(u, self.slots[i][1])]


def link_gadgets(d: Digraph, gadgets: list[tuple[int, int]]) -> list[int]:
    """Join consecutive gadgets through the smallest unused common neighbour."""
    taken = 0
    for v, w in gadgets:
        taken |= (1 << v) | (1 << w)
    seq = [gadgets[0][0], gadgets[0][1]]
    for (_, w), (v_next, w_next) in zip(gadgets, gadgets[1:]):
        cands = d.out_bits(w) & d.in_bits(v_next) & ~taken
        if not cands:
            raise LinkageFailed(f"no free vertex links {w} -> {v_next}")
        x = (cands & -cands).bit_length() - 1
        taken |= 1 << x
        seq.extend((x, v_next, w_next))
    return seq


def build_absorbing_path(
    d: Digraph,
    alpha: float,
    beta: float,
    epsilon: float,
    seed: int = 0,
    max_retries: int = 20,
) -> AbsorbingPath:
    """Absorbing path on at most ``alpha n`` vertices in which every vertex has
    at least ``ceil(beta n)`` compatible slots."""
    n = d.n
    required = math.ceil((0.5 + epsilon) * n - 1e-9)
    have = min_semi_degree(d)
    if have < required:
        raise InvalidDegree(f"min semi-degree {have} < ceil((1/2 + {epsilon}) * {n}) = {required}")
    system = GoodTupleSystem(d, 4 * epsilon**2)
    # t = 2, so a cap of (alpha/3) n tuples is (2 alpha / 3) / t
    family_alpha = 2 * alpha / 3
    last: Exception | None = None
    for attempt in range(max_retries):
        family = select_family(
            system, family_alpha, beta, seed=seed * 7919 + attempt, max_retries=max_retries, validate=attempt == 0
        )
        try:
            seq = link_gadgets(d, family)
        except LinkageFailed as exc:
            last = exc
            continue
        return AbsorbingPath(seq, list(family), set(range(len(family))), ceil_frac(beta * n))
    raise last if last is not None else FamilyNotFound("absorbing path construction failed")


def _match(options: dict[int, list[int]]) -> dict[int, int]:
    """Greedy most-constrained-first assignment, repaired with augmenting paths."""
    order = sorted(options, key=lambda u: (len(options[u]), u))
    owner: dict[int, int] = {}
    assign: dict[int, int] = {}
    for u in order:
        for s in options[u]:
            if s not in owner:
                owner[s] = u
                assign[u] = s
                break

    def augment(u: int, seen: set[int]) -> bool:
        for s in options[u]:
            if s in seen:
                continue
            seen.add(s)
            if s not in owner or augment(owner[s], seen):
                owner[s] = u
                assign[u] = s
                return True
        return False

    for u in order:
        if u not in assign and not augment(u, set()):
            raise AbsorptionFailed(f"vertex {u} has no free slot (compatible: {len(options[u])})")
    return assign


def absorb(d: Digraph, path: AbsorbingPath, leftover: Iterable[int]) -> list[int]:
    """Splice every leftover vertex into its own free slot.

    Returns the new vertex sequence (same endpoints) and records it on
    ``path``; consumed slots leave ``path.free_slots``.
    """
    leftover = sorted(set(leftover))
    on_path = set(path.vertices)
    clash = [u for u in leftover if u in on_path]
    if clash:
        raise AbsorptionFailed(f"vertices {clash[:5]} already lie on the absorbing path")
    if not leftover:
        return list(path.vertices)
    options = {u: path.compatible_slots(d, u) for u in leftover}
    assign = _match(options)
    by_slot_v = {path.slots[s][0]: u for u, s in assign.items()}
    seq = []
    for v in path.vertices:
        seq.append(v)
        if v in by_slot_v:
            seq.append(by_slot_v[v])
    path.vertices = seq
    path.free_slots -= set(assign.values())
    return list(seq)
