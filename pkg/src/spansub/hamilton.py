"""Directed Hamiltonian cycles in dense digraphs.

The engine starts from a cycle factor (a successor permutation found by
bipartite matching) and merges its cycles with successor exchanges: for
``x`` and ``y`` on different cycles, the arcs ``x -> succ(y)`` and
``y -> succ(x)`` let us swap the two successors, which fuses the cycles.
When no exchange merges anything, a random exchange inside one cycle splits
it and the walk continues.  Small instances fall back to exact backtracking.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .digraph import Digraph, min_semi_degree
from .errors import HamiltonNotFound

EXACT_THRESHOLD = 20
DEFAULT_RESTARTS = 20


def is_hamiltonian_cycle(d: Digraph, cycle) -> bool:
    cycle = list(cycle)
    if len(cycle) != d.n or sorted(cycle) != list(range(d.n)) or d.n < 2:
        return False
    return all(d.has_arc(cycle[i], cycle[(i + 1) % d.n]) for i in range(d.n))


def is_hamiltonian_path(d: Digraph, path) -> bool:
    path = list(path)
    if len(path) != d.n or sorted(path) != list(range(d.n)):
        return False
    return all(d.has_arc(a, b) for a, b in zip(path, path[1:]))


def _cycle_factor(d: Digraph, rng: np.random.Generator) -> np.ndarray | None:
    """Random successor permutation using only arcs of ``d``, or None."""
    n = d.n
    perm = rng.permutation(n)
    shuffled = d.adj[np.ix_(perm, perm)]
    match = maximum_bipartite_matching(csr_matrix(shuffled), perm_type="column")
    if (match < 0).any():
        return None
    # match[i] is the column (successor) matched to row i, in shuffled labels
    succ = np.empty(n, dtype=np.intp)
    succ[perm] = perm[match]
    return succ


def _cycles_of(succ: np.ndarray) -> np.ndarray:
    """Cycle id of every vertex."""
    n = len(succ)
    label = np.full(n, -1, dtype=np.intp)
    c = 0
    for s in range(n):
        if label[s] >= 0:
            continue
        v = s
        while label[v] < 0:
            label[v] = c
            v = succ[v]
        c += 1
    return label


def _walk(succ: np.ndarray, start: int = 0) -> list[int]:
    out = [start]
    v = int(succ[start])
    while v != start:
        out.append(v)
        v = int(succ[v])
    return out


def _merge_once(adj: np.ndarray, succ: np.ndarray, label: np.ndarray, rng: np.random.Generator) -> bool:
    """Fuse the smallest cycle with another one by a successor exchange."""
    ids, sizes = np.unique(label, return_counts=True)
    order = ids[np.argsort(sizes, kind="stable")]
    into_succ = adj[:, succ]  # into_succ[x, y]: x -> succ(y)
    for c in order:
        xs = np.flatnonzero(label == c)
        outside = label != c
        for x in rng.permutation(xs):
            ok = into_succ[x] & adj[:, succ[x]] & outside
            ys = np.flatnonzero(ok)
            if len(ys):
                y = ys[rng.integers(len(ys))]
                succ[x], succ[y] = succ[y], succ[x]
                return True
    return False


def _perturb(adj: np.ndarray, succ: np.ndarray, label: np.ndarray, rng: np.random.Generator) -> bool:
    """Split a random cycle with an in-cycle exchange."""
    n = len(succ)
    for x in rng.permutation(n):
        same = label == label[x]
        ok = adj[x, succ] & adj[:, succ[x]] & same
        ok[x] = False
        ys = np.flatnonzero(ok)
        if len(ys):
            y = ys[rng.integers(len(ys))]
            succ[x], succ[y] = succ[y], succ[x]
            return True
    return False


def heuristic_cycle(d: Digraph, seed: int = 0, budget: int | None = None, restarts: int = DEFAULT_RESTARTS):
    """Cycle-factor patching with restarts; returns a cycle or None."""
    n = d.n
    if n < 2:
        return None
    budget = 50 * n * n if budget is None else budget
    adj = d.adj
    for attempt in range(restarts):
        rng = np.random.default_rng([seed, attempt])
        succ = _cycle_factor(d, rng)
        if succ is None:
            # no cycle factor at all, so no Hamiltonian cycle either
            return None
        steps = 0
        while steps < budget:
            label = _cycles_of(succ)
            if label.max() == 0:
                return _walk(succ)
            steps += 1
            if not _merge_once(adj, succ, label, rng) and not _perturb(adj, succ, label, rng):
                break
    return None


def exact_cycle(d: Digraph) -> list[int] | None:
    """Exhaustive search from vertex 0 with a memo of dead ``(visited, end)``
    states.  Exponential in the worst case; meant for ``n <= 20``."""
    n = d.n
    if n < 2:
        return None
    full = (1 << n) - 1
    outs = [d.out_bits(v) for v in range(n)]
    dead: set[tuple[int, int]] = set()
    path = [0]
    stack = [iter(_bits(outs[0] & ~1))]
    mask = 1
    while stack:
        v = path[-1]
        if mask == full:
            if outs[v] & 1:
                return list(path)
        nxt = next(stack[-1], None)
        if nxt is None or mask == full:
            dead.add((mask, v))
            stack.pop()
            path.pop()
            mask &= ~(1 << v)
            continue
        nmask = mask | (1 << nxt)
        if (nmask, nxt) in dead:
            continue
        path.append(nxt)
        mask = nmask
        stack.append(iter(_bits(outs[nxt] & ~mask)))
    return None


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def hamiltonian_cycle(
    d: Digraph,
    seed: int = 0,
    budget: int | None = None,
    restarts: int = DEFAULT_RESTARTS,
    exact_threshold: int = EXACT_THRESHOLD,
) -> list[int]:
    """Directed Hamiltonian cycle as a vertex sequence (closing arc implied).

    Intended for ``min_semi_degree(d) >= ceil(n/2)``; other inputs get a
    best-effort search and ``HamiltonNotFound`` on failure.
    """
    n = d.n
    if n < 2:
        raise HamiltonNotFound(f"no Hamiltonian cycle on {n} vertex(es)")
    cycle = heuristic_cycle(d, seed, budget, restarts)
    if cycle is None and n <= exact_threshold:
        cycle = exact_cycle(d)
    if cycle is None:
        need = math.ceil(n / 2)
        have = min_semi_degree(d)
        why = "budget exhausted" if have >= need else f"min semi-degree {have} < {need}"
        raise HamiltonNotFound(f"no Hamiltonian cycle found on {n} vertices ({why})")
    return cycle


def cycle_to_path(cycle: list[int]) -> list[int]:
    """Drop the lexicographically smallest arc of the cycle."""
    n = len(cycle)
    arcs = [(cycle[i], cycle[(i + 1) % n]) for i in range(n)]
    i = min(range(n), key=lambda j: arcs[j])
    return cycle[i + 1 :] + cycle[: i + 1]


def hamiltonian_path(d: Digraph, seed: int = 0, budget: int | None = None, **kwargs) -> list[int]:
    if d.n == 1:
        return [0]
    return cycle_to_path(hamiltonian_cycle(d, seed, budget, **kwargs))
