"""Slow, obviously-correct reference implementations used only by tests.

None of these share code with the library paths they check.
"""

import itertools


def arcs_of(d):
    return {(u, v) for u in range(d.n) for v in range(d.n) if d.adj[u, v]}


def brute_common_out_in(d, u, v):
    arcs = arcs_of(d)
    return sorted(w for w in range(d.n) if (u, w) in arcs and (w, v) in arcs)


def brute_good_tuple_count(d, u):
    arcs = arcs_of(d)
    return sum(
        1
        for v in range(d.n)
        for w in range(d.n)
        if v != w and (v, u) in arcs and (u, w) in arcs and (v, w) in arcs
    )


def brute_min_semi_degree(d):
    arcs = arcs_of(d)
    if d.n == 0:
        return 0
    return min(
        min(sum((v, w) in arcs for w in range(d.n)), sum((w, v) in arcs for w in range(d.n)))
        for v in range(d.n)
    )


def backtrack_hamiltonian_cycle(d):
    """Plain DFS from vertex 0, no memo."""
    n = d.n
    if n < 2:
        return None
    arcs = arcs_of(d)
    path = [0]
    on = {0}

    def go():
        if len(path) == n:
            return (path[-1], 0) in arcs
        for w in range(n):
            if w not in on and (path[-1], w) in arcs:
                path.append(w)
                on.add(w)
                if go():
                    return True
                path.pop()
                on.discard(w)
        return False

    return list(path) if go() else None


def recount_family(system, family):
    """Coverage per x by direct membership calls."""
    return [sum(system.member(i, z) for z in family) for i in range(len(system.xs))]


def simple_certificate_ok(d, h, branch, routes):
    """Independent yes/no check of a spanning subdivision."""
    arcs = arcs_of(d)
    if sorted(branch) != list(range(h.n)) or len(set(branch.values())) != h.n:
        return False
    if set(routes) != {(a, b) for a in range(h.n) for b in range(h.n) if h.adj[a, b]}:
        return False
    inner = []
    for (a, b), r in routes.items():
        if len(r) < 2 or r[0] != branch[a] or r[-1] != branch[b]:
            return False
        if any((p, q) not in arcs for p, q in zip(r, r[1:])):
            return False
        inner.extend(r[1:-1])
    everything = inner + list(branch.values())
    return len(everything) == len(set(everything)) == d.n


def all_injections(n, k):
    return itertools.permutations(range(n), k)
