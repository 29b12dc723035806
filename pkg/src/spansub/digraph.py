"""Dense simple digraphs on vertices ``0..n-1``.

Adjacency is kept three ways: a boolean numpy matrix for vectorised counting,
per-vertex sorted neighbour tuples for iteration, and python-int bitsets for
fast set intersection (``common_out_in`` is a single ``&``).
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np


class Digraph:
    """Immutable simple digraph (no loops, no parallel arcs)."""

    __slots__ = ("n", "adj", "_out", "_in", "_out_bits", "_in_bits", "_arc_count")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError(f"vertex count must be non-negative, got {n}")
        adj = np.zeros((n, n), dtype=bool)
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if adj[u, v]:
                raise ValueError(f"duplicate arc ({u}, {v})")
            adj[u, v] = True
        self._setup(adj)

    @classmethod
    def from_adjacency(cls, adj) -> "Digraph":
        """Build from a square 0/1 matrix; the diagonal must be zero."""
        mat = np.array(adj, dtype=bool)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if mat.diagonal().any():
            raise ValueError("adjacency matrix has loops")
        g = cls.__new__(cls)
        g._setup(mat)
        return g

    def _setup(self, adj: np.ndarray) -> None:
        adj = adj.copy()
        adj.setflags(write=False)
        self.adj = adj
        self.n = adj.shape[0]
        self._out = tuple(tuple(np.flatnonzero(adj[u]).tolist()) for u in range(self.n))
        self._in = tuple(tuple(np.flatnonzero(adj[:, v]).tolist()) for v in range(self.n))
        self._out_bits = tuple(_to_bits(s) for s in self._out)
        self._in_bits = tuple(_to_bits(s) for s in self._in)
        self._arc_count = int(adj.sum())

    # -- basic queries -----------------------------------------------------

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, arcs={self._arc_count})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.adj, other.adj))

    def __hash__(self) -> int:
        return hash((self.n, self.adj.tobytes()))

    @property
    def num_arcs(self) -> int:
        return self._arc_count

    def vertices(self) -> range:
        return range(self.n)

    def arcs(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self._out[u]:
                yield (u, v)

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.adj[u, v])

    def out_neighbors(self, u: int) -> tuple[int, ...]:
        return self._out[u]

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        return self._in[v]

    def out_bits(self, u: int) -> int:
        return self._out_bits[u]

    def in_bits(self, v: int) -> int:
        return self._in_bits[v]

    def out_degree(self, u: int) -> int:
        return len(self._out[u])

    def in_degree(self, v: int) -> int:
        return len(self._in[v])

    def semi_degrees(self) -> np.ndarray:
        """Per-vertex ``min(d+, d-)``."""
        return np.minimum(self.adj.sum(axis=1), self.adj.sum(axis=0))


def _to_bits(vertices: Iterable[int]) -> int:
    bits = 0
    for v in vertices:
        bits |= 1 << v
    return bits


def bits_to_list(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


# -- primitives ------------------------------------------------------------


def min_semi_degree(d: Digraph) -> int:
    if d.n == 0:
        return 0
    return int(d.semi_degrees().min())


def common_out_in(d: Digraph, u: int, v: int) -> list[int]:
    """Vertices ``w`` with arcs ``u->w`` and ``w->v``, ascending."""
    if u == v:
        raise ValueError("common_out_in needs distinct vertices")
    return bits_to_list(d.out_bits(u) & d.in_bits(v))


def common_out_in_counts(d: Digraph) -> np.ndarray:
    """Matrix of ``|common_out_in(u, v)|``; the diagonal is meaningless."""
    a = d.adj.astype(np.int32)
    return a @ a


def arcs_between(d: Digraph, xs: Iterable[int], ys: Iterable[int]) -> set[tuple[int, int]]:
    ymask = _to_bits(ys)
    found = set()
    for u in set(xs):
        for v in bits_to_list(d.out_bits(u) & ymask):
            found.add((u, v))
    return found


class Subgraph:
    """An induced subdigraph together with its labels in the parent."""

    __slots__ = ("graph", "labels", "index")

    def __init__(self, graph: Digraph, labels: Sequence[int]):
        self.graph = graph
        self.labels = tuple(labels)
        self.index = {v: i for i, v in enumerate(self.labels)}

    def to_parent(self, vertices: Iterable[int]) -> list[int]:
        return [self.labels[i] for i in vertices]

    def from_parent(self, vertices: Iterable[int]) -> list[int]:
        return [self.index[v] for v in vertices]

    def __repr__(self) -> str:
        return f"Subgraph({self.graph!r})"


def induced(d: Digraph, keep: Iterable[int]) -> Subgraph:
    labels = sorted(set(keep))
    for v in labels:
        if not 0 <= v < d.n:
            raise ValueError(f"vertex {v} not in digraph")
    idx = np.array(labels, dtype=np.intp)
    return Subgraph(Digraph.from_adjacency(d.adj[np.ix_(idx, idx)]), labels)


def remove_add(d: Digraph, remove: Iterable[int], add: Iterable[int] = ()) -> Subgraph:
    """Induced subdigraph on ``(V \\ remove) | add``, relabelled ``0..n'-1``.

    Vertex order is preserved, so ``labels`` maps new ids to old ones.
    """
    add = set(add)
    for v in add:
        if not 0 <= v < d.n:
            raise ValueError(f"vertex {v} not in digraph")
    keep = (set(range(d.n)) - set(remove)) | add
    return induced(d, keep)


def bidirect(n: int, edges: Iterable[tuple[int, int]]) -> Digraph:
    """Digraph with both orientations of every undirected edge."""
    arcs = set()
    for u, v in edges:
        if u == v:
            raise ValueError(f"loop at vertex {u}")
        arcs.add((u, v))
        arcs.add((v, u))
    return Digraph(n, arcs)


def complete_digraph(n: int) -> Digraph:
    return Digraph.from_adjacency(~np.eye(n, dtype=bool))


def directed_cycle(n: int) -> Digraph:
    return Digraph(n, [(i, (i + 1) % n) for i in range(n)])


# -- text format -----------------------------------------------------------


def parse_digraph(text: str) -> Digraph:
    """Parse ``n a`` followed by ``a`` lines ``u v``; ``#`` starts a comment line."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected two integers, got {raw!r}")
        try:
            rows.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ValueError(f"line {lineno}: expected two integers, got {raw!r}") from None
    if not rows:
        raise ValueError("empty digraph file")
    (n, a), arcs = rows[0], rows[1:]
    if len(arcs) != a:
        raise ValueError(f"header declares {a} arcs but {len(arcs)} were given")
    return Digraph(n, arcs)


def format_digraph(d: Digraph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"{d.n} {d.num_arcs}")
    lines.extend(f"{u} {v}" for u, v in d.arcs())
    return "\n".join(lines) + "\n"


def read_digraph(path) -> Digraph:
    with open(path) as fh:
        return parse_digraph(fh.read())


def write_digraph(d: Digraph, path, comment: str | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(format_digraph(d, comment))
