"""End-to-end construction of spanning subdivisions, their verification, and
an exhaustive oracle for tiny instances.

Pipeline of ``solve`` (each step on the original labels of ``D``):

1. an absorbing path ``A`` with endpoints ``w1, w2``;
2. a reservoir ``R`` inside ``D - V(A) + {w1, w2}``, minus ``w1, w2``;
3. branch vertices for ``H`` chosen at random among the remaining vertices;
4. a Hamiltonian path ``u1 ... u2`` through everything else;
5. the first arc ``x1 -> x2`` of ``H`` becomes the long route
   ``v1 z1 u1 ... u2 z2 w1 -A- w2 z3 v2``; every other arc ``xa -> xb`` is
   routed as ``va z vb`` with ``z`` from ``R``;
6. the unused reservoir vertices are absorbed into ``A``.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .absorber import absorb, build_absorbing_path
from .connector import Reservoir, build_reservoir, connect_through, exclude
from .digraph import Digraph, bidirect, induced, min_semi_degree, remove_add
from .errors import (
    InstanceTooLarge,
    InvalidPattern,
    PreconditionViolated,
    SolveFailed,
    SpanSubError,
)
from .hamilton import hamiltonian_path

log = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 12

Arc = tuple[int, int]


@dataclass
class SolverParams:
    """Solver constants.

    ``alpha`` caps the absorbing path at ``alpha n`` vertices, ``beta`` caps
    the reservoir at ``beta n`` vertices, ``gamma n`` is the per-pair
    reservoir coverage, and ``absorb_beta n`` is the number of free slots
    guaranteed to every vertex (``None`` means ``beta``).
    """

    epsilon: float = 0.15
    C: float = 50.0
    alpha: float = 0.45
    beta: float = 0.1
    gamma: float = 0.025
    absorb_beta: float | None = 0.05
    seed: int = 0
    retries: int = 10
    budget: int | None = None

    def __post_init__(self):
        if not 0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in (0, 1/2), got {self.epsilon}")
        if not 0 < self.gamma < self.beta < 1 or not 0 < self.alpha < 1:
            raise ValueError("need 0 < gamma < beta < 1 and 0 < alpha < 1")
        if self.absorb_beta is not None and not 0 < self.absorb_beta < 1:
            raise ValueError("absorb_beta must lie in (0, 1)")
        if self.retries < 1:
            raise ValueError("retries must be positive")

    @property
    def slot_beta(self) -> float:
        return self.beta if self.absorb_beta is None else self.absorb_beta


@dataclass
class SubdivisionCertificate:
    branch: dict[int, int]
    routes: dict[Arc, list[int]]

    def vertices(self) -> set[int]:
        out = set(self.branch.values())
        for r in self.routes.values():
            out.update(r)
        return out


@dataclass
class CertificateReport:
    ok: bool
    violation: str | None = None
    details: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class SolveStats:
    attempts: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)


# -- patterns --------------------------------------------------------------


def validate_pattern(h: Digraph) -> None:
    if h.num_arcs == 0:
        raise InvalidPattern("pattern has no arcs")
    isolated = [x for x in range(h.n) if h.out_degree(x) + h.in_degree(x) == 0]
    if isolated:
        raise InvalidPattern(f"pattern has isolated vertices {isolated[:5]}")
    if h.n > 2 * h.num_arcs:
        raise InvalidPattern(f"pattern has k = {h.n} > 2m = {2 * h.num_arcs}")


# -- verification ----------------------------------------------------------


def verify_certificate(d: Digraph, h: Digraph, cert: SubdivisionCertificate) -> CertificateReport:
    """Check a certificate from raw data.

    Violation classes, tested in this order: ``malformed``, ``branch``,
    ``endpoint``, ``arc``, ``disjoint``, ``spanning``.  The first class with
    any instance is reported together with all its instances.
    """
    try:
        return _verify(d, h, cert)
    except Exception as exc:  # malformed input must not escape as an exception
        return CertificateReport(False, "malformed", [f"unreadable certificate: {exc!r}"])


def _is_vertex(v, n: int) -> bool:
    return isinstance(v, (int, np.integer)) and not isinstance(v, bool) and 0 <= v < n


def _verify(d: Digraph, h: Digraph, cert: SubdivisionCertificate) -> CertificateReport:
    n = d.n
    branch, routes = cert.branch, cert.routes
    bad = []
    if set(branch) != set(range(h.n)):
        bad.append(f"branch map covers {sorted(branch)} instead of pattern vertices 0..{h.n - 1}")
    expected = set(h.arcs())
    if set(routes) != expected:
        missing = sorted(expected - set(routes))
        extra = sorted(set(routes) - expected)
        bad.append(f"routes missing {missing[:5]} / unexpected {extra[:5]}")
    for x, v in branch.items():
        if not _is_vertex(v, n):
            bad.append(f"branch({x}) = {v!r} is not a vertex of D")
    for arc, route in routes.items():
        if not isinstance(route, (list, tuple)) or len(route) < 2:
            bad.append(f"route {arc} is not a sequence of at least two vertices")
            continue
        for v in route:
            if not _is_vertex(v, n):
                bad.append(f"route {arc} has non-vertex {v!r}")
    if bad:
        return CertificateReport(False, "malformed", bad)

    images = list(branch.values())
    if len(set(images)) != len(images):
        seen: dict[int, int] = {}
        for x, v in sorted(branch.items()):
            if v in seen:
                bad.append(f"pattern vertices {seen[v]} and {x} share host vertex {v}")
            seen.setdefault(v, x)
        return CertificateReport(False, "branch", bad)

    for (a, b), route in sorted(routes.items()):
        if route[0] != branch[a] or route[-1] != branch[b]:
            bad.append(
                f"route {(a, b)} runs {route[0]} -> {route[-1]}, expected {branch[a]} -> {branch[b]}"
            )
    if bad:
        return CertificateReport(False, "endpoint", bad)

    for arc, route in sorted(routes.items()):
        for p, q in zip(route, route[1:]):
            if not d.has_arc(p, q):
                kind = "reversed arc" if d.has_arc(q, p) else "missing arc"
                bad.append(f"route {arc}: {kind} {p} -> {q}")
    if bad:
        return CertificateReport(False, "arc", bad)

    owner: dict[int, str] = {v: f"branch({x})" for x, v in branch.items()}
    for arc, route in sorted(routes.items()):
        for v in route[1:-1]:
            if v in owner:
                bad.append(f"vertex {v} internal to route {arc} also used by {owner[v]}")
            else:
                owner[v] = f"route {arc}"
    if bad:
        return CertificateReport(False, "disjoint", bad)

    missed = sorted(set(range(n)) - set(owner))
    if missed:
        return CertificateReport(False, "spanning", [f"{len(missed)} vertices uncovered: {missed[:10]}"])
    return CertificateReport(True)


# -- certificate text format -------------------------------------------------


def format_certificate(cert: SubdivisionCertificate, h: Digraph) -> str:
    lines = [f"{h.n} {h.num_arcs}"]
    lines.extend(f"branch {x} {cert.branch[x]}" for x in sorted(cert.branch))
    for (a, b) in sorted(cert.routes):
        lines.append(f"route {a} {b} : " + " ".join(map(str, cert.routes[(a, b)])))
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> SubdivisionCertificate:
    header = None
    branch: dict[int, int] = {}
    routes: dict[Arc, list[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if header is None:
                k, m = int(parts[0]), int(parts[1])
                if len(parts) != 2:
                    raise ValueError
                header = (k, m)
            elif parts[0] == "branch" and len(parts) == 3:
                branch[int(parts[1])] = int(parts[2])
            elif parts[0] == "route" and len(parts) >= 4 and parts[3] == ":":
                routes[(int(parts[1]), int(parts[2]))] = [int(p) for p in parts[4:]]
            else:
                raise ValueError
        except (ValueError, IndexError):
            raise ValueError(f"line {lineno}: cannot parse {raw!r}") from None
    if header is None:
        raise ValueError("empty certificate")
    k, m = header
    if len(branch) != k or len(routes) != m:
        raise ValueError(f"header declares {k} branch lines and {m} routes, got {len(branch)} and {len(routes)}")
    return SubdivisionCertificate(branch, routes)


# -- solver ------------------------------------------------------------------


class _StageFailure(Exception):
    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(message)


def _require_degree(g: Digraph, ratio: float, what: str, stage: str) -> None:
    need = math.ceil(ratio * g.n - 1e-9)
    have = min_semi_degree(g)
    if have < need:
        raise _StageFailure(stage, f"min semi-degree of {what} is {have} < ceil({ratio:.4f} * {g.n}) = {need}")


def check_preconditions(d: Digraph, h: Digraph, params: SolverParams) -> None:
    validate_pattern(h)
    n, m = d.n, h.num_arcs
    need = math.ceil((0.5 + params.epsilon) * n - 1e-9)
    have = min_semi_degree(d)
    if have < need:
        raise PreconditionViolated(f"min semi-degree {have} < ceil((1/2 + {params.epsilon}) * {n}) = {need}")
    if n < params.C * m:
        raise PreconditionViolated(f"n = {n} < C * m = {params.C} * {m}")


def _attempt(d: Digraph, h: Digraph, params: SolverParams, rng: np.random.Generator) -> SubdivisionCertificate:
    n, eps = d.n, params.epsilon
    seeds = [int(s) for s in rng.integers(0, 2**31, size=4)]

    stage = "absorber"
    try:
        path = build_absorbing_path(d, params.alpha, params.slot_beta, eps, seed=seeds[0])
    except SpanSubError as exc:
        raise _StageFailure(stage, str(exc)) from exc
    w1, w2 = path.endpoints

    stage = "reservoir"
    d1 = remove_add(d, path.vertices, [w1, w2])
    n1 = d1.graph.n
    _require_degree(d1.graph, 0.5 + eps / 2, "D1", stage)
    try:
        local = build_reservoir(
            d1.graph, params.beta * n / n1, params.gamma * n / n1, eps / 2, seed=seeds[1]
        )
    except SpanSubError as exc:
        raise _StageFailure(stage, str(exc)) from exc
    reservoir = exclude(Reservoir(d1.to_parent(local.members), local.gamma_n), (w1, w2))

    stage = "branch"
    d2 = remove_add(d, set(path.vertices) | set(reservoir.members))
    _require_degree(d2.graph, 0.5 + eps / 4, "D2", stage)
    if d2.graph.n < h.n + 2:
        raise _StageFailure(stage, f"D2 has only {d2.graph.n} vertices for {h.n} branch vertices")
    picks = rng.choice(d2.graph.n, size=h.n, replace=False)
    branch = {x: d2.labels[int(i)] for x, i in enumerate(picks)}
    d3 = induced(d, set(d2.labels) - set(branch.values()))
    _require_degree(d3.graph, 0.5, "D3", stage)

    stage = "hamilton"
    try:
        middle = d3.to_parent(hamiltonian_path(d3.graph, seed=seeds[2], budget=params.budget))
    except SpanSubError as exc:
        raise _StageFailure(stage, str(exc)) from exc

    stage = "routing"
    m = h.num_arcs
    if reservoir.gamma_n < m + 2:
        raise _StageFailure(stage, f"reservoir coverage {reservoir.gamma_n} < m + 2 = {m + 2}")
    arcs = sorted(h.arcs())
    x1, x2 = arcs[0]
    v1, v2 = branch[x1], branch[x2]
    try:
        z1 = connect_through(d, reservoir, v1, middle[0])
        z2 = connect_through(d, reservoir, middle[-1], w1)
        z3 = connect_through(d, reservoir, w2, v2)
        short = {(a, b): [branch[a], connect_through(d, reservoir, branch[a], branch[b]), branch[b]] for a, b in arcs[1:]}
    except SpanSubError as exc:
        raise _StageFailure(stage, str(exc)) from exc

    stage = "absorption"
    try:
        through_a = absorb(d, path, reservoir.unused)
    except SpanSubError as exc:
        raise _StageFailure(stage, str(exc)) from exc

    routes = {(x1, x2): [v1, z1, *middle, z2, *through_a, z3, v2], **short}
    cert = SubdivisionCertificate(branch, routes)
    report = verify_certificate(d, h, cert)
    if not report.ok:
        raise _StageFailure("verify", f"{report.violation}: {report.details[:3]}")
    return cert


def solve(d: Digraph, h: Digraph, params: SolverParams | None = None, stats: SolveStats | None = None) -> SubdivisionCertificate:
    """Spanning subdivision of ``h`` in ``d``.

    Raises ``PreconditionViolated`` (or ``InvalidPattern``) on bad input and
    ``SolveFailed`` when every retry fails; the last failing stage is named.
    Hosts with at most ``BRUTE_FORCE_LIMIT`` vertices that miss the degree or
    size hypotheses are handed to ``brute_force_subdivision``, so the answer
    there is exact (``SolveFailed`` at stage ``"exhaustive"`` means none exists).
    """
    params = params or SolverParams()
    stats = stats if stats is not None else SolveStats()
    try:
        check_preconditions(d, h, params)
    except PreconditionViolated as exc:
        if d.n > BRUTE_FORCE_LIMIT:
            raise
        # tiny hosts outside the guarantee are decided exactly instead
        stats.attempts = 1
        cert = brute_force_subdivision(d, h)
        if cert is None:
            raise SolveFailed("exhaustive", [f"{exc}; exhaustive search found no spanning subdivision"]) from exc
        return cert
    diagnostics = []
    stage = "absorber"
    for attempt in range(params.retries):
        stats.attempts = attempt + 1
        rng = np.random.default_rng([params.seed, attempt])
        try:
            return _attempt(d, h, params, rng)
        except _StageFailure as exc:
            stage = exc.stage
            diagnostics.append(f"attempt {attempt}: {exc.stage}: {exc}")
            stats.failures.append((exc.stage, str(exc)))
            log.debug("attempt %d failed at %s: %s", attempt, exc.stage, exc)
    raise SolveFailed(stage, diagnostics)


def solve_undirected(
    n: int, edges, k: int, pattern_edges, params: SolverParams | None = None
) -> SubdivisionCertificate:
    """Bidirect host and pattern, then ``solve``; ``C`` applies to the arc
    count of the bidirected pattern."""
    h = bidirect(k, pattern_edges)
    validate_pattern(h)
    return solve(bidirect(n, edges), h, params)


# -- exhaustive oracle -------------------------------------------------------


def brute_force_subdivision(d: Digraph, h: Digraph) -> SubdivisionCertificate | None:
    """Exact search over branch maps and route systems (``n <= 12``)."""
    n, k = d.n, h.n
    if n > BRUTE_FORCE_LIMIT:
        raise InstanceTooLarge(f"n = {n} exceeds the exhaustive limit {BRUTE_FORCE_LIMIT}")
    validate_pattern(h)
    if k > n:
        return None
    arcs = sorted(h.arcs())
    full = (1 << n) - 1
    outs = [d.out_bits(v) for v in range(n)]

    for images in itertools.permutations(range(n), k):
        branch_bits = 0
        for v in images:
            branch_bits |= 1 << v
        ends = [(images[a], images[b]) for a, b in arcs]
        if any(not _reachable(outs, s, t, branch_bits) for s, t in ends):
            continue
        found = _route_all(outs, ends, branch_bits, full)
        if found is not None:
            branch = dict(enumerate(images))
            return SubdivisionCertificate(branch, dict(zip(arcs, found)))
    return None


def _reachable(outs: list[int], s: int, t: int, blocked: int) -> bool:
    """Is there a path ``s -> ... -> t`` whose interior avoids ``blocked``?"""
    if outs[s] >> t & 1:
        return True
    seen = outs[s] & ~blocked
    frontier = seen
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            v = low.bit_length() - 1
            f ^= low
            if outs[v] >> t & 1:
                return True
            nxt |= outs[v]
        frontier = nxt & ~blocked & ~seen
        seen |= frontier
    return False


def _route_all(outs: list[int], ends: list[Arc], branch_bits: int, full: int) -> list[list[int]] | None:
    """Route every ``(s, t)`` in order through unused non-branch vertices so
    that the final system covers ``full``; memoises dead states."""
    m = len(ends)
    dead: set[tuple[int, int, int]] = set()
    routes = [[s] for s, _ in ends]

    def extend(i: int, cur: int, used: int) -> bool:
        key = (i, cur, used)
        if key in dead:
            return False
        target = ends[i][1]
        if outs[cur] >> target & 1:
            routes[i].append(target)
            if i + 1 == m:
                if used == full:
                    return True
            elif extend(i + 1, ends[i + 1][0], used):
                return True
            routes[i].pop()
        free = outs[cur] & ~used
        while free:
            low = free & -free
            free ^= low
            routes[i].append(low.bit_length() - 1)
            if extend(i, low.bit_length() - 1, used | low):
                return True
            routes[i].pop()
        dead.add(key)
        return False

    return routes if extend(0, ends[0][0], branch_bits) else None
