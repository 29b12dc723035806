"""Tuple systems and selection of small disjoint families with high coverage.

A tuple system relates an index set ``X`` to ordered ``t``-tuples over a
ground set ``Y = range(n)``.  ``select_family`` picks a pairwise disjoint
family of at most ``(alpha/t) n`` tuples such that every ``x`` is related to
at least ``ceil(beta n)`` of them.  Selection is construct-then-verify: a
random seed family is completed greedily and the result is re-checked from
scratch; failures are retried with fresh randomness.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

import numpy as np

from .errors import FamilyNotFound, InvalidSystem

Tuple = tuple[int, ...]

# Below this many candidate tuples the greedy phase scans all of them.
FULL_POOL_LIMIT = 5_000


def ceil_frac(x: float) -> int:
    """``ceil`` that ignores float noise like ``0.02 * 300 = 6.000000000000001``."""
    return math.ceil(x - 1e-9)


def floor_frac(x: float) -> int:
    return math.floor(x + 1e-9)


class TupleSystem:
    """Relation between ``xs`` and ordered ``t``-tuples over ``range(n)``.

    Subclasses may override ``incidence_matrix`` and ``coverage_counts``
    with vectorised versions; the defaults only use ``member``.
    """

    def __init__(
        self,
        xs: Sequence[Hashable],
        n: int,
        t: int,
        d: float,
        member: Callable[[int, Tuple], bool] | None = None,
    ):
        if t < 1:
            raise ValueError("tuple arity must be at least 1")
        if len(xs) > n * n:
            raise ValueError(f"|X| = {len(xs)} exceeds n^2 = {n * n}")
        self.xs = list(xs)
        self.n = n
        self.t = t
        self.d = d
        self._member = member

    def member(self, i: int, z: Tuple) -> bool:
        """Is tuple ``z`` related to ``xs[i]``?"""
        if self._member is None:
            raise NotImplementedError
        return bool(self._member(i, z))

    def incidence(self, z: Tuple) -> np.ndarray:
        return np.fromiter((self.member(i, z) for i in range(len(self.xs))), dtype=bool, count=len(self.xs))

    def incidence_matrix(self, tuples: Sequence[Tuple]) -> np.ndarray:
        """Boolean ``(len(tuples), |X|)`` matrix."""
        if not tuples:
            return np.zeros((0, len(self.xs)), dtype=bool)
        return np.stack([self.incidence(z) for z in tuples])

    def coverage_counts(self) -> np.ndarray:
        """Number of related tuples in ``Y^t`` per ``x``."""
        counts = np.zeros(len(self.xs), dtype=np.int64)
        for z in itertools.product(range(self.n), repeat=self.t):
            counts += self.incidence(z)
        return counts

    def threshold(self) -> float:
        return self.d * self.n**self.t


@dataclass
class SystemReport:
    ok: bool
    threshold: float
    deficient: dict[int, int] = field(default_factory=dict)


def verify_tuple_system(system: TupleSystem) -> SystemReport:
    """Check that every ``x`` has at least ``d n^t`` related tuples."""
    if system.t > 3:
        raise ValueError(f"refusing to enumerate {system.n}^{system.t} tuples (t > 3)")
    counts = system.coverage_counts()
    need = system.threshold()
    bad = np.flatnonzero(counts < need - 1e-9)
    return SystemReport(not len(bad), need, {int(i): int(counts[i]) for i in bad})


@dataclass
class FamilyReport:
    ok: bool
    violations: list[str] = field(default_factory=list)
    min_coverage: int = 0
    coverage: np.ndarray | None = None


def check_family(system: TupleSystem, family: Sequence[Tuple], alpha: float, beta: float) -> FamilyReport:
    """Re-derive disjointness, the size cap and per-``x`` coverage from scratch."""
    violations = []
    seen: dict[int, int] = {}
    for j, z in enumerate(family):
        if len(z) != system.t:
            violations.append(f"tuple {j} {z} has arity {len(z)}, expected {system.t}")
        for y in z:
            if not 0 <= y < system.n:
                violations.append(f"tuple {j} {z} has entry {y} outside Y")
            if y in seen:
                violations.append(f"entry {y} shared by tuples {seen[y]} and {j}")
            seen.setdefault(y, j)
        if len(set(z)) != len(z):
            violations.append(f"tuple {j} {z} repeats an entry")

    cap = floor_frac(alpha / system.t * system.n)
    if len(family) > cap:
        violations.append(f"family size {len(family)} exceeds cap {cap}")

    need = ceil_frac(beta * system.n)
    coverage = np.zeros(len(system.xs), dtype=np.int64)
    if family and not violations:
        coverage = system.incidence_matrix(list(family)).sum(axis=0)
    elif family:
        # malformed tuples may not be evaluable; count only the sane ones
        sane = [z for z in family if len(z) == system.t and all(0 <= y < system.n for y in z)]
        if sane:
            coverage = system.incidence_matrix(sane).sum(axis=0)
    low = np.flatnonzero(coverage < need)
    if len(low):
        sample = ", ".join(f"{system.xs[i]}:{coverage[i]}" for i in low[:5])
        violations.append(f"{len(low)} elements below coverage {need} (e.g. {sample})")
    min_cov = int(coverage.min()) if len(coverage) else 0
    return FamilyReport(not violations, violations, min_cov, coverage)


def _draw_tuple(rng: np.random.Generator, n: int, t: int) -> Tuple:
    return tuple(int(y) for y in rng.choice(n, size=t, replace=False))


def _random_phase(system: TupleSystem, alpha: float, rng: np.random.Generator, cap: int) -> list[Tuple]:
    """Draw about ``alpha n / 2t`` random tuples, keep a disjoint subfamily."""
    n, t = system.n, system.t
    draws = min(cap, ceil_frac(alpha * n / (2 * t)))
    seen: set[Tuple] = set()
    sampled = []
    attempts = 0
    while len(sampled) < draws and attempts < 20 * draws + 100:
        attempts += 1
        z = _draw_tuple(rng, n, t)
        if z in seen:
            continue
        seen.add(z)
        sampled.append(z)
    if not sampled:
        return []
    useful = system.incidence_matrix(sampled).any(axis=1)
    kept, used = [], set()
    for z, ok in zip(sampled, useful):
        if ok and used.isdisjoint(z):
            kept.append(z)
            used.update(z)
    return kept


def _candidate_pool(system: TupleSystem, rng: np.random.Generator, limit: int) -> list[Tuple]:
    n, t = system.n, system.t
    total = math.perm(n, t)
    if total <= limit:
        pool = list(itertools.permutations(range(n), t))
        order = rng.permutation(len(pool))
        return [pool[i] for i in order]
    found: dict[Tuple, None] = {}
    while len(found) < limit:
        draws = rng.integers(0, n, size=(2 * limit, t))
        if t > 1:
            srt = np.sort(draws, axis=1)
            draws = draws[(srt[:, 1:] != srt[:, :-1]).all(axis=1)]
        for row in draws.tolist():
            found.setdefault(tuple(row))
            if len(found) == limit:
                break
    return list(found)


def _optimise(
    system: TupleSystem,
    family: list[Tuple],
    cap: int,
    rng: np.random.Generator,
    pool_limit: int,
    swap_rounds: int,
) -> list[Tuple]:
    """Greedily fill ``family`` up to ``cap`` disjoint tuples, then improve it
    by single swaps.

    Both phases minimise ``sum_x 2^-(cov_x - min cov)``, a soft version of the
    minimum coverage, so the result does not depend on any coverage target.
    """
    t = system.t
    members = set(family)
    pool = list(family) + [z for z in _candidate_pool(system, rng, pool_limit) if z not in members]
    inc = system.incidence_matrix(pool).astype(np.float32)
    entries = np.array(pool, dtype=np.int64).reshape(len(pool), t)
    useful = inc.any(axis=1)
    jitter = 1.0 + rng.random(len(pool)).astype(np.float32) * 1e-4
    chosen = list(range(len(family)))
    coverage = inc[chosen].sum(axis=0) if chosen else np.zeros(inc.shape[1], dtype=np.float32)

    def blocked_by(rows: list[int]) -> np.ndarray:
        if not rows:
            return np.zeros(len(pool), dtype=bool)
        return np.isin(entries, entries[rows].ravel()).any(axis=1)

    def weights() -> np.ndarray:
        return np.exp2(-(coverage - coverage.min())).astype(np.float32)

    alive = useful & ~blocked_by(chosen)
    while len(chosen) < cap and alive.any():
        score = np.where(alive, (inc @ weights()) * jitter, -1.0)
        best = int(np.argmax(score))
        if score[best] <= 0:
            break
        chosen.append(best)
        coverage += inc[best]
        alive &= ~np.isin(entries, entries[best]).any(axis=1)

    inc_t = np.ascontiguousarray(inc.T)
    for _ in range(swap_rounds):
        if not chosen:
            break
        w = weights()
        total = float(w.sum())
        fw = inc[chosen] @ w
        cw = inc @ w
        overlap = (inc[chosen] * w) @ inc_t
        # change of the objective when tuple f leaves and candidate c joins
        delta = (fw[:, None] - 0.5 * cw[None, :] - 0.5 * overlap) * jitter[None, :]
        blocked = ~useful
        blocked[chosen] = True
        delta[:, blocked] = np.inf
        if t > 1:
            # a candidate may only share entries with the tuple it replaces
            owner = np.full(system.n, -1, dtype=np.intp)
            for a, f in enumerate(chosen):
                owner[entries[f]] = a
            held = owner[entries]
            top = held.max(axis=1)
            low = np.where(held >= 0, held, len(chosen)).min(axis=1)
            owned = top >= 0
            delta[:, owned & (low != top)] = np.inf
            wrong = (np.arange(len(chosen))[:, None] != top[None, :]) & owned[None, :]
            delta[wrong] = np.inf
        a, c = np.unravel_index(int(np.argmin(delta)), delta.shape)
        if not delta[a, c] < -1e-6 * total:
            break
        f = chosen[a]
        chosen[a] = int(c)
        coverage += inc[c] - inc[f]
    return [pool[i] for i in chosen]


def select_family(
    system: TupleSystem,
    alpha: float,
    beta: float,
    seed: int = 0,
    max_retries: int = 20,
    pool_limit: int = FULL_POOL_LIMIT,
    swap_rounds: int = 200,
    validate: bool = True,
) -> list[Tuple]:
    """Pick a disjoint family with at most ``(alpha/t) n`` tuples covering every
    ``x`` at least ``ceil(beta n)`` times.

    Raises ``FamilyNotFound`` when the coverage target is impossible under the
    size cap or when ``max_retries`` attempts all fail verification, and
    ``InvalidSystem`` if ``validate`` is set and the system is below density.
    """
    n, t = system.n, system.t
    need = ceil_frac(beta * n)
    cap = floor_frac(alpha / t * n)
    if need > cap:
        raise FamilyNotFound(f"coverage {need} cannot be met by at most {cap} tuples")
    if cap * t > n:
        cap = n // t
    if validate:
        report = verify_tuple_system(system)
        if not report.ok:
            raise InvalidSystem(
                f"{len(report.deficient)} elements have fewer than {report.threshold:.1f} related tuples"
            )

    best_min = -1
    for attempt in range(max_retries):
        rng = np.random.default_rng([seed, attempt])
        family = _random_phase(system, alpha, rng, cap)
        family = _optimise(system, family, cap, rng, pool_limit, swap_rounds)
        report = check_family(system, family, alpha, beta)
        if report.ok:
            return family
        best_min = max(best_min, report.min_coverage)
    raise FamilyNotFound(
        f"no family with coverage {need} after {max_retries} attempts (best minimum coverage {best_min})"
    )
