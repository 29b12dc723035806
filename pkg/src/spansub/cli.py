"""Command line interface.

Exit codes: 0 success, 1 usage or I/O error, 2 solver failure or rejected
certificate, 3 violated solver precondition.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import logging
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import fields

from .assembler import (
    SolverParams,
    SolveStats,
    format_certificate,
    parse_certificate,
    solve,
    verify_certificate,
)
from .digraph import format_digraph, min_semi_degree, read_digraph
from .errors import InvalidPattern, PreconditionViolated, SolveFailed, SpanSubError
from .instances import gen_extremal, gen_random_pattern, gen_random_semidegree

EXIT_OK, EXIT_USAGE, EXIT_FAILED, EXIT_PRECONDITION = 0, 1, 2, 3

BENCH_HEADER = ["n", "epsilon", "m", "seed", "success", "stage_failed", "wall_ms", "retries_used"]

log = logging.getLogger("spansub")


class _Parser(argparse.ArgumentParser):
    # exit status 2 is reserved for solver failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    defaults = SolverParams()
    p.add_argument("--epsilon", type=float, default=defaults.epsilon)
    p.add_argument("--C", type=float, default=defaults.C)
    p.add_argument("--alpha", type=float, default=defaults.alpha)
    p.add_argument("--beta", type=float, default=defaults.beta)
    p.add_argument("--gamma", type=float, default=defaults.gamma)
    p.add_argument("--absorb-beta", type=float, default=defaults.absorb_beta)
    p.add_argument("--seed", type=int, default=defaults.seed)
    p.add_argument("--retries", type=int, default=defaults.retries)
    p.add_argument("--budget", type=int, default=defaults.budget)


def _params_from(args) -> SolverParams:
    return SolverParams(
        epsilon=args.epsilon,
        C=args.C,
        alpha=args.alpha,
        beta=args.beta,
        gamma=args.gamma,
        absorb_beta=args.absorb_beta,
        seed=args.seed,
        retries=args.retries,
        budget=args.budget,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spansub", description="Spanning subdivisions in dense digraphs.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate a host digraph or a pattern")
    gen.add_argument("kind", choices=["random", "extremal", "pattern"])
    gen.add_argument("--n", type=int)
    gen.add_argument("--m", type=int)
    gen.add_argument("--k", type=int)
    gen.add_argument("--epsilon", type=float)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--out", required=True, help="output file")

    sol = sub.add_parser("solve", help="find a spanning subdivision")
    sol.add_argument("digraph")
    sol.add_argument("pattern")
    sol.add_argument("-o", "--out", required=True, help="certificate output file")
    _add_solver_flags(sol)

    ver = sub.add_parser("verify", help="check a certificate")
    ver.add_argument("digraph")
    ver.add_argument("pattern")
    ver.add_argument("certificate")

    bench = sub.add_parser("bench", help="sweep a parameter grid into a CSV")
    bench.add_argument("config")
    bench.add_argument("-o", "--out", required=True)
    bench.add_argument("--jobs", type=int, default=1)
    return parser


# -- gen ---------------------------------------------------------------------


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise ValueError(f"{args.kind} needs {' '.join(missing)}")


def cmd_gen(args) -> int:
    if args.kind == "random":
        _need(args, "n", "epsilon")
        g = gen_random_semidegree(args.n, args.epsilon, args.seed)
        note = f"random n={args.n} epsilon={args.epsilon} seed={args.seed}"
        bound = f">={math.ceil((0.5 + args.epsilon) * args.n - 1e-9)}"
    elif args.kind == "extremal":
        _need(args, "n", "m", "k")
        g = gen_extremal(args.n, args.m, args.k)
        note = f"extremal n={args.n} m={args.m} k={args.k}"
        bound = f"={args.n // 2 - (args.m + args.k)}"
    else:
        _need(args, "m")
        g = gen_random_pattern(args.m, args.seed)
        note = f"pattern m={args.m} seed={args.seed}"
        bound = ""
    _write(args.out, format_digraph(g, note))
    print(f"n={g.n} arcs={g.num_arcs} delta0={min_semi_degree(g)}{bound}", file=sys.stderr)
    return EXIT_OK


def _write(path: str, text: str) -> None:
    with open(path, "w") as fh:
        fh.write(text)


# -- solve / verify --------------------------------------------------------------


def cmd_solve(args) -> int:
    d = read_digraph(args.digraph)
    h = read_digraph(args.pattern)
    params = _params_from(args)
    stats = SolveStats()
    start = time.perf_counter()
    try:
        cert = solve(d, h, params, stats)
    except (PreconditionViolated, InvalidPattern) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except SolveFailed as exc:
        print(f"solve failed at stage {exc.stage}", file=sys.stderr)
        for line in exc.diagnostics:
            print(f"  {line}", file=sys.stderr)
        return EXIT_FAILED
    report = verify_certificate(d, h, cert)
    if not report.ok:
        print(f"internal error: certificate rejected ({report.violation})", file=sys.stderr)
        return EXIT_FAILED
    with open(args.out, "w") as fh:
        fh.write(format_certificate(cert, h))
    ms = (time.perf_counter() - start) * 1000
    print(f"solved n={d.n} m={h.num_arcs} attempts={stats.attempts} wall_ms={ms:.0f}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    d = read_digraph(args.digraph)
    h = read_digraph(args.pattern)
    with open(args.certificate) as fh:
        text = fh.read()
    try:
        cert = parse_certificate(text)
    except ValueError as exc:
        print(f"rejected: malformed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    report = verify_certificate(d, h, cert)
    if report.ok:
        print("accepted", file=sys.stderr)
        return EXIT_OK
    print(f"rejected: {report.violation}", file=sys.stderr)
    for line in report.details:
        print(f"  {line}", file=sys.stderr)
    return EXIT_FAILED


# -- bench -------------------------------------------------------------------


_SOLVER_KEYS = {f.name for f in fields(SolverParams)} - {"seed", "epsilon"}


def _parse_values(raw: str) -> list[str]:
    out = []
    for part in raw.replace(",", " ").split():
        if "-" in part[1:] and part.replace("-", "").isdigit():
            lo, hi = part.split("-")
            out.extend(str(i) for i in range(int(lo), int(hi) + 1))
        else:
            out.append(part)
    return out


def parse_grid(text: str) -> dict[str, list[str]]:
    """Flat ``key = v1, v2, ...`` lines; integer ranges like ``0-19`` expand."""
    grid: dict[str, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = values, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in {"n", "epsilon", "m", "seed", "seeds"} | _SOLVER_KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        grid["seed" if key == "seeds" else key] = _parse_values(value)
    return grid


def grid_cells(grid: dict[str, list[str]]) -> list[dict]:
    if not grid or any(not v for v in grid.values()):
        return []
    for key in ("n", "epsilon", "m", "seed"):
        if key not in grid:
            raise ValueError(f"grid needs key {key!r}")
    keys = sorted(grid)
    cells = []
    for combo in itertools.product(*(grid[k] for k in keys)):
        cell = dict(zip(keys, combo))
        typed = {"n": int(cell["n"]), "epsilon": float(cell["epsilon"]), "m": int(cell["m"]), "seed": int(cell["seed"])}
        for k in keys:
            if k in _SOLVER_KEYS:
                typed[k] = int(cell[k]) if k in ("retries", "budget") else float(cell[k])
        cells.append(typed)
    cells.sort(key=lambda c: (c["n"], c["epsilon"], c["m"], c["seed"]))
    return cells


def run_cell(cell: dict) -> list:
    extra = {k: v for k, v in cell.items() if k in _SOLVER_KEYS}
    start = time.perf_counter()
    stats = SolveStats()
    stage = ""
    success = False
    try:
        params = SolverParams(epsilon=cell["epsilon"], seed=cell["seed"], **extra)
        d = gen_random_semidegree(cell["n"], cell["epsilon"], cell["seed"])
        h = gen_random_pattern(cell["m"], cell["seed"])
        cert = solve(d, h, params, stats)
        success = verify_certificate(d, h, cert).ok
        stage = "" if success else "verify"
    except (PreconditionViolated, InvalidPattern):
        stage = "precondition"
    except SolveFailed as exc:
        stage = exc.stage
    except (SpanSubError, ValueError) as exc:
        stage = type(exc).__name__
    ms = (time.perf_counter() - start) * 1000
    return [cell["n"], cell["epsilon"], cell["m"], cell["seed"], int(success), stage, round(ms, 1), max(stats.attempts - 1, 0)]


def cmd_bench(args) -> int:
    with open(args.config) as fh:
        cells = grid_cells(parse_grid(fh.read()))
    if args.jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(run_cell, cells))
    else:
        rows = [run_cell(c) for c in cells]
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(BENCH_HEADER)
        writer.writerows(rows)
    print(f"{len(rows)} cells, {sum(r[4] for r in rows)} solved", file=sys.stderr)
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "solve": cmd_solve, "verify": cmd_verify, "bench": cmd_bench}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (OSError, ValueError, SpanSubError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
