"""Command-line surface.

Subcommands for every cycle operation plus a law-checking runner and an
SVG plotter.  Exit codes: 0 success / property holds, 1 mathematical
failure (unbalanced input, law violation, rank mismatch), 2 malformed
input.  All output is deterministic.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .calculus import pull_back, push_forward, stable_intersect
from .complexes import NotAComplexError
from .cycles import TropicalCycle, UnbalancedCycleError
from .documents import (
    DocumentError,
    parse_cycle,
    parse_map,
    serialize_cycle,
)
from .laws import run_laws
from .polyhedron import Polyhedron
from .svg import render_cycle_svg


class CommandError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message
        super().__init__(message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CommandError(2, f"cannot read {path}: {exc.strerror}") from exc


def _load_cycle(path: str, validate: bool = True) -> TropicalCycle:
    text = _read(path)
    try:
        return parse_cycle(text, validate=validate)
    except DocumentError as exc:
        raise CommandError(2, f"{path}: {exc}") from exc
    except NotAComplexError as exc:
        raise CommandError(2, f"{path}: not a complex: {_describe(exc.cell_a)} vs {_describe(exc.cell_b)}") from exc
    except UnbalancedCycleError as exc:
        raise CommandError(1, f"{path}: {exc}") from exc


def _load_map(path: str):
    text = _read(path)
    try:
        return parse_map(text)
    except DocumentError as exc:
        raise CommandError(2, f"{path}: {exc}") from exc


def _write_out(path: str, text: str):
    Path(path).write_text(text, encoding="utf-8")


def _describe(cell: Polyhedron) -> str:
    bits = [f"V{[tuple(map(str, v)) for v in cell.vertices]}"]
    if cell.rays:
        bits.append(f"R{[list(r) for r in cell.rays]}")
    if cell.lineality:
        bits.append(f"L{[list(l) for l in cell.lineality]}")
    return " ".join(bits)


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args) -> int:
    cycle = _load_cycle(args.cycle, validate=False)
    ok, failures = cycle.is_balanced()
    if ok:
        print("balanced")
        return 0
    for tau, total in failures:
        print(f"unbalanced at {_describe(tau)}: sum = {tuple(map(str, total))}")
    return 1


def _print_trace(trace):
    for entry in trace:
        cell = entry["cell"]
        print(f"# cell {_describe(cell)}: weight {entry['weight']}")
        if "vector" in entry:
            print(f"#   displacement vector {entry['vector']}")
        for term in entry["terms"]:
            a, b, coeff, *rest = term
            ws = " * ".join(str(x) for x in rest)
            print(f"#   [{_describe(a)}] x [{_describe(b)}]: index {coeff} * {ws}")


def cmd_intersect(args) -> int:
    a = _load_cycle(args.a)
    b = _load_cycle(args.b)
    if a.ambient_rank != b.ambient_rank:
        raise CommandError(1, "rank mismatch")
    trace = [] if args.verbose else None
    product = stable_intersect(a, b, seq=args.seed_sequence, trace=trace)
    if trace is not None:
        _print_trace(trace)
    _write_out(args.out, serialize_cycle(product))
    print(f"codim {product.codimension} total weight {product.total_weight()}")
    return 0


def cmd_push(args) -> int:
    f = _load_map(args.map)
    cycle = _load_cycle(args.cycle)
    if f.source_rank != cycle.ambient_rank:
        raise CommandError(1, "rank mismatch")
    result = push_forward(f, cycle)
    _write_out(args.out, serialize_cycle(result))
    print(f"dim {result.dimension} total weight {result.total_weight()}")
    return 0


def cmd_pull(args) -> int:
    f = _load_map(args.map)
    cycle = _load_cycle(args.cycle)
    if f.target_rank != cycle.ambient_rank:
        raise CommandError(1, "rank mismatch")
    trace = [] if args.verbose else None
    result = pull_back(f, cycle, seq=args.seed_sequence, trace=trace)
    if trace is not None:
        _print_trace(trace)
    _write_out(args.out, serialize_cycle(result))
    if result.is_zero() and not cycle.is_zero() and f.matrix.rank() < f.target_rank:
        print("note: linear part is not surjective; every displacement coefficient vanished")
    print(f"codim {result.codimension} total weight {result.total_weight()}")
    return 0


def cmd_add(args) -> int:
    a = _load_cycle(args.a)
    b = _load_cycle(args.b)
    if a.ambient_rank != b.ambient_rank:
        raise CommandError(1, "rank mismatch")
    try:
        result = a.add(b)
    except ValueError as exc:
        raise CommandError(1, str(exc)) from exc
    _write_out(args.out, serialize_cycle(result))
    print(f"dim {result.dimension} total weight {result.total_weight()}")
    return 0


def cmd_eq(args) -> int:
    a = _load_cycle(args.a)
    b = _load_cycle(args.b)
    if a.ambient_rank != b.ambient_rank:
        raise CommandError(1, "rank mismatch")
    if a.equals(b):
        print("equal")
        return 0
    print("not equal")
    return 1


def cmd_star(args) -> int:
    cycle = _load_cycle(args.cycle)
    try:
        spec = json.loads(args.cell)
    except json.JSONDecodeError as exc:
        raise CommandError(2, f"cell spec: {exc.msg}") from exc
    doc = json.loads(_read(args.cycle))
    try:
        tau = Polyhedron.from_generators(
            vertices=[_rat_tuple(doc["points"][i]) for i in spec.get("point_indices", [])],
            rays=[tuple(doc["rays"][i]) for i in spec.get("ray_indices", [])],
            lineality=[tuple(doc["lineality"][i]) for i in spec.get("lineality_indices", [])],
            ambient_rank=cycle.ambient_rank,
        )
    except (IndexError, KeyError, TypeError, ValueError) as exc:
        raise CommandError(2, f"cell spec: {exc}") from exc
    if not cycle.complex.contains_cell(tau):
        raise CommandError(1, f"cell not in the complex: {_describe(tau)}")
    result = cycle.star(tau)
    _write_out(args.out, serialize_cycle(result))
    print(f"star in rank {result.ambient_rank}, {len(result.weights)} cells")
    return 0


def _rat_tuple(coords):
    from fractions import Fraction

    return tuple(Fraction(c) for c in coords)


def cmd_laws(args) -> int:
    text = _read(args.manifest)
    try:
        manifest = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CommandError(2, f"{args.manifest}: line {exc.lineno}: {exc.msg}") from exc
    base = Path(args.manifest).parent
    cycles = [_load_cycle(str(base / p)) for p in manifest.get("cycles", [])]
    maps = [_load_map(str(base / p)) for p in manifest.get("maps", [])]
    reports = run_laws(cycles, maps, seq=args.seed_sequence)
    width = max((len(r.name) for r in reports), default=10)
    failed = False
    for report in reports:
        status = "pass" if report.ok else "FAIL"
        print(f"{report.name:<{width}}  checks {report.checks:4d}  {status}")
        if not report.ok:
            failed = True
    if failed:
        print()
        for report in reports:
            for witness in report.failures:
                print(f"counterexample for {report.name}:")
                for item in witness:
                    if isinstance(item, TropicalCycle):
                        print(serialize_cycle(item), end="")
                    else:
                        print(f"  {item!r}")
        return 1
    return 0


def cmd_plot(args) -> int:
    cycle = _load_cycle(args.cycle)
    if cycle.ambient_rank != 2:
        raise CommandError(1, "plot supports rank 2 only")
    _write_out(args.out, render_cycle_svg(cycle))
    print(f"wrote {args.out}")
    return 0


# ---------------------------------------------------------------------------
# wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tropint",
        description="Exact tropical intersection theory: stable intersection, "
        "push-forward and pull-back of tropical cycles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        return p

    p = add("check", cmd_check, "verify the balancing condition")
    p.add_argument("cycle")

    p = add("intersect", cmd_intersect, "stable intersection of two cycles")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--out", required=True)
    p.add_argument("--verbose", action="store_true")
    p.add_argument("--seed-sequence", type=int, default=0)

    p = add("push", cmd_push, "push a cycle forward along an affine map")
    p.add_argument("map")
    p.add_argument("cycle")
    p.add_argument("--out", required=True)

    p = add("pull", cmd_pull, "pull a cycle back along an affine map")
    p.add_argument("map")
    p.add_argument("cycle")
    p.add_argument("--out", required=True)
    p.add_argument("--verbose", action="store_true")
    p.add_argument("--seed-sequence", type=int, default=0)

    p = add("add", cmd_add, "sum of two cycles")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--out", required=True)

    p = add("eq", cmd_eq, "equality of cycles up to refinement")
    p.add_argument("a")
    p.add_argument("b")

    p = add("star", cmd_star, "star of a cycle at a cell")
    p.add_argument("cycle")
    p.add_argument("cell", help="JSON cell spec with generator index lists")
    p.add_argument("--out", required=True)

    p = add("laws", cmd_laws, "run the algebraic law suite over a manifest")
    p.add_argument("manifest")
    p.add_argument("--seed-sequence", type=int, default=0)

    p = add("plot", cmd_plot, "render a rank-2 cycle as SVG")
    p.add_argument("cycle")
    p.add_argument("--out", required=True)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CommandError as exc:
        print(exc.message, file=sys.stderr)
        return exc.code
    except UnbalancedCycleError as exc:
        print(str(exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
