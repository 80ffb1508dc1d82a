"""Executable algebraic laws of the cycle calculus.

The harness runs the ring and functoriality identities over a corpus of
cycles and maps on a deterministic schedule: commutativity,
associativity and bilinearity of the stable intersection, pull-back
multiplicativity, the projection formula, push/pull functoriality,
support containment and balancedness of every computed output.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .calculus import IntegralAffineMap, compose, pull_back, push_forward, stable_intersect
from .cycles import TropicalCycle, UnbalancedCycleError


@dataclass
class LawReport:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, passed: bool, witness):
        self.checks += 1
        if not passed:
            self.failures.append(witness)


DEFAULT_LIMITS = {
    "commutativity": 60,
    "associativity": 20,
    "bilinearity": 20,
    "pullback_multiplicativity": 10,
    "projection_formula": 10,
    "push_functoriality": 15,
    "pull_functoriality": 8,
}


def run_laws(cycles, maps, seq: int = 0, limits: dict | None = None) -> list[LawReport]:
    limits = {**DEFAULT_LIMITS, **(limits or {})}
    balance = LawReport("balancedness")
    support = LawReport("support_containment")

    def product(a, b):
        out = stable_intersect(a, b, seq=seq)
        balance.record(out.is_balanced()[0], (a, b))
        return out

    reports = [
        _commutativity(cycles, product, support, limits["commutativity"]),
        _associativity(cycles, product, limits["associativity"]),
        _bilinearity(cycles, product, limits["bilinearity"]),
        _pullback_multiplicativity(cycles, maps, balance, seq, limits["pullback_multiplicativity"]),
        _projection_formula(cycles, maps, balance, seq, limits["projection_formula"]),
        _push_functoriality(cycles, maps, balance, support, limits["push_functoriality"]),
        _pull_functoriality(cycles, maps, balance, support, seq, limits["pull_functoriality"]),
        support,
        balance,
    ]
    return reports


def _support_contains(product: TropicalCycle, operands) -> bool:
    supports = [op.support() for op in operands]
    for cell, _ in product.nonzero_cells():
        pt = cell.relative_interior_point()
        if not all(s.contains_point(pt) for s in supports):
            return False
    return True


def _intersect_pairs(cycles):
    by_rank: dict[int, list[TropicalCycle]] = {}
    for c in cycles:
        by_rank.setdefault(c.ambient_rank, []).append(c)
    for group in by_rank.values():
        for a, b in zip(group, group[1:]):
            if a.codimension + b.codimension <= a.ambient_rank:
                yield a, b


def _commutativity(cycles, product, support: LawReport, limit: int) -> LawReport:
    report = LawReport("commutativity")
    for a, b in _intersect_pairs(cycles):
        if report.checks >= limit:
            break
        ab = product(a, b)
        ba = product(b, a)
        report.record(ab.equals(ba), (a, b))
        support.record(_support_contains(ab, (a, b)), (a, b))
    return report


def _associativity(cycles, product, limit: int) -> LawReport:
    report = LawReport("associativity")
    by_rank: dict[int, list[TropicalCycle]] = {}
    for c in cycles:
        by_rank.setdefault(c.ambient_rank, []).append(c)
    for group in by_rank.values():
        for a, b, c in zip(group, group[1:], group[2:]):
            if report.checks >= limit:
                break
            if a.codimension + b.codimension + c.codimension > a.ambient_rank:
                continue
            lhs = product(product(a, b), c)
            rhs = product(a, product(b, c))
            report.record(lhs.equals(rhs), (a, b, c))
    return report


def _bilinearity(cycles, product, limit: int) -> LawReport:
    report = LawReport("bilinearity")
    by_shape: dict[tuple[int, int], list[TropicalCycle]] = {}
    for c in cycles:
        if not c.is_zero():
            by_shape.setdefault((c.ambient_rank, c.dimension), []).append(c)
    for (rank, dim), group in sorted(by_shape.items()):
        others = [c for c in cycles if c.ambient_rank == rank]
        for a, b in zip(group, group[1:]):
            if report.checks >= limit:
                return report
            partner = next(
                (c for c in others if c.codimension + a.codimension <= rank and c is not a and c is not b),
                None,
            )
            if partner is None:
                continue
            lhs = product(a.add(b), partner)
            rhs = product(a, partner).add(product(b, partner))
            report.record(lhs.equals(rhs), (a, b, partner))
    return report


def _pullback_multiplicativity(cycles, maps, balance, seq, limit: int) -> LawReport:
    report = LawReport("pullback_multiplicativity")
    for f in maps:
        if report.checks >= limit:
            break
        targets = [c for c in cycles if c.ambient_rank == f.target_rank]
        pair = next(
            (
                (a, b)
                for a, b in zip(targets, targets[1:])
                if a.codimension + b.codimension <= min(f.source_rank, f.target_rank)
            ),
            None,
        )
        if pair is None:
            continue
        a, b = pair
        lhs = pull_back(f, stable_intersect(a, b, seq=seq), seq=seq)
        rhs = stable_intersect(pull_back(f, a, seq=seq), pull_back(f, b, seq=seq), seq=seq)
        balance.record(lhs.is_balanced()[0], (f, a, b))
        balance.record(rhs.is_balanced()[0], (f, a, b))
        report.record(lhs.equals(rhs), (f, a, b))
    return report


def _projection_formula(cycles, maps, balance, seq, limit: int) -> LawReport:
    report = LawReport("projection_formula")
    for f in maps:
        if report.checks >= limit:
            break
        sources = [c for c in cycles if c.ambient_rank == f.source_rank]
        targets = [c for c in cycles if c.ambient_rank == f.target_rank]
        usable = next(
            (
                (c, cp)
                for c in sources
                for cp in targets
                if cp.codimension + c.codimension <= f.source_rank
                and cp.codimension + (f.target_rank - c.dimension) <= f.target_rank
            ),
            None,
        )
        if usable is None:
            continue
        c, cp = usable
        pulled = pull_back(f, cp, seq=seq)
        lhs = push_forward(f, stable_intersect(pulled, c, seq=seq))
        rhs = stable_intersect(cp, push_forward(f, c), seq=seq)
        balance.record(lhs.is_balanced()[0], (f, c, cp))
        balance.record(rhs.is_balanced()[0], (f, c, cp))
        report.record(lhs.equals(rhs), (f, c, cp))
    return report


def _composable(maps):
    for f in maps:
        for g in maps:
            if g.source_rank == f.target_rank:
                yield g, f  # g after f


def _push_functoriality(cycles, maps, balance, support, limit: int) -> LawReport:
    report = LawReport("push_functoriality")
    for g, f in _composable(maps):
        if report.checks >= limit:
            break
        cycle = next((c for c in cycles if c.ambient_rank == f.source_rank), None)
        if cycle is None:
            continue
        step = push_forward(f, cycle)
        lhs = push_forward(g, step)
        rhs = push_forward(compose(g, f), cycle)
        balance.record(lhs.is_balanced()[0], (g, f, cycle))
        report.record(lhs.equals(rhs), (g, f, cycle))
        support.record(_push_support_contained(f, cycle, step), (f, cycle))
    return report


def _push_support_contained(f: IntegralAffineMap, cycle, pushed) -> bool:
    images = [
        cell.image(f.matrix, f.translation) for cell, _ in cycle.nonzero_cells()
    ]
    for cell, _ in pushed.nonzero_cells():
        pt = cell.relative_interior_point()
        if not any(img.contains_point(pt) for img in images):
            return False
    return True


def _pull_functoriality(cycles, maps, balance, support, seq, limit: int) -> LawReport:
    report = LawReport("pull_functoriality")
    for g, f in _composable(maps):
        if report.checks >= limit:
            break
        cycle = next(
            (
                c
                for c in cycles
                if c.ambient_rank == g.target_rank and c.codimension <= min(f.source_rank, g.source_rank)
            ),
            None,
        )
        if cycle is None:
            continue
        step = pull_back(g, cycle, seq=seq)
        lhs = pull_back(f, step, seq=seq)
        rhs = pull_back(compose(g, f), cycle, seq=seq)
        balance.record(lhs.is_balanced()[0], (g, f, cycle))
        report.record(lhs.equals(rhs), (g, f, cycle))
        support.record(_pull_support_contained(g, cycle, step), (g, cycle))
    return report


def _pull_support_contained(f: IntegralAffineMap, cycle, pulled) -> bool:
    sup = cycle.support()
    for cell, _ in pulled.nonzero_cells():
        pt = cell.relative_interior_point()
        if not sup.contains_point(f.apply_point(pt)):
            return False
    return True
