"""Charts, transition maps, weight laws, and cocycle checks.

A chart is a variable table plus its local bracket table.  A transition map
rewrites source-chart variables as polynomials in destination-chart
variables; transporting a bracket entry is substitution.  A weight law
asserts that a destination entry equals the transport of the source entry
scaled by a declared factor, the factor being written in source-chart
variables so it rides through the same substitution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .graded_ring import GradedPoly, ParityMismatch, VarTable, substitute
from .poisson import SuperBivector


class UnresolvedPair(KeyError):
    """A weight law names a variable pair a chart does not carry."""


class NonComposableCycle(ValueError):
    """Chained transition maps whose endpoints do not meet."""


class Chart:
    """Named coordinate patch with its local commutation table."""

    __slots__ = ("name", "table", "bivector")

    def __init__(self, name: str, table: VarTable, brackets):
        self.name = name
        self.table = table
        if isinstance(brackets, SuperBivector):
            if brackets.table != table:
                raise ValueError("bracket table built over a different variable table")
            self.bivector = brackets
        else:
            self.bivector = SuperBivector(table, brackets)

    def entry(self, a: str, b: str) -> GradedPoly:
        return self.bivector.entry(a, b)

    def __repr__(self) -> str:
        return f"Chart({self.name!r})"


class TransitionMap:
    """Rewrites source-chart variables in destination-chart variables.

    Variables without a rule are carried over by name.
    """

    __slots__ = ("src", "dst", "rules")

    def __init__(self, src: Chart, dst: Chart, rules: Mapping[str, GradedPoly]):
        for name, value in rules.items():
            src.table.index(name)
            if value.table != dst.table:
                raise ValueError(f"rule for {name!r} is not over the destination table")
            vp = value.parity()
            if not value.is_zero() and vp != src.table.parity(name):
                raise ParityMismatch(f"rule for {name!r} changes parity")
        self.src = src
        self.dst = dst
        self.rules = dict(rules)

    def apply(self, p: GradedPoly) -> GradedPoly:
        if p.table != self.src.table:
            raise ValueError("polynomial is not over the source chart's table")
        return substitute(p, self.rules, target=self.dst.table)

    def __repr__(self) -> str:
        return f"TransitionMap({self.src.name!r} -> {self.dst.name!r})"


def transport_table(tmap: TransitionMap) -> dict[tuple[str, str], GradedPoly]:
    """Every source bracket entry rewritten in destination variables."""
    return {pair: tmap.apply(entry) for pair, entry in tmap.src.bivector.entries.items()}


@dataclass(frozen=True)
class WeightLaw:
    """Declared gluing factor for one bracket pair, in source-chart variables."""

    pair: tuple[str, str]
    factor: GradedPoly


def check_weight_law(
    tmap: TransitionMap, law: WeightLaw
) -> tuple[bool, GradedPoly, GradedPoly]:
    """Return (ok, destination entry, transported and scaled source entry)."""
    a, b = law.pair
    for chart in (tmap.src, tmap.dst):
        names = chart.table.names()
        if a not in names or b not in names:
            raise UnresolvedPair(f"pair ({a}, {b}) is not resolvable in chart {chart.name}")
    expected = tmap.dst.entry(a, b)
    transported = tmap.apply(law.factor * tmap.src.entry(a, b))
    return expected == transported, expected, transported


def check_cocycle(maps: Sequence[TransitionMap]) -> tuple[bool, str]:
    """Compose a closed chain of maps and test it is the identity.

    Returns (ok, name of the first variable that fails to return to itself).
    """
    if not maps:
        raise NonComposableCycle("empty chain")
    for left, right in zip(maps, maps[1:]):
        if left.dst.name != right.src.name:
            raise NonComposableCycle(
                f"{left.dst.name!r} does not meet {right.src.name!r}"
            )
    if maps[-1].dst.name != maps[0].src.name:
        raise NonComposableCycle("chain does not close")
    table = maps[0].src.table
    for name in table.names():
        p = table.var(name)
        for tmap in maps:
            p = tmap.apply(p)
        if p != table.var(name):
            return False, name
    return True, ""
