"""Built-in quantized models: tables, atlases, fibrations, verification.

Each model bundles a variable table, a central superbivector, the expected
commutation relations, and optionally a fibration (coordinates expressed
over a base table), an atlas with weight laws, and scaling-weight data for
the volume-form check.  ``verify_model`` runs the whole certification sweep
and returns one record per check.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Mapping

from .atlas import Chart, TransitionMap, WeightLaw, check_cocycle, check_weight_law
from .graded_ring import EVEN, ODD, GradedPoly, VarTable, substitute
from .moyal import StarEngine, check_quantization_contract
from .poisson import SuperBivector, is_poisson


class UnknownModel(KeyError):
    """Requested built-in model name is not registered."""


class MissingFibration(ValueError):
    """The model declares no fibered coordinates."""


@dataclass(frozen=True)
class CYWeights:
    """Scaling-weight data for the global volume-form condition."""

    kind: str
    data: tuple

    @classmethod
    def projective(cls, dim: int, odd: int) -> "CYWeights":
        return cls("projective", (dim, odd))

    @classmethod
    def weighted(cls, even_weights, odd_weights) -> "CYWeights":
        return cls("weighted", (tuple(even_weights), tuple(odd_weights)))

    @classmethod
    def ambitwistor(cls, odd: int) -> "CYWeights":
        return cls("ambitwistor", (odd,))


def calabi_yau_index(cy: CYWeights):
    """Net scaling weight of the canonical volume form; zero means global."""
    if cy.kind == "projective":
        dim, odd = cy.data
        return dim + 1 - odd
    if cy.kind == "weighted":
        even_weights, odd_weights = cy.data
        return sum(even_weights) - sum(odd_weights)
    if cy.kind == "ambitwistor":
        (odd,) = cy.data
        return (3 - odd, 3 - odd)
    raise ValueError(f"unknown weight system kind {cy.kind!r}")


@dataclass(frozen=True)
class Fibration:
    """Coordinates written as polynomials over a base variable table."""

    base_table: VarTable
    rules: dict[str, GradedPoly]


@dataclass(frozen=True, eq=False)
class ModelSpec:
    name: str
    table: VarTable
    constants: tuple[str, ...]
    bivector: SuperBivector
    expected_relations: dict[tuple[str, str], GradedPoly] | None
    fibration: Fibration | None = None
    charts: tuple[Chart, ...] = ()
    transitions: tuple[TransitionMap, ...] = ()
    weight_laws: tuple[tuple[str, str, WeightLaw], ...] = ()
    cy: CYWeights | None = None
    max_order: int = 8
    associative: bool = True


@dataclass(frozen=True)
class CheckRecord:
    check_id: str
    category: str
    status: str
    lhs: GradedPoly | None = None
    rhs: GradedPoly | None = None
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    model_name: str
    records: tuple[CheckRecord, ...]

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.records)

    def failures(self) -> tuple[CheckRecord, ...]:
        return tuple(r for r in self.records if r.status == "fail")

    def __iter__(self):
        return iter(self.records)


# -- constant naming -------------------------------------------------------

_SPINOR = ("11", "12", "21", "22")


def _c_symbol(i: int, a: int, j: int, b: int) -> str:
    """Canonical name for a symmetric quadratic constant block.

    The block is symmetric under swapping the two index pairs and under
    swapping the second labels alone, so the orbit representative is the
    lexicographic minimum of the four equivalent index tuples.
    """
    rep = min((i, a, j, b), (j, b, i, a), (i, b, j, a), (j, a, i, b))
    return "C{}{}_{}{}".format(*rep)


def _c_names(n: int) -> tuple[str, ...]:
    return tuple(sorted({
        _c_symbol(i, a, j, b)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        for a in (1, 2)
        for b in (1, 2)
    }))


def _d_names() -> tuple[str, ...]:
    return tuple(f"D{p}_{q}" for p, q in combinations(_SPINOR, 2))


# -- shared atlas construction ---------------------------------------------

def _two_pole_atlas(pi: SuperBivector, odd_weights: dict[str, int]):
    """Two-chart trivialization of a (z1, z2, l1, l2 | odd...) table.

    Each pole fixes one of the two auxiliary even coordinates to 1 and keeps
    the ratio as an invertible variable.  Transition rules divide every
    coordinate by the ratio raised to its weight, and each bracket pair
    carries the matching declared factor.
    """
    decls = [("w1", EVEN, False, 1), ("w2", EVEN, False, 1), ("l", EVEN, True)]
    decls += [(n, ODD, False, w) for n, w in odd_weights.items()]
    charts = {}
    for pole in ("plus", "minus"):
        ct = VarTable.build(*decls)
        lam = ct.var("l")
        mapping = {"z1": ct.var("w1"), "z2": ct.var("w2")}
        if pole == "plus":
            mapping["l1"], mapping["l2"] = ct.one(), lam
        else:
            mapping["l1"], mapping["l2"] = lam, ct.one()
        for n in odd_weights:
            mapping[n] = ct.var(n)
        rename = {"z1": "w1", "z2": "w2"}
        entries = {
            (rename.get(a, a), rename.get(b, b)): substitute(e, mapping, target=ct)
            for (a, b), e in pi.entries.items()
        }
        charts[pole] = Chart(pole, ct, entries)
    plus, minus = charts["plus"], charts["minus"]

    def rules(dst: Chart):
        inv = dst.table.var("l", -1)
        out = {"l": inv, "w1": dst.table.var("w1") * inv, "w2": dst.table.var("w2") * inv}
        for n, w in odd_weights.items():
            out[n] = dst.table.var(n) * dst.table.var("l", -w) if w else dst.table.var(n)
        return out

    t_pm = TransitionMap(plus, minus, rules(minus))
    t_mp = TransitionMap(minus, plus, rules(plus))
    laws = []
    for chart, dst_name in ((plus, "minus"), (minus, "plus")):
        st = chart.table
        laws.append((chart.name, dst_name, WeightLaw(("w1", "w2"), st.var("l", -2))))
        for n, w in odd_weights.items():
            factor = st.var("l", -2 * w) if w else st.one()
            laws.append((chart.name, dst_name, WeightLaw((n, n), factor)))
    return (plus, minus), (t_pm, t_mp), tuple(laws)


def generic_chart_pair(n: int):
    """Two poles glued across fully generic quadratic odd-odd brackets.

    Returns ((plus, minus), (plus_to_minus, minus_to_plus), laws).
    """
    cs = _c_names(n)
    decls = [("w1", EVEN, False, 1), ("w2", EVEN, False, 1), ("l", EVEN, True)]
    decls += [(f"xi{i}", ODD, False, 1) for i in range(1, n + 1)]
    decls += [(c, EVEN) for c in cs]
    charts = {}
    for pole in ("plus", "minus"):
        ct = VarTable.build(*decls)
        lam = ct.var("l")
        entries = {("w1", "w2"): lam.scale(2)}
        for i, j in combinations_with_replacement(range(1, n + 1), 2):
            c11 = ct.var(_c_symbol(i, 1, j, 1))
            c12 = ct.var(_c_symbol(i, 1, j, 2))
            c22 = ct.var(_c_symbol(i, 2, j, 2))
            if pole == "plus":
                e = c11 + (c12 * lam).scale(2) + c22 * lam**2
            else:
                e = c11 * lam**2 + (c12 * lam).scale(2) + c22
            entries[(f"xi{i}", f"xi{j}")] = e
        charts[pole] = Chart(pole, ct, entries)
    plus, minus = charts["plus"], charts["minus"]

    def rules(dst: Chart):
        inv = dst.table.var("l", -1)
        out = {"l": inv, "w1": dst.table.var("w1") * inv, "w2": dst.table.var("w2") * inv}
        for i in range(1, n + 1):
            out[f"xi{i}"] = dst.table.var(f"xi{i}") * inv
        return out

    t_pm = TransitionMap(plus, minus, rules(minus))
    t_mp = TransitionMap(minus, plus, rules(plus))
    laws = []
    for chart, dst_name in ((plus, "minus"), (minus, "plus")):
        factor = chart.table.var("l", -2)
        laws.append((chart.name, dst_name, WeightLaw(("w1", "w2"), factor)))
        for i, j in combinations_with_replacement(range(1, n + 1), 2):
            laws.append((chart.name, dst_name, WeightLaw((f"xi{i}", f"xi{j}"), factor)))
    return (plus, minus), (t_pm, t_mp), tuple(laws)


# -- built-in models -------------------------------------------------------

def _t0_model() -> ModelSpec:
    ds, cs = _d_names(), _c_names(2)
    decls = [(f"x{s}", EVEN) for s in _SPINOR] + [("l1", EVEN), ("l2", EVEN)]
    decls += [(f"t{s}", ODD) for s in _SPINOR]
    decls += [(c, EVEN) for c in ds + cs]
    t = VarTable.build(*decls)
    entries = {}
    for p, q in combinations(_SPINOR, 2):
        entries[(f"x{p}", f"x{q}")] = t.var(f"D{p}_{q}")
    for p, q in combinations_with_replacement(_SPINOR, 2):
        entries[(f"t{p}", f"t{q}")] = t.var(
            _c_symbol(int(p[0]), int(p[1]), int(q[0]), int(q[1]))
        )
    rules = {
        "z1": t.var("x11") * t.var("l1") + t.var("x12") * t.var("l2"),
        "z2": t.var("x21") * t.var("l1") + t.var("x22") * t.var("l2"),
        "xi1": t.var("t11") * t.var("l1") + t.var("t12") * t.var("l2"),
        "xi2": t.var("t21") * t.var("l1") + t.var("t22") * t.var("l2"),
    }
    return ModelSpec(
        name="T0-cotangent",
        table=t,
        constants=ds + cs,
        bivector=SuperBivector(t, entries),
        expected_relations=dict(entries),
        fibration=Fibration(t, rules),
    )


def _t1_model() -> ModelSpec:
    bs = tuple(f"B{p}_{q}" for p in _SPINOR for q in _SPINOR)
    decls = [(f"x{s}", EVEN) for s in _SPINOR] + [("l1", EVEN), ("l2", EVEN)]
    decls += [(f"t{s}", ODD) for s in _SPINOR]
    decls += [(b, EVEN) for b in bs]
    t = VarTable.build(*decls)
    entries = {
        (f"x{p}", f"t{q}"): t.var(f"B{p}_{q}") for p in _SPINOR for q in _SPINOR
    }
    return ModelSpec(
        name="T1-cotangent",
        table=t,
        constants=bs,
        bivector=SuperBivector(t, entries),
        expected_relations=dict(entries),
        associative=False,
    )


def _twistor_z_rules(bt: VarTable) -> dict[str, GradedPoly]:
    return {
        "z1": bt.var("x11") * bt.var("l1") + bt.var("x12") * bt.var("l2"),
        "z2": bt.var("x21") * bt.var("l1") + bt.var("x22") * bt.var("l2"),
        "l1": bt.var("l1"),
        "l2": bt.var("l2"),
    }


def _p34_model() -> ModelSpec:
    decls = [("z1", EVEN, False, 1), ("z2", EVEN, False, 1),
             ("l1", EVEN, False, 1), ("l2", EVEN, False, 1)]
    decls += [(f"xi{i}", ODD, False, 1) for i in range(1, 5)]
    t = VarTable.build(*decls)
    sq = t.var("l1") ** 2 + t.var("l2") ** 2
    entries = {("z1", "z2"): (t.var("l1") * t.var("l2")).scale(2)}
    for i in range(1, 5):
        entries[(f"xi{i}", f"xi{i}")] = sq
    pi = SuperBivector(t, entries)
    charts, transitions, laws = _two_pole_atlas(pi, {f"xi{i}": 1 for i in range(1, 5)})
    bdecls = [(f"x{s}", EVEN) for s in _SPINOR] + [("l1", EVEN), ("l2", EVEN)]
    bdecls += [(f"t{i}{a}", ODD) for i in range(1, 5) for a in (1, 2)]
    bt = VarTable.build(*bdecls)
    rules = _twistor_z_rules(bt)
    for i in range(1, 5):
        rules[f"xi{i}"] = bt.var(f"t{i}1") * bt.var("l1") + bt.var(f"t{i}2") * bt.var("l2")
    return ModelSpec(
        name="P3|4",
        table=t,
        constants=(),
        bivector=pi,
        expected_relations=dict(entries),
        fibration=Fibration(bt, rules),
        charts=charts,
        transitions=transitions,
        weight_laws=laws,
        cy=CYWeights.projective(3, 4),
    )


_FIBER_LETTERS = "abcde"


def _wp_model(p: int, q: int) -> ModelSpec:
    decls = [("z1", EVEN, False, 1), ("z2", EVEN, False, 1),
             ("l1", EVEN, False, 1), ("l2", EVEN, False, 1),
             ("xi1", ODD, False, p), ("xi2", ODD, False, q)]
    t = VarTable.build(*decls)
    sq = t.var("l1") ** 2 + t.var("l2") ** 2
    entries = {
        ("z1", "z2"): (t.var("l1") * t.var("l2")).scale(2),
        ("xi1", "xi1"): sq**p,
        ("xi2", "xi2"): sq**q,
    }
    pi = SuperBivector(t, entries)
    charts, transitions, laws = _two_pole_atlas(pi, {"xi1": p, "xi2": q})
    bdecls = [(f"x{s}", EVEN) for s in _SPINOR] + [("l1", EVEN), ("l2", EVEN)]
    for idx, w in (("1", p), ("2", q)):
        bdecls += [(f"t{idx}{_FIBER_LETTERS[k]}", ODD) for k in range(w + 1)]
    bt = VarTable.build(*bdecls)
    rules = _twistor_z_rules(bt)
    for idx, w in (("1", p), ("2", q)):
        expr = bt.zero()
        for k in range(w + 1):
            mono = bt.var(f"t{idx}{_FIBER_LETTERS[k]}")
            expr = expr + mono * bt.var("l1", w - k) * bt.var("l2", k)
        rules[f"xi{idx}"] = expr
    return ModelSpec(
        name=f"WP[{p},{q}]",
        table=t,
        constants=(),
        bivector=pi,
        expected_relations=dict(entries),
        fibration=Fibration(bt, rules),
        charts=charts,
        transitions=transitions,
        weight_laws=laws,
        cy=CYWeights.weighted((1, 1, 1, 1), (p, q)),
    )


def _l56_model() -> ModelSpec:
    decls = [("X1", EVEN), ("X2", EVEN), ("Y1", EVEN), ("Y2", EVEN),
             ("l1", EVEN), ("l2", EVEN), ("m1", EVEN), ("m2", EVEN)]
    decls += [(f"xi{i}", ODD) for i in (1, 2, 3)]
    decls += [(f"ze{i}", ODD) for i in (1, 2, 3)]
    t = VarTable.build(*decls)
    l1, l2, m1, m2 = t.var("l1"), t.var("l2"), t.var("m1"), t.var("m2")
    entries = {
        ("X1", "X2"): (l1 * l2).scale(2),
        ("X1", "Y1"): l2 * m2,
        ("X1", "Y2"): l1 * m2,
        ("X2", "Y1"): -(l2 * m1),
        ("X2", "Y2"): -(l1 * m1),
    }
    for i in (1, 2, 3):
        entries[(f"xi{i}", f"xi{i}")] = l1**2 + l2**2
        entries[(f"ze{i}", f"ze{i}")] = m1**2 + m2**2
    pi = SuperBivector(t, entries)
    bdecls = [(f"x{s}", EVEN) for s in _SPINOR]
    bdecls += [("l1", EVEN), ("l2", EVEN), ("m1", EVEN), ("m2", EVEN)]
    bdecls += [(f"t{i}{a}", ODD) for i in (1, 2, 3) for a in (1, 2)]
    bdecls += [(f"e{i}{a}", ODD) for i in (1, 2, 3) for a in (1, 2)]
    bt = VarTable.build(*bdecls)

    def shift(alpha: int, adot: int) -> GradedPoly:
        out = bt.zero()
        for i in (1, 2, 3):
            out = out + bt.var(f"t{i}{adot}") * bt.var(f"e{i}{alpha}")
        return out

    rules = {}
    for alpha in (1, 2):
        expr = bt.zero()
        for adot in (1, 2):
            expr = expr + (bt.var(f"x{alpha}{adot}") - shift(alpha, adot)) * bt.var(f"l{adot}")
        rules[f"X{alpha}"] = expr
    for adot in (1, 2):
        expr = bt.zero()
        for alpha in (1, 2):
            expr = expr + (bt.var(f"x{alpha}{adot}") + shift(alpha, adot)) * bt.var(f"m{alpha}")
        rules[f"Y{adot}"] = expr
    for i in (1, 2, 3):
        rules[f"xi{i}"] = bt.var(f"t{i}1") * bt.var("l1") + bt.var(f"t{i}2") * bt.var("l2")
        rules[f"ze{i}"] = bt.var(f"e{i}1") * bt.var("m1") + bt.var(f"e{i}2") * bt.var("m2")
    return ModelSpec(
        name="L5|6",
        table=t,
        constants=(),
        bivector=pi,
        expected_relations=dict(entries),
        fibration=Fibration(bt, rules),
        cy=CYWeights.ambitwistor(3),
    )


def quadric_generator(model: ModelSpec) -> GradedPoly:
    """The incidence quadric of the two-sided model, over its fibration base."""
    fib = model.fibration
    if fib is None:
        raise MissingFibration(f"model {model.name} declares no fibration")
    r = fib.rules
    bt = fib.base_table
    out = r["X1"] * bt.var("m1") + r["X2"] * bt.var("m2")
    out = out - r["Y1"] * bt.var("l1") - r["Y2"] * bt.var("l2")
    for i in (1, 2, 3):
        out = out + (r[f"xi{i}"] * r[f"ze{i}"]).scale(2)
    return out


def _p3n_model(n: int = 4) -> ModelSpec:
    cs = _c_names(n)
    decls = [(f"z{k}", EVEN, False, 1) for k in (1, 2, 3, 4)]
    decls += [(f"xi{i}", ODD, False, 1) for i in range(1, n + 1)]
    decls += [(c, EVEN) for c in cs]
    t = VarTable.build(*decls)
    z3, z4 = t.var("z3"), t.var("z4")
    entries = {}
    for i, j in combinations_with_replacement(range(1, n + 1), 2):
        e = t.var(_c_symbol(i, 1, j, 1)) * z3**2
        e = e + (t.var(_c_symbol(i, 1, j, 2)) * z3 * z4).scale(2)
        e = e + t.var(_c_symbol(i, 2, j, 2)) * z4**2
        entries[(f"xi{i}", f"xi{j}")] = e
    pi = SuperBivector(t, entries)

    charts = []
    for k in (1, 2, 3, 4):
        others = [m for m in (1, 2, 3, 4) if m != k]
        cdecls = [(f"z{m}", EVEN, True) for m in others]
        cdecls += [(f"xi{i}", ODD) for i in range(1, n + 1)]
        cdecls += [(c, EVEN) for c in cs]
        ct = VarTable.build(*cdecls)
        mapping = {f"z{m}": ct.var(f"z{m}") for m in others}
        mapping[f"z{k}"] = ct.one()
        chart_entries = {
            pair: substitute(e, mapping, target=ct) for pair, e in pi.entries.items()
        }
        charts.append(Chart(f"U{k}", ct, chart_entries))
    chart_by = {c.name: c for c in charts}

    transitions = []
    for k in (1, 2, 3, 4):
        for l in (1, 2, 3, 4):
            if k == l:
                continue
            src, dst = chart_by[f"U{k}"], chart_by[f"U{l}"]
            inv = dst.table.var(f"z{k}", -1)
            rules = {f"z{l}": inv}
            for m in (1, 2, 3, 4):
                if m not in (k, l):
                    rules[f"z{m}"] = dst.table.var(f"z{m}") * inv
            for i in range(1, n + 1):
                rules[f"xi{i}"] = dst.table.var(f"xi{i}") * inv
            transitions.append(TransitionMap(src, dst, rules))

    laws = []
    for k, l in combinations((1, 2, 3, 4), 2):
        factor = chart_by[f"U{l}"].table.var(f"z{k}", -2)
        for i, j in combinations_with_replacement(range(1, n + 1), 2):
            laws.append((f"U{l}", f"U{k}", WeightLaw((f"xi{i}", f"xi{j}"), factor)))

    bdecls = [("z3", EVEN), ("z4", EVEN)]
    bdecls += [(f"t{i}{a}", ODD) for i in range(1, n + 1) for a in (1, 2)]
    bdecls += [(c, EVEN) for c in cs]
    bt = VarTable.build(*bdecls)
    rules = {}
    for i in range(1, n + 1):
        rules[f"xi{i}"] = bt.var(f"t{i}1") * bt.var("z3") + bt.var(f"t{i}2") * bt.var("z4")
    return ModelSpec(
        name="P3|N",
        table=t,
        constants=cs,
        bivector=pi,
        expected_relations=dict(entries),
        fibration=Fibration(bt, rules),
        charts=tuple(charts),
        transitions=tuple(transitions),
        weight_laws=tuple(laws),
        cy=CYWeights.projective(3, n),
    )


_BUILTINS = {
    "T0-cotangent": _t0_model,
    "T1-cotangent": _t1_model,
    "P3|4": _p34_model,
    "WP[1,3]": lambda: _wp_model(1, 3),
    "WP[2,2]": lambda: _wp_model(2, 2),
    "WP[4,0]": lambda: _wp_model(4, 0),
    "L5|6": _l56_model,
    "P3|N": _p3n_model,
}


def list_builtins() -> tuple[str, ...]:
    return tuple(_BUILTINS)


def builtin(name: str, n: int | None = None) -> ModelSpec:
    key = name
    if key.startswith("P3|N="):
        try:
            n = int(key[len("P3|N="):])
        except ValueError:
            raise UnknownModel(name) from None
        key = "P3|N"
    maker = _BUILTINS.get(key)
    if maker is None:
        raise UnknownModel(name)
    if key == "P3|N":
        return maker(n if n is not None else 4)
    if n is not None:
        raise ValueError("only P3|N takes an odd-dimension argument")
    return maker()


# -- derived computations --------------------------------------------------

def fibration_pullback(model: ModelSpec, base=None) -> dict[tuple[str, str], GradedPoly]:
    """Brackets induced on the fibered coordinates, per hbar.

    ``base`` supplies the bracket on the fibration base, either as a
    ``SuperBivector`` or as an entry mapping; when the base table is the
    model's own table it defaults to the model bivector.
    """
    fib = model.fibration
    if fib is None:
        raise MissingFibration(f"model {model.name} declares no fibration")
    if base is None:
        if fib.base_table != model.table:
            raise ValueError("a base bracket is required for a separate base table")
        base_biv = model.bivector
    elif isinstance(base, SuperBivector):
        base_biv = base
    else:
        base_biv = SuperBivector(fib.base_table, base)
    if base_biv.table != fib.base_table:
        raise ValueError("base bracket is not over the fibration base table")
    engine = StarEngine(base_biv, max_order=model.max_order)
    bt = fib.base_table
    names = tuple(fib.rules)
    out = {}
    for i, u in enumerate(names):
        for v in names[i:]:
            com = engine.supercommutator(fib.rules[u], fib.rules[v])
            c1 = com.hbar_coefficient(1)
            if com != bt.hbar() * c1:
                raise ValueError(f"pullback bracket of ({u}, {v}) is not hbar-linear")
            out[(u, v)] = c1
    return out


def anti_chiral_substitution(
    shifts: Mapping[str, GradedPoly], f: GradedPoly
) -> GradedPoly:
    """Shift even coordinates by even nilpotent amounts: x -> x + shift."""
    t = f.table
    mapping = {name: t.var(name) + s for name, s in shifts.items()}
    return substitute(f, mapping, target=t)


# -- verification ----------------------------------------------------------

def verify_model(
    model: ModelSpec, max_order: int | None = None, seed: int = 0
) -> VerificationReport:
    """Run the model's full certification sweep."""
    records: list[CheckRecord] = []
    t = model.table

    records.append(CheckRecord(
        "poisson [pi,pi]=0", "poisson",
        "pass" if is_poisson(model.bivector) else "fail",
    ))

    engine = StarEngine(
        model.bivector, max_order if max_order is not None else model.max_order
    )

    if model.expected_relations is not None:
        expected = SuperBivector(t, model.expected_relations)
        coords = [n for n in t.names() if n not in model.constants]
        for i, a in enumerate(coords):
            for b in coords[i:]:
                both_odd = t.parity(a) == ODD and t.parity(b) == ODD
                if a == b and not both_odd:
                    continue
                got = engine.supercommutator(t.var(a), t.var(b))
                want = t.hbar() * expected.entry(a, b)
                records.append(CheckRecord(
                    f"{'anti' if both_odd else 'comm'} {a} {b}", "relations",
                    "pass" if got == want else "fail", got, want,
                ))

    contract = check_quantization_contract(
        engine, seed=seed, associativity=model.associative
    )
    for entry in contract.entries:
        records.append(CheckRecord(
            f"contract {entry.name}", "contract", entry.status, detail=entry.detail
        ))
        if entry.name == "bilinearity" and not model.associative:
            records.append(CheckRecord(
                "contract associativity", "contract", "skip",
                detail="bracket pairs even with odd coordinates; the product is "
                "order-1 consistent but associativity fails at order 2, so the "
                "sweep is not run",
            ))

    tmap_by = {(m.src.name, m.dst.name): m for m in model.transitions}
    for sname, dname, law in model.weight_laws:
        tmap = tmap_by.get((sname, dname))
        if tmap is None:
            raise ValueError(f"no transition from {sname} to {dname}")
        ok, want, got = check_weight_law(tmap, law)
        a, b = law.pair
        records.append(CheckRecord(
            f"glue {sname} {dname} {a} {b}", "glue",
            "pass" if ok else "fail", got, want,
        ))

    names = [c.name for c in model.charts]
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            fwd, back = tmap_by.get((a, b)), tmap_by.get((b, a))
            if fwd and back:
                ok, bad = check_cocycle([fwd, back])
                records.append(CheckRecord(
                    f"cocycle {a} {b}", "cocycle", "pass" if ok else "fail",
                    detail="" if ok else f"variable {bad} does not return",
                ))
    for combo in combinations(names, 3):
        a = combo[0]
        for b, c in ((combo[1], combo[2]), (combo[2], combo[1])):
            chain = [tmap_by.get((a, b)), tmap_by.get((b, c)), tmap_by.get((c, a))]
            if all(chain):
                ok, bad = check_cocycle(chain)
                records.append(CheckRecord(
                    f"cocycle {a} {b} {c}", "cocycle", "pass" if ok else "fail",
                    detail="" if ok else f"variable {bad} does not return",
                ))

    if model.cy is not None:
        idx = calabi_yau_index(model.cy)
        flat = idx == 0 or idx == (0, 0)
        records.append(CheckRecord(
            "cy index", "cy", "pass" if flat else "fail", detail=str(idx)
        ))

    return VerificationReport(model.name, tuple(records))
