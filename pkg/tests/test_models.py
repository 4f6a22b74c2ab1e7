"""Built-in models: frozen tables, fibrations, atlases, and verification."""

from fractions import Fraction

import pytest

from supermoyal.atlas import check_cocycle, check_weight_law
from supermoyal.graded_ring import EVEN, ODD, VarTable
from supermoyal.models import (
    CYWeights,
    MissingFibration,
    UnknownModel,
    anti_chiral_substitution,
    builtin,
    calabi_yau_index,
    fibration_pullback,
    generic_chart_pair,
    list_builtins,
    quadric_generator,
    verify_model,
)
from supermoyal.moyal import StarEngine


def _orbit_name(i, a, j, b):
    rep = min((i, a, j, b), (j, b, i, a), (i, b, j, a), (j, a, i, b))
    return "C{}{}_{}{}".format(*rep)


class TestRegistry:
    def test_builtin_names(self):
        assert list_builtins() == (
            "T0-cotangent", "T1-cotangent", "P3|4",
            "WP[1,3]", "WP[2,2]", "WP[4,0]", "L5|6", "P3|N",
        )

    def test_unknown_model(self):
        with pytest.raises(UnknownModel):
            builtin("nope")
        with pytest.raises(UnknownModel):
            builtin("P3|N=x")

    def test_odd_dimension_argument(self):
        assert builtin("P3|N=2").cy == CYWeights.projective(3, 2)
        assert builtin("P3|N", n=3).cy == CYWeights.projective(3, 3)
        with pytest.raises(ValueError):
            builtin("P3|4", n=2)


@pytest.mark.parametrize("name", list_builtins())
def test_builtin_verifies_clean(name):
    report = verify_model(builtin(name))
    assert report.ok, report.failures()


class TestConstantNaming:
    def test_t0_constant_families(self):
        m = builtin("T0-cotangent")
        assert m.constants == (
            "D11_12", "D11_21", "D11_22", "D12_21", "D12_22", "D21_22",
            "C11_11", "C11_12", "C11_21", "C11_22",
            "C12_12", "C12_22", "C21_21", "C21_22", "C22_22",
        )

    def test_p3n_constant_count(self):
        assert len(builtin("P3|N").constants) == 30

    def test_t1_constant_count(self):
        m = builtin("T1-cotangent")
        assert len(m.constants) == 16
        assert m.constants[0] == "B11_11"


class TestT0:
    def test_generator_commutators(self):
        m = builtin("T0-cotangent")
        t = m.table
        eng = StarEngine(m.bivector)
        assert eng.supercommutator(t.var("x11"), t.var("x12")) == t.hbar() * t.var("D11_12")
        assert eng.supercommutator(t.var("t11"), t.var("t11")) == t.hbar() * t.var("C11_11")

    def test_shared_canonical_constant(self):
        m = builtin("T0-cotangent")
        t = m.table
        eng = StarEngine(m.bivector)
        c = t.hbar() * t.var("C11_22")
        assert eng.supercommutator(t.var("t11"), t.var("t22")) == c
        assert eng.supercommutator(t.var("t12"), t.var("t21")) == c

    def test_zero_families(self):
        m = builtin("T0-cotangent")
        t = m.table
        eng = StarEngine(m.bivector)
        for a, b in [("x11", "l1"), ("l1", "l2"), ("x11", "t11"), ("l1", "t22")]:
            assert eng.supercommutator(t.var(a), t.var(b)).is_zero()

    def test_record_ids(self):
        report = verify_model(builtin("T0-cotangent"))
        ids = {r.check_id: r.status for r in report}
        assert ids["comm x11 x12"] == "pass"
        assert ids["anti t11 t11"] == "pass"
        assert ids["comm l1 l2"] == "pass"
        assert ids["poisson [pi,pi]=0"] == "pass"

    def test_symbolic_pullback(self):
        m = builtin("T0-cotangent")
        t = m.table
        got = fibration_pullback(m)
        l1, l2 = t.var("l1"), t.var("l2")
        expect_z = (
            t.var("D11_21") * l1**2
            + (t.var("D11_22") + t.var("D12_21")) * l1 * l2
            + t.var("D12_22") * l2**2
        )
        assert got[("z1", "z2")] == expect_z
        for (i, j), key in [((1, 1), ("xi1", "xi1")), ((1, 2), ("xi1", "xi2")),
                            ((2, 2), ("xi2", "xi2"))]:
            expect_xi = (
                t.var(_orbit_name(i, 1, j, 1)) * l1**2
                + (t.var(_orbit_name(i, 1, j, 2)) * l1 * l2).scale(2)
                + t.var(_orbit_name(i, 2, j, 2)) * l2**2
            )
            assert got[key] == expect_xi
        assert got[("z1", "xi1")].is_zero()
        assert got[("z2", "xi2")].is_zero()


class TestT1:
    def test_mixed_block_relations(self):
        m = builtin("T1-cotangent")
        t = m.table
        eng = StarEngine(m.bivector)
        assert eng.supercommutator(t.var("x11"), t.var("t11")) == t.hbar() * t.var("B11_11")
        assert eng.supercommutator(t.var("x21"), t.var("t12")) == t.hbar() * t.var("B21_12")
        assert eng.supercommutator(t.var("x11"), t.var("x12")).is_zero()
        assert eng.supercommutator(t.var("t11"), t.var("t22")).is_zero()

    def test_associativity_is_skipped_with_detail(self):
        report = verify_model(builtin("T1-cotangent"))
        rec = next(r for r in report if r.check_id == "contract associativity")
        assert rec.status == "skip"
        assert "order 2" in rec.detail

    def test_no_fibration(self):
        with pytest.raises(MissingFibration):
            fibration_pullback(builtin("T1-cotangent"))


class TestP34:
    def test_numeric_base_reproduces_the_model(self):
        m = builtin("P3|4")
        bt = m.fibration.base_table
        base = {("x11", "x22"): bt.one(), ("x12", "x21"): bt.one()}
        for i in range(1, 5):
            for a in (1, 2):
                base[(f"t{i}{a}", f"t{i}{a}")] = bt.one()
        got = fibration_pullback(m, base)
        l1, l2 = bt.var("l1"), bt.var("l2")
        assert got[("z1", "z2")] == (l1 * l2).scale(2)
        for i in range(1, 5):
            assert got[(f"xi{i}", f"xi{i}")] == l1**2 + l2**2
        assert got[("z1", "xi1")].is_zero()
        assert got[("xi1", "xi2")].is_zero()
        assert got[("z1", "l1")].is_zero()

    def test_atlas_shape(self):
        m = builtin("P3|4")
        assert tuple(c.name for c in m.charts) == ("plus", "minus")
        assert len(m.transitions) == 2
        assert len(m.weight_laws) == 10

    def test_chart_tables(self):
        m = builtin("P3|4")
        plus = m.charts[0]
        ct = plus.table
        assert plus.entry("w1", "w2") == ct.var("l").scale(2)
        assert plus.entry("xi1", "xi1") == ct.one() + ct.var("l") ** 2


class TestWP:
    @pytest.mark.parametrize("name,p,q", [("WP[1,3]", 1, 3), ("WP[2,2]", 2, 2),
                                          ("WP[4,0]", 4, 0)])
    def test_bracket_powers(self, name, p, q):
        m = builtin(name)
        t = m.table
        sq = t.var("l1") ** 2 + t.var("l2") ** 2
        assert m.bivector.entry("xi1", "xi1") == sq**p
        assert m.bivector.entry("xi2", "xi2") == sq**q

    def test_weight_zero_entry_is_constant(self):
        m = builtin("WP[4,0]")
        assert m.bivector.entry("xi2", "xi2") == m.table.one()

    def test_fiber_rules_are_weight_homogeneous(self):
        for name in ("WP[1,3]", "WP[2,2]", "WP[4,0]"):
            m = builtin(name)
            bt = m.fibration.base_table
            slots = [bt.even_slot("l1"), bt.even_slot("l2")]
            for var in ("xi1", "xi2"):
                w = m.table.spec(var).weight
                rule = m.fibration.rules[var]
                for mono in rule.terms:
                    assert sum(mono.even[s] for s in slots) == w

    def test_binomial_base_recovers_the_power(self):
        m = builtin("WP[1,3]")
        bt = m.fibration.base_table
        base = {}
        for idx, w in (("1", 1), ("2", 3)):
            for k, letter in enumerate("abcde"[: w + 1]):
                from math import comb
                base[(f"t{idx}{letter}", f"t{idx}{letter}")] = bt.const(comb(w, k))
        got = fibration_pullback(m, base)
        sq = bt.var("l1") ** 2 + bt.var("l2") ** 2
        assert got[("xi1", "xi1")] == sq
        assert got[("xi2", "xi2")] == sq**3
        assert got[("xi1", "xi2")].is_zero()

    def test_identity_transition_for_weight_zero(self):
        m = builtin("WP[4,0]")
        t_pm = m.transitions[0]
        ct = t_pm.dst.table
        assert t_pm.rules["xi2"] == ct.var("xi2")
        assert t_pm.rules["xi1"] == ct.var("xi1") * ct.var("l", -4)


class TestL56:
    def test_relation_table(self):
        m = builtin("L5|6")
        t = m.table
        eng = StarEngine(m.bivector)
        h = t.hbar()
        l1, l2, m1, m2 = t.var("l1"), t.var("l2"), t.var("m1"), t.var("m2")
        assert eng.supercommutator(t.var("X1"), t.var("X2")) == h * (l1 * l2).scale(2)
        assert eng.supercommutator(t.var("X1"), t.var("Y1")) == h * l2 * m2
        assert eng.supercommutator(t.var("X1"), t.var("Y2")) == h * l1 * m2
        assert eng.supercommutator(t.var("X2"), t.var("Y1")) == -(h * l2 * m1)
        assert eng.supercommutator(t.var("X2"), t.var("Y2")) == -(h * l1 * m1)
        assert eng.supercommutator(t.var("Y1"), t.var("Y2")).is_zero()
        assert eng.supercommutator(t.var("xi1"), t.var("xi1")) == h * (l1**2 + l2**2)
        assert eng.supercommutator(t.var("ze2"), t.var("ze2")) == h * (m1**2 + m2**2)
        assert eng.supercommutator(t.var("xi1"), t.var("ze1")).is_zero()

    def test_quadric_vanishes_identically(self):
        assert quadric_generator(builtin("L5|6")).is_zero()

    def test_chiral_shift_round_trip(self):
        m = builtin("L5|6")
        bt = m.fibration.base_table

        def shift(alpha, adot):
            out = bt.zero()
            for i in (1, 2, 3):
                out = out + bt.var(f"t{i}{adot}") * bt.var(f"e{i}{alpha}")
            return out

        fwd = {f"x{al}{ad}": -shift(al, ad) for al in (1, 2) for ad in (1, 2)}
        back = {name: -s for name, s in fwd.items()}
        basis = [bt.one()] + [bt.var(n) for n in bt.names()]
        names = bt.names()
        for i, a in enumerate(names):
            for b in names[i:]:
                pa, pb = bt.parity(a), bt.parity(b)
                if a == b and pa == ODD:
                    continue
                basis.append(bt.var(a) * bt.var(b))
        for f in basis:
            assert anti_chiral_substitution(back, anti_chiral_substitution(fwd, f)) == f


class TestP3N:
    def test_atlas_shape(self):
        m = builtin("P3|N")
        assert tuple(c.name for c in m.charts) == ("U1", "U2", "U3", "U4")
        assert len(m.transitions) == 12
        assert len(m.weight_laws) == 60

    def test_declared_law_direction(self):
        m = builtin("P3|N")
        tmap = next(
            t for t in m.transitions if t.src.name == "U4" and t.dst.name == "U3"
        )
        laws = [
            law for s, d, law in m.weight_laws if (s, d) == ("U4", "U3")
        ]
        assert len(laws) == 10
        factor = tmap.src.table.var("z3", -2)
        for law in laws:
            assert law.factor == factor
            ok, want, got = check_weight_law(tmap, law)
            assert ok, (law.pair, want, got)

    def test_all_oriented_three_cycles(self):
        m = builtin("P3|N")
        by = {(t.src.name, t.dst.name): t for t in m.transitions}
        names = [c.name for c in m.charts]
        count = 0
        from itertools import permutations
        for a, b, c in permutations(names, 3):
            if a != min(a, b, c):
                continue
            ok, bad = check_cocycle([by[(a, b)], by[(b, c)], by[(c, a)]])
            assert ok, (a, b, c, bad)
            count += 1
        assert count == 8

    def test_homogeneous_pullback(self):
        m = builtin("P3|N")
        bt = m.fibration.base_table
        base = {}
        for i in range(1, 5):
            for j in range(i, 5):
                for a in (1, 2):
                    for b in (1, 2):
                        if (i, a) <= (j, b):
                            base[(f"t{i}{a}", f"t{j}{b}")] = bt.var(_orbit_name(i, a, j, b))
        got = fibration_pullback(m, base)
        z3, z4 = bt.var("z3"), bt.var("z4")
        for i in range(1, 5):
            for j in range(i, 5):
                expect = (
                    bt.var(_orbit_name(i, 1, j, 1)) * z3**2
                    + (bt.var(_orbit_name(i, 1, j, 2)) * z3 * z4).scale(2)
                    + bt.var(_orbit_name(i, 2, j, 2)) * z4**2
                )
                assert got[(f"xi{i}", f"xi{j}")] == expect

    def test_non_calabi_yau_size_fails_the_index_check(self):
        report = verify_model(builtin("P3|N=2"))
        rec = next(r for r in report if r.check_id == "cy index")
        assert rec.status == "fail"
        assert rec.detail == "2"


class TestGenericGluing:
    def test_all_pairs_glue(self):
        (plus, minus), (t_pm, t_mp), laws = generic_chart_pair(2)
        for sname, dname, law in laws:
            tmap = t_pm if sname == "plus" else t_mp
            ok, want, got = check_weight_law(tmap, law)
            assert ok, (sname, law.pair, want, got)

    def test_cross_pair_transport_value(self):
        (plus, minus), (t_pm, _), _ = generic_chart_pair(2)
        ct = minus.table
        factor = plus.table.var("l", -2)
        got = t_pm.apply(factor * plus.entry("xi1", "xi2"))
        expect = (
            ct.var("C11_21") * ct.var("l") ** 2
            + (ct.var("C11_22") * ct.var("l")).scale(2)
            + ct.var("C12_22")
        )
        assert got == expect
        assert got == minus.entry("xi1", "xi2")

    def test_round_trip_cocycle(self):
        _, (t_pm, t_mp), _ = generic_chart_pair(3)
        ok, bad = check_cocycle([t_pm, t_mp])
        assert ok, bad


class TestCYArithmetic:
    def test_projective(self):
        assert calabi_yau_index(CYWeights.projective(3, 4)) == 0
        assert calabi_yau_index(CYWeights.projective(3, 0)) == 4
        assert calabi_yau_index(CYWeights.projective(3, 5)) == -1
        assert calabi_yau_index(CYWeights.projective(2, 4)) == -1

    def test_weighted(self):
        assert calabi_yau_index(CYWeights.weighted((1, 1, 1, 1), (1, 3))) == 0
        assert calabi_yau_index(CYWeights.weighted((1, 1, 1, 1), (4, 0))) == 0
        assert calabi_yau_index(CYWeights.weighted((2, 2), (1,))) == 3
        assert calabi_yau_index(CYWeights.weighted((1, 1), (3,))) == -1

    def test_ambitwistor(self):
        assert calabi_yau_index(CYWeights.ambitwistor(3)) == (0, 0)
        assert calabi_yau_index(CYWeights.ambitwistor(1)) == (2, 2)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            calabi_yau_index(CYWeights("spectral", ()))


class TestShippedFiles:
    def _dir(self):
        from pathlib import Path

        return Path(__file__).resolve().parent.parent / "models"

    def test_every_builtin_is_shipped(self):
        from supermoyal.cli import parse_model_text

        names = set()
        for path in self._dir().glob("*.model"):
            names.add(parse_model_text(path.read_text(), source=str(path)).name)
        assert names == set(list_builtins())

    def test_files_are_canonical_serializations(self):
        from supermoyal.cli import parse_model_text, render_model_text

        for path in self._dir().glob("*.model"):
            text = path.read_text()
            name = parse_model_text(text, source=str(path)).name
            assert text == render_model_text(builtin(name)), path.name


class TestAntiChiralSubstitution:
    def test_round_trip_is_exact(self):
        t = VarTable.build(("x", EVEN), ("y", EVEN), ("th1", ODD), ("th2", ODD))
        s = t.var("th1") * t.var("th2")
        fwd = {"x": s.scale(3), "y": -s}
        back = {"x": s.scale(-3), "y": s}
        samples = [
            t.var("x") ** 2 * t.var("y"),
            t.var("x") * t.var("th1"),
            (t.var("x") + t.var("y")) ** 3 + t.var("th1") * t.var("th2"),
        ]
        for f in samples:
            assert anti_chiral_substitution(back, anti_chiral_substitution(fwd, f)) == f

    def test_shift_acts(self):
        t = VarTable.build(("x", EVEN), ("th1", ODD), ("th2", ODD))
        s = t.var("th1") * t.var("th2")
        got = anti_chiral_substitution({"x": s}, t.var("x") ** 2)
        assert got == t.var("x") ** 2 + (t.var("x") * s).scale(2)
