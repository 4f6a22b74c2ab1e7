from fractions import Fraction

import pytest

from supermoyal.graded_ring import EVEN, ODD, GradedPoly, Monomial, VarTable
from supermoyal.poisson import (
    SuperBivector,
    SuperTrivector,
    VariableMismatch,
    is_poisson,
    poisson_bracket,
    schouten_bracket,
)


def p34_table():
    return VarTable.build(
        ("z1", EVEN),
        ("z2", EVEN),
        ("l1", EVEN),
        ("l2", EVEN),
        ("xi1", ODD),
        ("xi2", ODD),
        ("xi3", ODD),
        ("xi4", ODD),
    )


def p34_bivector():
    t = p34_table()
    quad = t.var("l1") * t.var("l1") + t.var("l2") * t.var("l2")
    entries = {("z1", "z2"): 2 * t.var("l1") * t.var("l2")}
    for i in (1, 2, 3, 4):
        entries[(f"xi{i}", f"xi{i}")] = quad
    return SuperBivector(t, entries)


def t1_mini():
    t = VarTable.build(("x", EVEN), ("w1", EVEN), ("w2", EVEN), ("th1", ODD), ("th2", ODD))
    pi = SuperBivector(t, {("x", "th1"): t.var("w1"), ("x", "th2"): t.var("w2")})
    return t, pi


class TestBivectorConstruction:
    def test_mirror_even_even(self):
        pi = p34_bivector()
        t = pi.table
        assert pi.entry("z2", "z1") == -2 * t.var("l1") * t.var("l2")

    def test_mirror_odd_odd_symmetric(self):
        t = p34_table()
        pi = SuperBivector(t, {("xi1", "xi2"): t.var("l1")})
        assert pi.entry("xi2", "xi1") == t.var("l1")

    def test_mirror_even_odd(self):
        t, pi = t1_mini()
        assert pi.entry("th1", "x") == -t.var("w1")

    def test_even_diagonal_rejected(self):
        t = p34_table()
        with pytest.raises(ValueError):
            SuperBivector(t, {("z1", "z1"): t.one()})

    def test_inconsistent_mirrors_rejected(self):
        t = p34_table()
        with pytest.raises(ValueError):
            SuperBivector(t, {("z1", "z2"): t.one(), ("z2", "z1"): t.one()})

    def test_parity_flags(self):
        assert p34_bivector().parity == 0
        _, pi = t1_mini()
        assert pi.parity == 1

    def test_centrality(self):
        assert p34_bivector().is_central
        t = VarTable.build(("z1", EVEN), ("z2", EVEN), ("z3", EVEN))
        pi = SuperBivector(t, {("z1", "z2"): t.one(), ("z1", "z3"): t.var("z1")})
        assert not pi.is_central

    def test_unknown_variable(self):
        t = p34_table()
        with pytest.raises(VariableMismatch):
            SuperBivector(t, {("z1", "nope"): t.one()})


class TestPoissonBracket:
    def test_generator_pairs_read_off_the_matrix(self):
        pi = p34_bivector()
        t = pi.table
        quad = t.var("l1") ** 2 + t.var("l2") ** 2
        assert poisson_bracket(pi, t.var("z1"), t.var("z2")) == 2 * t.var("l1") * t.var("l2")
        assert poisson_bracket(pi, t.var("z2"), t.var("z1")) == -2 * t.var("l1") * t.var("l2")
        for i in (1, 2, 3, 4):
            xi = t.var(f"xi{i}")
            assert poisson_bracket(pi, xi, xi) == quad
        assert poisson_bracket(pi, t.var("xi1"), t.var("xi2")).is_zero()
        assert poisson_bracket(pi, t.var("z1"), t.var("l1")).is_zero()

    def test_derivation_in_second_slot(self):
        pi = p34_bivector()
        t = pi.table
        z2 = t.var("z2")
        got = poisson_bracket(pi, t.var("z1"), z2 * z2)
        assert got == 4 * t.var("l1") * t.var("l2") * z2

    def test_odd_bracket_table(self):
        t, pi = t1_mini()
        assert poisson_bracket(pi, t.var("x"), t.var("th1")) == t.var("w1")
        assert poisson_bracket(pi, t.var("th1"), t.var("x")) == -t.var("w1")

    def test_odd_bracket_shifted_leibniz_witness(self):
        # {x, th1*th2} = w1*th2 - w2*th1: the plain even-case Leibniz sign fails here
        t, pi = t1_mini()
        got = poisson_bracket(pi, t.var("x"), t.var("th1") * t.var("th2"))
        assert got == t.var("w1") * t.var("th2") - t.var("w2") * t.var("th1")

    def test_antisymmetry_samples(self):
        pi = p34_bivector()
        t = pi.table
        samples = [
            (t.var("z1"), t.var("z2")),
            (t.var("xi1"), t.var("xi1") * t.var("xi2") * t.var("xi3")),
            (t.var("z1") * t.var("xi1"), t.var("xi2")),
            (t.var("z1") * t.var("z2"), t.var("z2") * t.var("xi3") * t.var("xi4")),
        ]
        for f, g in samples:
            pf = 1 if f.parity() == ODD else 0
            pg = 1 if g.parity() == ODD else 0
            sign = -1 if (pf and pg) else 1
            rhs = poisson_bracket(pi, g, f).scale(-1 * sign)
            assert poisson_bracket(pi, f, g) == rhs

    def test_table_mismatch(self):
        pi = p34_bivector()
        other = VarTable.build(("q", EVEN))
        with pytest.raises(VariableMismatch):
            poisson_bracket(pi, other.var("q"), other.var("q"))


class TestSchouten:
    def test_constant_entries_bracket_to_zero(self):
        t = VarTable.build(("x1", EVEN), ("x2", EVEN), ("th1", ODD), ("th2", ODD))
        pi = SuperBivector(
            t, {("x1", "x2"): t.const(3), ("th1", "th2"): t.const(5), ("th1", "th1"): t.one()}
        )
        assert schouten_bracket(pi, pi).is_zero()
        assert is_poisson(pi)

    def test_central_coefficients_bracket_to_zero(self):
        pi = p34_bivector()
        assert is_poisson(pi)

    def test_noncentral_counterexample(self):
        # pi^{12} = 1, pi^{13} = z1 over three even variables:
        # [pi, pi] = -2 d1 ^ d2 ^ d3
        t = VarTable.build(("z1", EVEN), ("z2", EVEN), ("z3", EVEN))
        pi = SuperBivector(t, {("z1", "z2"): t.one(), ("z1", "z3"): t.var("z1")})
        tri = schouten_bracket(pi, pi)
        assert not tri.is_zero()
        assert tri.entry(0, 1, 2) == t.const(-2)
        assert set(tri.entries) == {(0, 1, 2)}
        assert not is_poisson(pi)

    def test_odd_parity_bivector_with_constants(self):
        _, pi = t1_mini()
        assert is_poisson(pi)

    def test_table_mismatch(self):
        pi = p34_bivector()
        t = VarTable.build(("q", EVEN), ("r", EVEN))
        other = SuperBivector(t, {("q", "r"): t.one()})
        with pytest.raises(VariableMismatch):
            schouten_bracket(pi, other)


class TestJacobiOnCoordinates:
    def test_p34_coordinate_triples(self):
        pi = p34_bivector()
        t = pi.table
        names = t.names()
        for na in names:
            for nb in names:
                for nc in names:
                    f, g, h = t.var(na), t.var(nb), t.var(nc)
                    pf = 1 if t.parity(na) == ODD else 0
                    pg = 1 if t.parity(nb) == ODD else 0
                    ph = 1 if t.parity(nc) == ODD else 0
                    total = (
                        poisson_bracket(pi, f, poisson_bracket(pi, g, h)).scale((-1) ** (pf * ph))
                        + poisson_bracket(pi, g, poisson_bracket(pi, h, f)).scale((-1) ** (pg * pf))
                        + poisson_bracket(pi, h, poisson_bracket(pi, f, g)).scale((-1) ** (ph * pg))
                    )
                    assert total.is_zero()
