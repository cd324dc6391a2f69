from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ywkit.algebra import (
    NotDivisibleError,
    Poly,
    RingMatrix,
    Signature,
    SuperPoly,
    divide_exact,
    divide_exact_matrix,
    graded_tensor,
    kron,
    make_gen,
    matrix_rank,
    nullspace,
    solve_linear,
    to_fraction,
)

SIG = Signature(1, 2)
GENS = [make_gen(SIG, n, i, j) for n in (1, 2) for i in (1, 2, 3) for j in (1, 2, 3)]

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def superpolys(draw, max_terms: int = 3):
    out = SuperPoly.const(draw(rationals))
    for _ in range(draw(st.integers(0, max_terms))):
        mono = SuperPoly.const(draw(rationals))
        for g in draw(st.lists(st.sampled_from(GENS), max_size=3)):
            mono = mono * SuperPoly.gen(g)
        out = out + mono
    return out


@st.composite
def small_matrices(draw, dim: int = 3):
    entries = {}
    for _ in range(draw(st.integers(0, 5))):
        entries[(draw(st.integers(0, dim - 1)), draw(st.integers(0, dim - 1)))] = draw(rationals)
    return RingMatrix(dim, entries)


class TestSignature:
    @pytest.mark.parametrize("text,expected", [("2", (2, 0)), ("1|1", (1, 1)), (" 2 | 1 ", (2, 1)), (3, (3, 0))])
    def test_parse(self, text, expected):
        sig = Signature.parse(text)
        assert (sig.m, sig.n) == expected

    @pytest.mark.parametrize("bad", ["2|−1", "2|-1", "x", "", "0", "0|0", "1|2|3"])
    def test_malformed(self, bad):
        with pytest.raises(ValueError):
            Signature.parse(bad)

    def test_parities(self):
        sig = Signature(2, 1)
        assert [sig.parity(i) for i in sig.indices()] == [0, 0, 1]
        assert str(sig) == "2|1" and str(Signature(3)) == "3"


def test_to_fraction_rejects_floats():
    assert to_fraction("3/4") == Fraction(3, 4)
    with pytest.raises(TypeError):
        to_fraction(0.5)


class TestSuperPoly:
    def test_odd_square_vanishes(self):
        odd = make_gen(SIG, 1, 1, 2)
        assert odd.parity == 1
        assert not SuperPoly.gen(odd) * SuperPoly.gen(odd)

    def test_even_generators_commute(self):
        g1, g2 = make_gen(SIG, 1, 1, 1), make_gen(SIG, 1, 2, 3)
        assert SuperPoly.gen(g2) * SuperPoly.gen(g1) == SuperPoly.gen(g1) * SuperPoly.gen(g2)

    def test_odd_generators_anticommute(self):
        a, b = make_gen(SIG, 1, 1, 2), make_gen(SIG, 2, 3, 1)
        assert SuperPoly.gen(b) * SuperPoly.gen(a) == -(SuperPoly.gen(a) * SuperPoly.gen(b))

    def test_level_zero_rejected(self):
        with pytest.raises(ValueError):
            make_gen(SIG, 0, 1, 1)

    @settings(max_examples=60, deadline=None)
    @given(superpolys(), superpolys(), superpolys())
    def test_ring_axioms(self, x, y, z):
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x + y == y + x
        assert x - x == SuperPoly.zero()

    @settings(max_examples=60, deadline=None)
    @given(superpolys(), superpolys())
    def test_graded_commutativity(self, x, y):
        # homogeneous parts supercommute
        def parts(p):
            even = SuperPoly({m: c for m, c in p.terms.items() if sum(g.parity for g in m) % 2 == 0})
            return even, p - even
        xe, xo = parts(x)
        ye, yo = parts(y)
        assert xe * y == y * xe
        assert xo * yo == -(yo * xo)

    @settings(max_examples=40, deadline=None)
    @given(superpolys())
    def test_truncate_drops_high_levels(self, x):
        t = x.truncate(1)
        assert all(g.level <= 1 for g in t.generators())
        assert t.truncate(1) == t


class TestPolyDivision:
    def test_cancel_common_factor(self):
        u, v = Poly.var(2, 0), Poly.var(2, 1)
        assert divide_exact(u * u - v * v, u - v) == u + v

    def test_matrix_division(self):
        u, v = Poly.var(2, 0), Poly.var(2, 1)
        M = RingMatrix(2, {(0, 1): (u - v) * 3, (1, 0): (u - v) * u})
        assert divide_exact_matrix(M, u - v) == RingMatrix(2, {(0, 1): Poly.const(2, 3), (1, 0): u})

    def test_not_divisible(self):
        u, v = Poly.var(2, 0), Poly.var(2, 1)
        with pytest.raises(NotDivisibleError):
            divide_exact(Poly.const(2, 1), u - v)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(rationals, min_size=1, max_size=4), rationals)
    def test_product_divides(self, coeffs, shift):
        u, v = Poly.var(2, 0), Poly.var(2, 1)
        pa = Poly.const(2, 1)
        for c in coeffs:
            pa = pa * u + v * c
        pb = u - v * 2 + Poly.const(2, shift)
        assert divide_exact(pa * pb, pb) == pa


class TestRingMatrix:
    def test_kron_units(self):
        E12, E21 = RingMatrix.unit(2, 1, 2), RingMatrix.unit(2, 2, 1)
        assert kron(E12, E21) == RingMatrix.unit(4, 2, 3)
        assert graded_tensor(E12, E21, Signature(2)) == kron(E12, E21)

    def test_identity_tensor(self):
        assert kron(RingMatrix.identity(2), RingMatrix.identity(3)) == RingMatrix.identity(6)

    def test_graded_sign(self):
        sig = Signature(1, 1)
        E12 = RingMatrix.unit(2, 1, 2)
        E22 = RingMatrix.unit(2, 2, 2)
        assert graded_tensor(E12, E22, sig) == -kron(E12, E22)
        assert graded_tensor(E22, E12, sig) == kron(E22, E12)

    @settings(max_examples=50, deadline=None)
    @given(small_matrices(), small_matrices(), small_matrices(2), small_matrices(2))
    def test_mixed_product(self, a, b, c, d):
        assert kron(a, c) @ kron(b, d) == kron(a @ b, c @ d)

    @settings(max_examples=50, deadline=None)
    @given(small_matrices(), small_matrices())
    def test_commutator_antisymmetric(self, a, b):
        assert a.commutator(b) == -b.commutator(a)
        assert (a @ b).transpose() == b.transpose() @ a.transpose()


class TestLinearAlgebra:
    def test_solve_unique(self):
        sol, free = solve_linear([({"x": 1, "y": 1}, 3), ({"x": 1, "y": -1}, 1)], ["x", "y"])
        assert sol == {"x": 2, "y": 1} and free == []

    def test_solve_inconsistent(self):
        sol, _ = solve_linear([({"x": 1}, 1), ({"x": 2}, 3)], ["x"])
        assert sol is None

    def test_solve_free(self):
        sol, free = solve_linear([({"x": 1, "y": 1}, 2)], ["x", "y"])
        assert sol is not None and len(free) == 1

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.dictionaries(st.sampled_from("abcd"), rationals, max_size=4), max_size=4))
    def test_nullspace_is_annihilated(self, rows):
        basis = nullspace(rows, list("abcd"))
        for vec in basis:
            for row in rows:
                assert sum(row.get(k, 0) * vec.get(k, 0) for k in "abcd") == 0
        dense = RingMatrix(4, {(r, "abcd".index(k)): v for r, row in enumerate(rows) for k, v in row.items() if v})
        assert len(basis) == 4 - matrix_rank(dense)
