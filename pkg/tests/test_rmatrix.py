from __future__ import annotations

from fractions import Fraction

import pytest

from ywkit.algebra import RingMatrix, Signature, kron
from ywkit.rmatrix import (
    SpectralMatrix,
    ThetaVector,
    build_classical_r,
    build_classical_r_primed,
    build_permutation,
    build_primed_r,
    build_q_tensor,
    build_rational_r,
    check_classical_ybe,
    check_q_from_tau,
    check_unitarity,
    check_ybe,
)

SIGS = ["2", "3", "4", "1|1", "2|1", "1|2"]


def test_permutation_n2():
    P = build_permutation(Signature(2))
    assert P.to_dense() == [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]


def test_permutation_squares_to_identity():
    for s in SIGS:
        P = build_permutation(Signature.parse(s))
        assert P @ P == RingMatrix.identity(P.dim)


def test_r_at_one():
    R1 = build_rational_r(Signature(2)).evaluate(1)
    assert R1.to_dense() == [[0, 0, 0, 0], [0, 1, -1, 0], [0, -1, 1, 0], [0, 0, 0, 0]]


def test_pole_at_zero():
    with pytest.raises(ZeroDivisionError):
        build_rational_r(Signature(2)).evaluate(0)


@pytest.mark.parametrize("sig", SIGS)
def test_ybe(sig):
    assert check_ybe(build_rational_r(Signature.parse(sig))).passed


@pytest.mark.parametrize("sig", ["2", "3", "4"])
def test_unitarity(sig):
    assert check_unitarity(build_rational_r(Signature.parse(sig))).passed


@pytest.mark.parametrize("sig", SIGS)
def test_classical_ybe(sig):
    assert check_classical_ybe(build_classical_r(Signature.parse(sig))).passed


def test_doubled_flip_is_a_rescaling():
    # I - 2P/x = R(x/2) still solves YBE, so it cannot serve as a control
    sig = Signature(2)
    R = SpectralMatrix(sig, 2, {1: RingMatrix.identity(4), 0: build_permutation(sig) * -2}, {1: Fraction(1)})
    assert check_ybe(R).passed


@pytest.mark.parametrize("sig", ["2", "3", "1|1"])
def test_mutated_r_fails_with_located_entry(sig):
    sig = Signature.parse(sig)
    d = sig.total
    bump = kron(RingMatrix.unit(d, 1, 1), RingMatrix.unit(d, 2, 2))
    R = SpectralMatrix(sig, 2, {1: RingMatrix.identity(d * d), 0: -(build_permutation(sig) + bump)},
                       {1: Fraction(1)})
    rep = check_ybe(R)
    assert not rep.passed
    assert "entry" in rep.failures()[0].counterexample


class TestTheta:
    def test_plus_n2(self):
        Q = build_q_tensor(ThetaVector.plus(Signature(2)))
        expected = sum((kron(RingMatrix.unit(2, i, j), RingMatrix.unit(2, 3 - i, 3 - j))
                        for i in (1, 2) for j in (1, 2)), RingMatrix.zeros(4))
        assert Q == expected

    def test_minus_n2_signs(self):
        theta = ThetaVector.minus(Signature(2))
        assert theta.theta == (1, -1) and theta.theta0 == -1
        Q = build_q_tensor(theta)
        for i in (1, 2):
            for j in (1, 2):
                v = Q.entry((i - 1) * 2 + 2 - i, (j - 1) * 2 + 2 - j)
                assert v == theta.t(i) * theta.t(j)

    def test_minus_needs_even_n(self):
        with pytest.raises(ValueError):
            ThetaVector.minus(Signature(3))

    def test_super_needs_even_odd_block(self):
        with pytest.raises(ValueError):
            ThetaVector.plus(Signature(1, 1))
        assert ThetaVector.plus(Signature(1, 2)).kind == "super"

    @pytest.mark.parametrize("sig,cls", [("2", "plus"), ("2", "minus"), ("3", "plus"), ("4", "minus"), ("1|2", "plus")])
    def test_transpose_is_involutive_antihomomorphism(self, sig, cls):
        theta = ThetaVector.from_class(Signature.parse(sig), cls)
        d = theta.sig.total
        a = RingMatrix.unit(d, 1, 2) + RingMatrix.unit(d, 2, 2) * 3
        b = RingMatrix.unit(d, 2, 1) - RingMatrix.unit(d, 1, 1)
        t = theta.matrix_transpose
        if not theta.sig.graded:
            assert t(t(a)) == a
            assert t(a @ b) == t(b) @ t(a)

    @pytest.mark.parametrize("sig,cls", [("2", "plus"), ("2", "minus"), ("3", "plus"), ("4", "minus"), ("1|2", "plus")])
    def test_q_is_transposed_flip(self, sig, cls):
        assert check_q_from_tau(ThetaVector.from_class(Signature.parse(sig), cls))

    def test_primed_r(self):
        theta = ThetaVector.plus(Signature(2))
        R = build_primed_r(theta).evaluate(2)
        assert R == RingMatrix.identity(4) - build_q_tensor(theta) * Fraction(1, 2)
        assert build_classical_r_primed(theta).evaluate(1) == build_q_tensor(theta)
