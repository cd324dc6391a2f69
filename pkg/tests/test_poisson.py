from __future__ import annotations

import pytest

from ywkit.algebra import Signature, SuperPoly, make_gen
from ywkit.poisson import (
    TruncatedYangian,
    classical_det,
    gl_data,
    sl_data,
    verify_adjoint_presentation,
    verify_antisymmetry,
    verify_center,
    verify_jacobi,
    verify_truncation_ideal,
)

CASES = [("2", 1), ("2", 2), ("3", 1), ("1|1", 1)]


@pytest.fixture(scope="module", params=CASES, ids=lambda c: f"{c[0]}-p{c[1]}")
def alg(request):
    sig, p = request.param
    return TruncatedYangian(Signature.parse(sig), p)


def test_generator_count(alg):
    assert alg.generator_count == alg.p * alg.sig.total ** 2 == len(alg.generators)


def test_antisymmetry(alg):
    assert verify_antisymmetry(alg).passed


def test_jacobi_both_modes(alg):
    rep = verify_jacobi(alg)
    assert rep.passed and len(rep.checks) == 2


def test_truncation_ideal(alg):
    assert verify_truncation_ideal(alg).passed


def test_adjoint(alg):
    assert verify_adjoint_presentation(alg).passed


def test_level_one_is_gl2():
    sig = Signature(2)
    alg = TruncatedYangian(sig, 1)
    e12, e21 = make_gen(sig, 1, 1, 2), make_gen(sig, 1, 2, 1)
    h = SuperPoly.gen(make_gen(sig, 1, 1, 1)) - SuperPoly.gen(make_gen(sig, 1, 2, 2))
    assert alg.bracket_gens(e12, e21) == h


def test_odd_brackets_are_symmetric():
    sig = Signature(1, 1)
    alg = TruncatedYangian(sig, 1)
    a, b = make_gen(sig, 1, 1, 2), make_gen(sig, 1, 2, 1)
    assert a.parity == b.parity == 1
    assert alg.bracket_gens(a, b) == alg.bracket_gens(b, a)


def test_bracket_beyond_cap_raises():
    sig = Signature(2)
    alg = TruncatedYangian(sig, 1, cap=1)
    with pytest.raises(KeyError):
        alg.bracket_gens(make_gen(sig, 2, 1, 1), make_gen(sig, 1, 1, 2))


def test_invalid_p():
    with pytest.raises(ValueError):
        TruncatedYangian(Signature(2), 0)


def test_perturbed_table_fails_jacobi():
    sig = Signature(2)
    alg = TruncatedYangian(sig, 1)
    table = dict(alg.table)
    g, h = make_gen(sig, 1, 1, 1), make_gen(sig, 1, 1, 2)
    table[(g, h)] = table[(g, h)] + SuperPoly.gen(g)
    table[(h, g)] = table[(h, g)] - SuperPoly.gen(g)
    rep = verify_jacobi(alg.with_table(table), modes=("truncated",))
    assert not rep.passed
    assert "triple" in rep.failures()[0].counterexample


@pytest.mark.parametrize("data", [gl_data(Signature(3)), gl_data(Signature(2, 1)), sl_data(3)],
                         ids=["gl3", "gl2|1", "sl3"])
def test_lie_data_consistent(data):
    assert data.check_antisymmetry() and data.check_jacobi()


@pytest.mark.parametrize("N,p", [(1, 2), (2, 1), (2, 2)])
def test_center(N, p):
    alg = TruncatedYangian(Signature(N), p)
    c = classical_det(alg)
    assert len(c) == N * p
    assert verify_center(alg, c).passed


def test_center_needs_plain_signature():
    with pytest.raises(ValueError):
        classical_det(TruncatedYangian(Signature(1, 1), 1))


def test_non_central_element_detected():
    alg = TruncatedYangian(Signature(2), 1)
    bogus = classical_det(alg)
    bogus.coefficients[0] = SuperPoly.gen(make_gen(alg.sig, 1, 1, 1))
    rep = verify_center(alg, bogus)
    assert not rep.passed
