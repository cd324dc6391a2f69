from __future__ import annotations

from fractions import Fraction

import pytest

from ywkit.algebra import RingMatrix
from ywkit.nls import (
    build_sector,
    exchange_normal_form,
    exchange_operator,
    verify_path_independence,
    verify_symmetry,
    verify_truncation_on_sector,
)


def test_sector_dimensions():
    assert build_sector([], 2).dim == 1
    assert build_sector([0, 3], 2).dim == 4


def test_equal_momenta_rejected():
    with pytest.raises(ValueError):
        build_sector([1, 1], 2)
    with pytest.raises(ValueError):
        exchange_normal_form([Fraction(1), Fraction(1)], 2)


def test_sorted_word_unchanged():
    assert exchange_normal_form([0, 1, 5], 2) == RingMatrix.identity(8)


def test_exchange_is_unitary():
    a, b = Fraction(0), Fraction(3)
    E = exchange_operator(a, b, 2)
    back = exchange_operator(b, a, 2)
    # swapping twice returns the original word up to the factor (1 - 1/x^2)
    assert back @ E == RingMatrix.identity(4, 1 - Fraction(1, 9))


@pytest.mark.parametrize("momenta", [[0, 3], [0, 1, 5], [0, Fraction(1, 2), 2, 7]])
def test_path_independence(momenta):
    assert verify_path_independence(build_sector(momenta, 2)).passed


def test_path_independence_n3_gl3():
    assert verify_path_independence(build_sector([0, 2, 5], 3)).passed


@pytest.mark.parametrize("momenta,m_max", [([0, 3], 3), ([0, 1, 5], 3), ([4], 3), ([], 3)])
def test_symmetry(momenta, m_max):
    rep = verify_symmetry(build_sector(momenta, 2), m_max)
    assert rep.passed, [c.to_json() for c in rep.failures()]


def test_dropping_f_term_breaks_descent():
    rep = verify_symmetry(build_sector([0, 3], 2), 3, f_term=False)
    failed = [c.name for c in rep.failures()]
    assert failed and all(n.startswith("descent-without-f-term") for n in failed)


@pytest.mark.parametrize("momenta", [[7], [0, 3], [0, 1, 5]])
def test_sector_is_truncated_module(momenta):
    rep = verify_truncation_on_sector(build_sector(momenta, 2))
    assert rep.passed
    coeffs = next(c for c in rep.checks if c.name.startswith("charge-dictionary")).details["coefficients"]
    if len(momenta) >= 2:
        assert coeffs["Q1:T1T1"] == Fraction(-1, 2)
