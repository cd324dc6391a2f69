from __future__ import annotations

from fractions import Fraction

import pytest

from ywkit.drinfeld import PIECES, fit_drinfeld_level_one


@pytest.fixture(scope="module")
def sl3():
    return fit_drinfeld_level_one(3)


def test_cubic_identity_fits(sl3):
    fit, rep = sl3
    assert fit.identity == "cubic" and fit.ok and rep.passed
    (sol,) = fit.solutions
    assert sol["g_T1T1"] == Fraction(-1, 2)
    assert sol["lam"] == Fraction(1, 4)
    # the trace shift only moves Q1 by a central term
    assert sol["g_c1Q0"] is None


def test_cubic_needs_a_quadratic_correction():
    fit, rep = fit_drinfeld_level_one(3, ("T2",))
    assert not fit.ok and not rep.passed
    assert fit.residual is not None


def test_quartic_identity_fits():
    fit, rep = fit_drinfeld_level_one(2)
    assert fit.identity == "quartic" and rep.passed
    assert all(s["lam"] == Fraction(1, 4) for s in fit.solutions)


def test_quartic_pure_level_two():
    fit, _ = fit_drinfeld_level_one(2, ("T2",))
    assert fit.ok


def test_rejects_n1():
    with pytest.raises(ValueError):
        fit_drinfeld_level_one(1, PIECES)
