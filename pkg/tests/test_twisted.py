from __future__ import annotations

import pytest

from ywkit.algebra import Signature, SuperPoly, make_gen
from ywkit.poisson import TruncatedYangian
from ywkit.representations import evaluation_module, tensor_modules
from ywkit.rmatrix import ThetaVector
from ywkit.twisted import (
    build_s,
    build_tau,
    classify_level_one,
    fold_quotient,
    invariant_form,
    verify_rsrs_on_module,
    verify_s_symmetry_classical,
    verify_s_symmetry_module,
    verify_tau,
    verify_twisted_bracket,
)

VALID = [(2, "plus"), (2, "minus"), (3, "plus")]


def _setup(N, cls, p=1, cap=None):
    theta = ThetaVector.from_class(Signature(N), cls)
    alg = TruncatedYangian(Signature(N), p, cap)
    tw = build_tau(theta, p)
    return theta, alg, tw


@pytest.mark.parametrize("N,cls", VALID)
def test_tau_is_involutive_automorphism(N, cls):
    _, alg, tw = _setup(N, cls)
    rep = verify_tau(tw, alg)
    assert rep.passed and len(rep.checks) == 2


def test_tau_automorphism_at_level_two():
    _, alg, tw = _setup(2, "minus", p=2)
    assert verify_tau(tw, alg).passed


def test_w_label_convention_is_not_an_automorphism():
    theta, alg, _ = _setup(2, "plus")
    rep = verify_tau(build_tau(theta, 1, "w-label"), alg)
    assert not rep.passed


def test_tau_image_of_e12():
    # tau(T_1^{12}) = (-1)^1 c(1,2) T_1^{bar2 bar1} = -T_1^{12} for theta_plus, N=2
    theta, _, tw = _setup(2, "plus")
    sig = theta.sig
    assert tw.image(make_gen(sig, 1, 1, 2)) == -SuperPoly.gen(make_gen(sig, 1, 1, 2))


def test_unknown_convention():
    with pytest.raises(ValueError):
        build_tau(ThetaVector.plus(Signature(2)), 1, "other")


@pytest.mark.parametrize("N,cls", VALID)
def test_twisted_bracket(N, cls):
    _, alg, tw = _setup(N, cls)
    s = build_s(alg, tw)
    assert s.max_level() <= 2
    assert verify_twisted_bracket(alg, s).passed


def test_twisted_bracket_sign_matters():
    _, alg, tw = _setup(2, "plus")
    assert not verify_twisted_bracket(alg, build_s(alg, tw), q_sign=-1).passed


@pytest.mark.parametrize("N,cls,dim", [(2, "plus", 1), (2, "minus", 3), (3, "plus", 3), (4, "plus", 6), (4, "minus", 10)])
def test_level_one_closure(N, cls, dim):
    _, alg, tw = _setup(N, cls, cap=1)
    rep = classify_level_one(alg, build_s(alg, tw))
    assert rep.passed
    assert rep.checks[0].details["dimension"] == dim


def test_invariant_form_symmetry():
    J = invariant_form(ThetaVector.minus(Signature(2)))
    assert J.transpose() == -J
    J = invariant_form(ThetaVector.plus(Signature(3)))
    assert J.transpose() == J


@pytest.mark.parametrize("N,cls,p", [(2, "plus", 1), (2, "minus", 1), (2, "plus", 2), (2, "minus", 2), (3, "plus", 1)])
def test_fold(N, cls, p):
    _, alg, tw = _setup(N, cls, p)
    fold, rep = fold_quotient(alg, tw)
    assert rep.passed, [c.to_json() for c in rep.failures()]
    assert len(rep.checks) == 5


def test_fold_rejects_odd_orthogonal_even_p():
    _, alg, tw = _setup(3, "plus", 2)
    with pytest.raises(ValueError):
        fold_quotient(alg, tw)


@pytest.mark.parametrize("cls,params", [("minus", [0]), ("plus", [0, 3]), ("minus", [0, 3]), ("plus", [1, -2])])
def test_rsrs_on_modules(cls, params):
    sig = Signature(2)
    theta = ThetaVector.from_class(sig, cls)
    m = tensor_modules(params, sig)
    assert verify_rsrs_on_module(m, theta).passed


@pytest.mark.parametrize("cls", ["plus", "minus"])
def test_rsrs_control_with_p_fails(cls):
    sig = Signature(2)
    m = tensor_modules([0, 3], sig)
    rep = verify_rsrs_on_module(m, ThetaVector.from_class(sig, cls), use_q=False)
    assert not rep.passed
    assert "monomial_xy" in rep.failures()[0].counterexample


def test_rsrs_unflipped_r_prime_fails():
    sig = Signature(2)
    m = tensor_modules([0, 3], sig)
    assert not verify_rsrs_on_module(m, ThetaVector.plus(sig), q_sign=1).passed


class TestSuper:
    sig = Signature(1, 2)

    def test_super_theta(self):
        theta = ThetaVector.plus(self.sig)
        assert theta.theta0 == 1 and theta.kind == "super"

    def test_tau(self):
        theta = ThetaVector.plus(self.sig)
        alg = TruncatedYangian(self.sig, 1)
        assert verify_tau(build_tau(theta, 1), alg).passed

    def test_symmetry_classical(self):
        theta = ThetaVector.plus(self.sig)
        alg = TruncatedYangian(self.sig, 1)
        s = build_s(alg, build_tau(theta, 1))
        assert verify_s_symmetry_classical(s).passed

    @pytest.mark.parametrize("a", [0, 3, "3/2"])
    def test_symmetry_on_evaluation_module(self, a):
        from ywkit.algebra import to_fraction
        m = evaluation_module(self.sig, to_fraction(a))
        assert verify_s_symmetry_module(m, ThetaVector.plus(self.sig)).passed

    def test_level_one_skipped_for_graded(self):
        theta = ThetaVector.plus(self.sig)
        alg = TruncatedYangian(self.sig, 1)
        rep = classify_level_one(alg, build_s(alg, build_tau(theta, 1)))
        assert rep.checks[0].status == "skipped"


def test_symmetry_relation_plain_classes():
    sig = Signature(2)
    m = tensor_modules([0, 3], sig)
    assert verify_s_symmetry_module(m, ThetaVector.plus(sig)).passed
    # the symplectic class picks up the opposite sign in the 1/(2u) term
    assert not verify_s_symmetry_module(m, ThetaVector.minus(sig)).passed
