from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ywkit.algebra import RingMatrix, Signature
from ywkit.representations import (
    HighestWeightSeries,
    ModuleData,
    TelescopingError,
    UnsupportedInputError,
    _telescope,
    check_rtt,
    check_truncation,
    commutant_dimension,
    direct_sum,
    drinfeld_from_weights,
    evaluation_module,
    extract_highest_weight,
    irreducibility,
    irreducibility_sweep,
    skron,
    tensor_modules,
    trivial_module,
    verify_round_trip,
    weights_from_drinfeld,
)

F = Fraction


def test_koszul_product_plain_is_kron():
    X = RingMatrix.unit(2, 1, 2)
    Y = RingMatrix.unit(2, 2, 1)
    from ywkit.algebra import kron
    assert skron(X, [0, 0], Y, [0, 0]) == kron(X, Y)


@pytest.mark.parametrize("sig", ["2", "3", "1|1", "2|1", "1|2"])
def test_evaluation_rtt(sig):
    m = evaluation_module(Signature.parse(sig), F(5, 2))
    assert check_rtt(m).passed


@pytest.mark.parametrize("N,params", [(2, [0, 5]), (2, [0, F(7, 3), 5]), (3, [0, 5]), (3, [F(1, 2), 4, -3])])
def test_tensor_rtt_and_truncation(N, params):
    m = tensor_modules(params, Signature(N))
    assert m.dim == N ** len(params)
    assert check_rtt(m).passed
    assert check_truncation(m).passed
    assert m.max_level() == len(params)


def test_graded_tensor_rtt():
    assert check_rtt(tensor_modules([0, 3], Signature(1, 1))).passed


def test_broken_module_fails_rtt():
    m = evaluation_module(Signature(2), 0)
    modes = dict(m.modes)
    modes[(1, 1, 2)] = modes[(1, 1, 2)] * 2
    assert not check_rtt(ModuleData(m.sig, m.dim, m.p, modes)).passed


class TestHighestWeight:
    def test_evaluation_weights(self):
        hw = extract_highest_weight(evaluation_module(Signature(2)))
        assert hw.mu == [[1, 1], [1, 0]]
        assert drinfeld_from_weights(hw, 1).roots == [[0]]

    def test_ratio_u_plus_one_over_u(self):
        assert _telescope([F(-1)], [F(0)]) == [0]

    def test_trivial_ratios(self):
        hw = extract_highest_weight(trivial_module(Signature(3), [2, 1]))
        datum = drinfeld_from_weights(hw, 2)
        assert datum.roots == [[], []] and datum.degrees == [0, 0]

    def test_parameters_0_5(self):
        m = tensor_modules([0, 5], Signature(2))
        datum = drinfeld_from_weights(extract_highest_weight(m), 2)
        assert datum.roots == [[0, 5]]
        assert datum.degrees == [2] and datum.within_bound

    def test_unbalanced_ratio(self):
        with pytest.raises(TelescopingError):
            _telescope([F(0)], [F(1, 2)])

    def test_irrational_roots_rejected(self):
        hw = HighestWeightSeries([[F(1), F(3), F(-1)], [F(1), F(0), F(0)]], {0: F(1)}, 1)
        with pytest.raises(UnsupportedInputError):
            drinfeld_from_weights(hw, 2)

    def test_not_cyclic(self):
        hw = extract_highest_weight(direct_sum(evaluation_module(Signature(2)), evaluation_module(Signature(2))))
        assert not hw.ok and hw.kernel_dim == 2
        with pytest.raises(ValueError):
            drinfeld_from_weights(hw, 1)

    def test_weights_rebuilt(self):
        assert weights_from_drinfeld([[F(0)]], [F(0)]) == [[1, 1], [1, 0]]


@pytest.mark.parametrize("N,params", [(2, [0, 5]), (2, [F(-2), F(1, 3), 4]), (3, [0, 5]), (3, [F(1, 2), 4, -3])])
def test_round_trip(N, params):
    rep = verify_round_trip(Signature(N), params)
    assert rep.passed, [c.to_json() for c in rep.failures()]
    assert any(c.name.startswith("ratio-formula") for c in rep.checks)


@settings(max_examples=8, deadline=None)
@given(st.lists(st.fractions(min_value=-6, max_value=6, max_denominator=4), min_size=1, max_size=2, unique=True))
def test_round_trip_random_y2(params):
    assert verify_round_trip(Signature(2), params).passed


class TestIrreducibility:
    def test_evaluation_module(self):
        assert irreducibility(evaluation_module(Signature(3), 2)) == (True, 1)

    def test_direct_sum(self):
        m = evaluation_module(Signature(2))
        assert commutant_dimension(direct_sum(m, m), stop_at_one=False) >= 4

    def test_sweep(self):
        points = irreducibility_sweep(Signature(2), 0, [2, 3, F(1, 2), 5, -4, 1, -1])
        generic = [pt for pt in points if not pt.degenerate]
        assert len(generic) >= 5
        assert all(pt.commutant == 1 and pt.irreducible for pt in generic)
        special = [pt for pt in points if pt.degenerate]
        assert special and not any(pt.irreducible for pt in special)


def test_module_json_round_trip():
    m = tensor_modules([0, F(7, 3)], Signature(2))
    data = json.loads(json.dumps(m.to_json()))
    back = ModuleData.from_json(data)
    assert back.dim == m.dim and back.params == m.params
    assert all(back.mode(*k) == v for k, v in m.modes.items())
