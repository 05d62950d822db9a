import pytest
from hypothesis import given, strategies as st

from fhsets.bounds import (LG, PF_FIRST, PF_SECOND, classify, classify_parameters, lempel_greenberger, peng_fan,
                           simplified_lempel_greenberger, simplified_peng_fan)
from fhsets.correlation import FhsSet, set_correlation
from fhsets.exceptions import InvalidInputError, NotApplicableError

import oracles


def test_lempel_greenberger_values():
    assert lempel_greenberger(6, 4) == 1
    assert lempel_greenberger(15, 4) == 3
    assert lempel_greenberger(7, 7) == 0


def test_simplified_lempel_greenberger():
    assert simplified_lempel_greenberger(7, 7) == 0
    assert simplified_lempel_greenberger(30, 4) == 7


def test_peng_fan_values():
    assert peng_fan(15, 2, 4) == (4, 4)
    assert peng_fan(195, 2, 49)[1] == 4
    assert peng_fan(72, 2, 9) == (8, 8)


def test_simplified_peng_fan_needs_two_sequences():
    with pytest.raises(NotApplicableError):
        simplified_peng_fan(15, 1, 4)


@given(st.integers(2, 300), st.integers(1, 300))
def test_lempel_greenberger_matches_fraction_oracle(n, l):
    assert lempel_greenberger(n, l) == oracles.lempel_greenberger(n, l)


@given(st.integers(1, 300), st.integers(1, 10), st.integers(1, 300))
def test_peng_fan_matches_fraction_oracle(n, M, l):
    if n * M < 2:
        return
    assert peng_fan(n, M, l) == oracles.peng_fan(n, M, l)


@given(st.integers(1, 400), st.integers(2, 12), st.integers(1, 400))
def test_simplified_equals_second_bound(n, M, l):
    if l > n:
        return
    assert simplified_peng_fan(n, M, l).bound == peng_fan(n, M, l)[1]


def test_seventy_two_point_is_not_optimal():
    v = classify_parameters(72, 2, 9, 9)
    assert not v.optimal
    assert v.classification == "not-optimal"


def test_optimal_by_lists_bounds_met():
    v = classify_parameters(15, 2, 4, 4)
    assert v.optimal_by == (PF_FIRST, PF_SECOND)
    assert classify_parameters(30, 1, 15, 2).optimal_by == (LG,)


def test_measurement_below_bound_is_an_error():
    with pytest.raises(InvalidInputError):
        classify_parameters(15, 2, 4, 3)


def test_single_sequence_over_whole_alphabet():
    s = FhsSet.from_rows([list(range(7))], 7)
    v = classify(s, set_correlation(s))
    assert v.measured == 0 and v.optimal


def test_constant_sequences_are_not_optimal():
    s = FhsSet.from_rows([[0] * 8, [1] * 8], 2)
    v = classify(s, set_correlation(s))
    assert v.measured == 8 and not v.optimal


def test_verdict_serializes():
    d = classify_parameters(15, 2, 4, 4).as_dict()
    assert d["simplified"] == {"k": 3, "eps": 3, "bound": 4}
    assert d["optimal"] is True
