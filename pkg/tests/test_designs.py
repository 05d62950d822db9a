import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fhsets.constructions import construct_3p, cyclotomic_bncrdp, multiplication_table_cdm
from fhsets.correlation import FhsSet, set_correlation
from fhsets.designs import (BlockFamily, Bncdp, Bncrdp, Cdm, bncdp_index, bncdp_to_fhs_set, difference_list,
                            external_counts, external_difference_list, fhs_set_to_bncdp, homogenize_cdm,
                            internal_counts, is_partition, normalize_cdm, verify_bncdp, verify_bncrdp, verify_cdm,
                            verify_cdp)
from fhsets.exceptions import InvalidInputError

import oracles
from test_correlation import fhs_sets


def fam(n, *blocks, partition=False):
    return BlockFamily(n, tuple(blocks), partition)


def test_perfect_difference_set_in_z7():
    assert verify_cdp(fam(7, (0, 1, 3)), 1)


def test_repeated_difference_fails_with_lowest_residue_witness():
    check = verify_cdp(fam(4, (0, 1), (2, 3)), 1)
    assert not check
    assert check.max_count == 2 and check.residue == 1


def test_partition_claim_is_checked():
    check = verify_cdp(fam(5, (0, 1), (3,), partition=True), 5)
    assert not check and "uncovered" in check.reason


def test_difference_list_sizes():
    assert sum(difference_list((0, 2, 5, 6), 11).values()) == 12
    assert sum(external_difference_list((0, 2), (1, 4, 9), 11).values()) == 6


@settings(max_examples=50)
@given(st.integers(2, 30), st.data())
def test_vectorized_counts_match_counters(n, data):
    elems = st.lists(st.integers(0, n - 1), unique=True, max_size=min(n, 6))
    blocks = [tuple(b) for b in data.draw(st.lists(elems, min_size=1, max_size=5))]
    others = [tuple(b) for b in data.draw(st.lists(elems, min_size=len(blocks), max_size=len(blocks)))]
    want = sum((oracles.differences(b, n) for b in blocks), start=oracles.Counter())
    got = internal_counts(blocks, n)
    assert all(got[r] == want.get(r, 0) for r in range(n))
    want_e = sum((oracles.external(a, b, n) for a, b in zip(blocks, others)), start=oracles.Counter())
    got_e = external_counts(blocks, others, n)
    assert all(got_e[r] == want_e.get(r, 0) for r in range(n))


def test_three_p_packing_verifies_at_four():
    d = construct_3p(13).bncdp
    assert verify_bncdp(d, 4)
    assert not verify_bncdp(d, 3)


def test_perturbed_three_p_packing_fails():
    d = construct_3p(13).bncdp
    first = list(d.families[0].blocks)
    a, b = first[0], first[1]
    # move one element between two blocks: still a partition, but the differences break
    first[0] = a[1:] + (b[0],)
    first[1] = (a[0],) + b[1:]
    broken = Bncdp(d.modulus, (BlockFamily(d.modulus, tuple(first), True), d.families[1]), 4)
    assert not verify_bncdp(broken)


def test_single_family_packing_reduces_to_cdp():
    f = fam(7, (0, 1, 3), (2,), (4, 5, 6), partition=True)
    for lam in (1, 2):
        assert bool(verify_bncdp(Bncdp(7, (f,)), lam)) == bool(verify_cdp(f, lam))


def test_mismatched_family_sizes_are_rejected():
    with pytest.raises(InvalidInputError):
        verify_bncdp(Bncdp(5, (fam(5, (0,), (1, 2, 3, 4)), fam(5, (0, 1, 2, 3, 4)))), 5)


def test_cyclotomic_relative_packing_verifies():
    d = cyclotomic_bncrdp(5, 2)
    assert verify_bncrdp(d, 2)
    assert d.subgroup() == [0]


def test_three_p_relative_packing_and_restored_axis():
    r = construct_3p(13).bncrdp
    assert r.m == 13 and r.g == 3
    assert verify_bncrdp(r, 4)
    with_axis = Bncrdp(r.modulus, r.m, tuple(BlockFamily(r.modulus, f.blocks + ((0, 13, 26),)) for f in r.families),
                       4, partition=False)
    check = verify_bncrdp(with_axis)
    assert not check and "forbidden" in check.reason


def test_relative_packing_needs_divisor():
    with pytest.raises(InvalidInputError):
        Bncrdp(15, 4, (fam(15, (1,)),), 1)


def test_multiplication_table_of_z5():
    D = multiplication_table_cdm(5)
    assert verify_cdm(D)
    N = normalize_cdm(D)
    assert N.normalized and verify_cdm(N)
    H = homogenize_cdm(N)
    assert H.rows == 4 and H.homogeneous and verify_cdm(H)
    assert H.entries[0] == (0, 1, 2, 3, 4)
    assert all(sorted(r) == list(range(5)) for r in H.entries)


def test_normalize_subtracts_first_row():
    D = Cdm(5, ((1, 1, 1, 1, 1), (1, 2, 3, 4, 0)))
    assert normalize_cdm(D).entries == ((0, 0, 0, 0, 0), (0, 1, 2, 3, 4))


def test_mutated_matrix_fails_and_is_refused():
    rows = [list(r) for r in multiplication_table_cdm(7).entries]
    rows[3][2] = (rows[3][2] + 1) % 7
    D = Cdm(7, tuple(map(tuple, rows)))
    assert not verify_cdm(D)
    with pytest.raises(InvalidInputError):
        normalize_cdm(D)


def test_homogeneous_flag_needs_permutation_rows():
    # rows differ by a permutation but neither row is one
    D = Cdm(3, ((0, 0, 1), (0, 1, 0)), homogeneous=True)
    assert verify_cdm(Cdm(3, D.entries)).ok == (sorted((b - a) % 3 for a, b in zip(*D.entries)) == [0, 1, 2])
    assert not verify_cdm(D)


def test_sequence_to_blocks():
    d = fhs_set_to_bncdp(FhsSet.from_rows([[0, 1, 0]], 2))
    assert d.families[0].blocks == ((0, 2), (1,))


def test_round_trip_on_three_p_set():
    s = construct_3p(13).fhs_set
    assert bncdp_to_fhs_set(fhs_set_to_bncdp(s)) == s


def test_non_partition_family_cannot_become_a_set():
    with pytest.raises(InvalidInputError):
        bncdp_to_fhs_set(Bncdp(4, (fam(4, (0, 1), (2,)),)))


@settings(max_examples=60)
@given(fhs_sets(max_n=16))
def test_correlation_bound_iff_packing_verifies(s):
    h = set_correlation(s).value
    d = fhs_set_to_bncdp(s)
    assert bncdp_index(d) == h
    for lam in (h - 1, h, h + 1):
        if lam >= 0:
            assert bool(verify_bncdp(d, lam)) == (h <= lam)


@settings(max_examples=30)
@given(fhs_sets(max_n=10))
def test_packing_index_matches_counter_oracle(s):
    d = fhs_set_to_bncdp(s)
    assert bncdp_index(d) == oracles.packing_index([f.blocks for f in d.families], s.n)


def test_partition_helper():
    assert is_partition(fam(4, (0, 2), (1, 3)))
    assert not is_partition(fam(4, (0, 2), (1,)))


def test_repeated_element_in_block_is_rejected():
    with pytest.raises(InvalidInputError):
        fam(5, (1, 1))


def test_counts_are_int_arrays():
    assert internal_counts([(0, 1)], 3).dtype == np.int64
