from fractions import Fraction

import numpy as np
import pytest

from mds_pir.codes import (
    FAMILY_CUSTOM, FAMILY_EXPANDED_PARITY, FAMILY_JOINT_2N2, FAMILY_JOINT_PARITY, build_expanded_2n2,
    build_expanded_parity, build_joint_2n2, build_joint_parity, verify_mds
)
from mds_pir.errors import ParameterError, UnsupportedFamilyError
from mds_pir.gf import make_field
from mds_pir.schemes import make_scheme
from mds_pir.utils import as_int_array, make_rng
from mds_pir.verification import (
    barrier_report, barrier_sweep, capacity_separate, capacity_separate_closed_form, check_correctness, check_privacy,
    oracle_mds_injectivity, oracle_privacy_transcript, sweep_summary
)


def test_privacy_shipped_schemes(table_one_scheme, parity_code):
    for scheme in (table_one_scheme, make_scheme(parity_code), make_scheme(build_expanded_parity(2, 2))):
        report = check_privacy(scheme)
        assert report.ok
        assert report.first_violation is None
        assert len(report.per_db_distributions) == scheme.params.N


def test_privacy_rejects_non_private_table(non_private_scheme):
    report = check_privacy(non_private_scheme)
    assert not report.ok
    assert report.first_violation == (1, 1, 2)
    assert report.per_db_distributions[0][1] == {0: 3}
    assert not oracle_privacy_transcript(non_private_scheme)


def test_privacy_transcript_oracle(table_one_scheme, parity_code):
    assert oracle_privacy_transcript(table_one_scheme, seed=3)
    assert oracle_privacy_transcript(make_scheme(parity_code), messages=[[1, 0], [0, 1], [1, 1]])


def test_correctness(table_one_scheme):
    report = check_correctness(table_one_scheme, trials=50, rng=make_rng(2))
    assert report.ok
    assert report.checked == 6
    assert report.trials == 50
    assert report.structural_failures == [] and report.value_failures == []


def test_correctness_reports_failures(non_private_scheme):
    report = check_correctness(non_private_scheme, trials=2)
    assert not report.ok
    # W^1 is still recoverable, W^2 never is
    assert report.structural_failures == [(2, 0), (2, 1), (2, 2)]


def test_correctness_trials():
    scheme = make_scheme(build_joint_parity(2))
    with pytest.raises(ParameterError):
        check_correctness(scheme, trials=0)
    assert check_correctness(scheme).trials > 0


@pytest.mark.parametrize('K,N,T,expected', [
    (2, 4, 2, Fraction(2, 3)),
    (3, 4, 3, Fraction(16, 37)),
    (2, 6, 4, Fraction(3, 5)),
    (1, 5, 2, Fraction(1)),
    (3, 3, 3, Fraction(1, 3)),
])
def test_capacity_separate(K, N, T, expected):
    assert capacity_separate(K, N, T) == expected
    assert capacity_separate_closed_form(K, N, T) == expected


def test_capacity_invalid():
    with pytest.raises(ParameterError):
        capacity_separate(0, 4, 2)
    with pytest.raises(ParameterError):
        capacity_separate(2, 4, 5)


@pytest.mark.parametrize('n', range(3, 11))
def test_capacity_of_2n2(n):
    assert capacity_separate(2, n, 2) == Fraction(n, n + 2)


@pytest.mark.parametrize('K', range(2, 9))
def test_parity_beats_capacity(K):
    capacity = capacity_separate(K, K + 1, K)
    assert capacity == 1 / sum(Fraction(K, K + 1) ** i for i in range(K))
    assert Fraction(2, K + 1) > capacity


@pytest.mark.parametrize('N,T', [(3, 2), (4, 2), (5, 3), (7, 6), (9, 8)])
def test_capacity_decreases_with_messages(N, T):
    capacities = [capacity_separate(K, N, T) for K in range(1, 12)]
    assert capacities[0] == 1
    assert all(later < earlier for earlier, later in zip(capacities, capacities[1:]))
    # bounded below by 1 - T/N
    assert all(capacity > 1 - Fraction(T, N) for capacity in capacities)


@pytest.mark.parametrize('K', range(2, 6))
def test_expanded_parity_without_expansion(K, built_code):
    expanded = built_code(FAMILY_EXPANDED_PARITY, K, 1)
    joint = built_code(FAMILY_JOINT_PARITY, K)
    assert expanded.params.as_tuple()[:5] == joint.params.as_tuple()[:5]
    # same storage layout, only the parity coefficients differ
    assert np.array_equal(as_int_array(expanded.generators) != 0, as_int_array(joint.generators) != 0)
    assert verify_mds(expanded).ok and verify_mds(joint).ok

    expanded_scheme, joint_scheme = make_scheme(expanded), make_scheme(joint)
    assert np.array_equal(expanded_scheme.query_table, joint_scheme.query_table)
    assert barrier_report(expanded_scheme) == barrier_report(joint_scheme)


@pytest.mark.parametrize('K', range(2, 5))
@pytest.mark.parametrize('m', range(1, 4))
def test_expanded_parity_keeps_capacity(K, m, built_code):
    report = barrier_report(make_scheme(built_code(FAMILY_EXPANDED_PARITY, K, m)))
    assert report.c_perp == capacity_separate(K, K + 1, K)
    assert report.rate == Fraction(2, K + 1)
    assert report.broken


def test_barrier_table_one(table_one_scheme):
    report = barrier_report(table_one_scheme)
    assert report.rate == Fraction(3, 4)
    assert report.c_perp == Fraction(2, 3)
    assert report.margin == Fraction(1, 12)
    assert report.broken


def test_barrier_parity(parity_code):
    report = barrier_report(make_scheme(parity_code))
    assert (report.rate, report.c_perp, report.margin) == (Fraction(1, 2), Fraction(16, 37), Fraction(5, 74))


@pytest.mark.parametrize('K,m', [(2, 2), (2, 3), (3, 2)])
def test_barrier_expanded_parity(K, m):
    report = barrier_report(make_scheme(build_expanded_parity(K, m)))
    assert report.rate == Fraction(2, K + 1)
    assert report.broken
    if (K, m) == (2, 2):
        assert report.c_perp == Fraction(3, 5)
        assert report.margin == Fraction(1, 15)


def test_oracle_equivalence(broken_code):
    codes = [build_joint_2n2(3, field=make_field(2)), build_joint_parity(2), broken_code]
    verdicts = [oracle_mds_injectivity(code) for code in codes]
    assert verdicts == [verify_mds(code).ok for code in codes]
    assert verdicts == [True, True, False]


def test_oracle_budget(table_one_code):
    assert oracle_mds_injectivity(table_one_code, budget=100) is None
    assert oracle_mds_injectivity(table_one_code, budget=729) is True


@pytest.mark.parametrize('values', [range(3, 6), pytest.param(range(3, 11), marks=pytest.mark.slow)])
def test_sweep_joint_2n2(values):
    rows = barrier_sweep(FAMILY_JOINT_2N2, values)
    assert [row.param for row in rows] == list(values)
    for row in rows:
        assert not row.failed, row
        assert row.barrier.rate == Fraction(row.param - 1, row.param)
        assert row.barrier.c_perp == Fraction(row.param, row.param + 2)
        assert row.barrier.margin > 0


@pytest.mark.parametrize('values', [range(2, 5), pytest.param(range(2, 9), marks=pytest.mark.slow)])
def test_sweep_joint_parity(values):
    rows = barrier_sweep(FAMILY_JOINT_PARITY, values)
    assert all(row.barrier.broken and row.mds and row.privacy and row.correctness for row in rows)
    assert [row.field for row in rows] == ['GF(2)'] * len(values)


def test_sweep_expanded_parity():
    rows = barrier_sweep(FAMILY_EXPANDED_PARITY, [2, 3], m_factor=2, trials=50)
    assert [row.barrier.rate for row in rows] == [Fraction(2, 3), Fraction(1, 2)]
    assert not any(row.failed for row in rows)


def test_sweep_records_failures():
    rows = barrier_sweep(FAMILY_JOINT_2N2, [2, 3], trials=1)
    assert rows[0].failed and rows[0].error
    assert not rows[1].failed
    summary = sweep_summary(rows)
    assert summary[0]['rate'] is None
    assert summary[1]['rate'] == Fraction(2, 3)
    assert list(summary[1]) == ['param', 'field', 'rate', 'c_perp', 'margin', 'broken', 'mds', 'privacy',
                                'correctness', 'error', 'failed']


def test_sweep_empty():
    assert barrier_sweep(FAMILY_JOINT_PARITY, []) == []


def test_sweep_unsupported():
    with pytest.raises(UnsupportedFamilyError):
        barrier_sweep(FAMILY_CUSTOM, [3])


@pytest.mark.slow
@pytest.mark.parametrize('base_n,m', [(3, 2), (4, 2)])
def test_expanded_2n2_end_to_end(base_n, m):
    code, _ = build_expanded_2n2(base_n, m, seed=0)
    scheme = make_scheme(code)
    assert check_privacy(scheme).ok
    assert check_correctness(scheme, trials=50, rng=make_rng(0)).ok
    report = barrier_report(scheme)
    assert report.rate == Fraction(base_n - 1, base_n)
    assert report.margin > 0
