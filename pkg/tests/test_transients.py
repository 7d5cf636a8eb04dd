"""
Transients and periods of row, column, entry and matrix power sequences.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings

from algebra.bounds import main1_for_node
from algebra.errors import CapExceededError, NonCriticalNodeError, ReducibleMatrixError
from algebra.spectral import critical_graph, normalize
from algebra.transients import (
    column_transient,
    entry_transient,
    first_periodic_index,
    least_eventual_period_row,
    matrix_transient,
    row_transient,
)
from algebra.tropical_core import TropMatrix, mat_power
from strategies import irreducible_matrices


def epsilon_matrix(c: Fraction) -> TropMatrix:
    return TropMatrix.from_rows([[0, -c], [-c, -1]])


def brute_force_row_transient(A: TropMatrix, k: int, period: int, horizon: int) -> int:
    N, _ = normalize(A)
    rows = [mat_power(N, t).row(k) for t in range(horizon + period + 1)]
    T = horizon
    while T > 0 and rows[T - 1] == rows[T - 1 + period]:
        T -= 1
    return T


def test_schwarz_row_attains_schwarz_bound(schwarz):
    report = row_transient(schwarz, 3)
    assert report.transient == 11
    assert report.period == 6
    assert main1_for_node(schwarz, 3).schwarz == 11


def test_wielandt_surrogate(wielandt5):
    assert row_transient(wielandt5, 4).transient == 17


def test_dulmage_mendelsohn_surrogate(dulmage_mendelsohn5):
    assert row_transient(dulmage_mendelsohn5, 3).transient == 14


def test_max_times_input_keeps_the_transient(library):
    approx = library.get_matrix("wielandt5_max_times")
    assert row_transient(approx, 4).transient == 17


@pytest.mark.parametrize("c", [Fraction(1, 2), Fraction(1), Fraction(5, 2), Fraction(10)])
def test_epsilon_example_entry_transient(c):
    bound = math.ceil(2 * c)
    report = entry_transient(epsilon_matrix(c), 1, 1, period=1, cap=bound + 4)
    assert report.transient == bound
    assert report.scope == "entry"


def test_identity_is_periodic_from_the_start():
    I = TropMatrix.identity(3)
    for k in range(3):
        assert row_transient(I, k).transient == 0
        assert column_transient(I, k).transient == 0


def test_lone_cycle_has_transient_zero():
    A = TropMatrix.from_rows([[None, 0, None], [None, None, 0], [0, None, None]])
    assert matrix_transient(A).transient == 0
    assert matrix_transient(A).period == 3


def test_non_critical_row_needs_explicit_parameters(schwarz):
    with pytest.raises(NonCriticalNodeError):
        row_transient(schwarz, 6)
    assert row_transient(schwarz, 6, period=6, cap=40).transient >= 0


def test_matrix_transient_rejects_reducible_input():
    with pytest.raises(ReducibleMatrixError):
        matrix_transient(TropMatrix.identity(2))


def test_cap_is_reported():
    with pytest.raises(CapExceededError) as info:
        row_transient(TropMatrix.from_rows([[0, -Fraction(1, 10)], [-Fraction(1, 10), -1]]), 1, period=1, cap=1)
    assert info.value.cap == 1


def test_first_periodic_index_on_plain_sequence():
    states = iter([5, 4, 1, 2, 1, 2, 1, 2, 1])
    assert first_periodic_index(states, 2, 10, lambda a, b: a == b) == 2


def test_schwarz_period_is_component_cyclicity(schwarz):
    assert least_eventual_period_row(schwarz, 0) == 6


@settings(max_examples=40, deadline=None)
@given(irreducible_matrices(max_n=4))
def test_row_transient_matches_power_iteration(A):
    C = critical_graph(A)
    for k in sorted(C.nodes):
        report = row_transient(A, k)
        bound = main1_for_node(A, k).minimum()
        assert report.transient <= bound
        assert report.transient == brute_force_row_transient(A, k, report.period, bound + report.period)


@settings(max_examples=30, deadline=None)
@given(irreducible_matrices(max_n=4))
def test_matrix_transient_dominates_rows(A):
    T = matrix_transient(A).transient
    for k in critical_graph(A).nodes:
        assert row_transient(A, k).transient <= T
        assert column_transient(A, k).transient <= T
