"""
Bound formulas, factorization validation and the factor-rank parameters.
"""

import pytest
from hypothesis import given, settings

from algebra.bounds import (
    Factorization,
    boolean_classic_bounds,
    bounds_main1,
    bounds_main2,
    build_B,
    build_Z,
    distinct_rows_factorization,
    h_param,
    main1_for_node,
    main2_for_node,
    related_components,
    bound_identities,
    trivial_factorization,
    validate_factorization,
    wielandt_number,
)
from algebra.errors import BoundParameterError, InvalidFactorizationError, NonCriticalNodeError
from algebra.graph_analysis import cyclicity, girth
from algebra.spectral import critical_graph
from algebra.tropical_core import TropMatrix, mat_mul
from algebra.transients import row_transient
from strategies import irreducible_matrices, strongly_connected_digraphs


@pytest.mark.parametrize("k, value", [(1, 0), (2, 2), (5, 17), (7, 37)])
def test_wielandt_number(k, value):
    assert wielandt_number(k) == value


def test_wielandt_number_needs_positive_argument():
    with pytest.raises(BoundParameterError):
        wielandt_number(0)


def test_schwarz_bounds():
    report = bounds_main1(7, 2, 6, 6)
    assert report.applicable() == {"wielandt": 37, "dulmage_mendelsohn": 36, "schwarz": 11, "kim": 13}
    assert report.minimum() == 11


def test_reducible_matrices_get_two_bounds():
    report = bounds_main1(5, None, 2, 3)
    assert report.schwarz is None and report.kim is None
    assert report.applicable() == {"wielandt": 17, "dulmage_mendelsohn": 9}


@pytest.mark.parametrize(
    "args",
    [(4, 1, 3, 2), (4, 1, 5, 5), (6, 4, 6, 6), (6, 7, 7, 6)],
)
def test_inconsistent_parameters_are_rejected(args):
    with pytest.raises(BoundParameterError):
        bounds_main1(*args)


def test_rank_bounds_add_one():
    assert bounds_main2(1, 1, 1, 1).applicable() == {"wielandt": 1, "dulmage_mendelsohn": 1, "schwarz": 1, "kim": 1}
    main1 = bounds_main1(7, 2, 6, 6).applicable()
    main2 = bounds_main2(7, 2, 6, 6).applicable()
    assert {k: v + 1 for k, v in main1.items()} == main2
    with pytest.raises(BoundParameterError):
        bounds_main2(2, 1, 1, 3)


def test_schwarz_instance_bounds(schwarz):
    report = main1_for_node(schwarz, 3)
    assert (report.wielandt, report.dulmage_mendelsohn, report.schwarz, report.kim) == (37, 36, 11, 13)
    with pytest.raises(NonCriticalNodeError):
        main1_for_node(schwarz, 6)


def test_surrogate_bounds(wielandt5, dulmage_mendelsohn5):
    assert main1_for_node(wielandt5, 4).minimum() == 17
    assert main1_for_node(dulmage_mendelsohn5, 3).dulmage_mendelsohn == 14


def test_trivial_factorization_shifts_bounds_by_one(schwarz):
    F = trivial_factorization(schwarz)
    assert validate_factorization(schwarz, F)
    assert build_B(F) == schwarz
    main1 = main1_for_node(schwarz, 3).applicable()
    main2 = main2_for_node(schwarz, F, 3).applicable()
    assert main2 == {k: v + 1 for k, v in main1.items()}


def test_rank_one_instance():
    F = Factorization.from_rows([[0], [-1], [2]], [[0], [1], [-3]])
    A = F.product()
    assert validate_factorization(A, F)
    C = critical_graph(A)
    assert C.nodes == frozenset({0, 1})
    for k in C.nodes:
        assert main2_for_node(A, F, k).minimum() == 1
        assert row_transient(A, k).transient <= 1


def test_factorization_problems_are_named():
    A = TropMatrix.from_rows([[0, 0], [0, 0]])
    good = Factorization.from_rows([[0], [0]], [[0], [0]])
    assert validate_factorization(A, good).reason == "ok"
    assert validate_factorization(A, Factorization.from_rows([[0], [-1]], [[0], [0]])).reason == "mismatch"
    assert validate_factorization(A, Factorization.from_rows([[0, None], [0, None]], [[0, 0], [0, 0]])).reason == (
        "zero-vector"
    )
    assert validate_factorization(A, Factorization.from_rows([[0]], [[0]])).reason == "dimension"
    with pytest.raises(InvalidFactorizationError):
        h_param(A, Factorization.from_rows([[0], [-1]], [[0], [0]]), 0)


def test_z_squares_to_a_and_b(schwarz):
    F = distinct_rows_factorization(schwarz)
    assert validate_factorization(schwarz, F)
    Z2 = mat_mul(build_Z(F), build_Z(F))
    n = schwarz.n
    top = tuple(row[:n] for row in Z2.entries[:n])
    bottom = tuple(row[n:] for row in Z2.entries[n:])
    assert top == schwarz.entries
    assert bottom == build_B(F).entries


def test_related_components_of_schwarz(schwarz):
    F = trivial_factorization(schwarz)
    H, H_prime = related_components(schwarz, F, 3)
    assert H == frozenset(range(6))
    assert H_prime == frozenset(range(6))
    assert h_param(schwarz, F, 3) == 6


@settings(max_examples=40, deadline=None)
@given(irreducible_matrices(max_n=4))
def test_distinct_rows_factorization_bounds_hold(A):
    F = distinct_rows_factorization(A)
    assert validate_factorization(A, F)
    for k in critical_graph(A).nodes:
        assert row_transient(A, k).transient <= main2_for_node(A, F, k).minimum()


@settings(max_examples=60, deadline=None)
@given(strongly_connected_digraphs())
def test_bound_identities_hold_on_digraphs(D):
    identities = bound_identities(D.n, cyclicity(D), girth(D))
    assert all(identities.values()), identities


def test_classic_bounds_applicability():
    assert set(boolean_classic_bounds(7, 2, 4)) == {"schwarz", "kim"}
    primitive = boolean_classic_bounds(5, 1, 4, r=3)
    assert primitive["wielandt"] == 17
    assert primitive["dulmage_mendelsohn"] == 17
    assert primitive["rank_wielandt"] == wielandt_number(3) + 1
    assert primitive["rank_kim"] == (3 - 2) * 4 + 3 + 1
