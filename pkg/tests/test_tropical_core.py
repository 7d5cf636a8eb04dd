"""
Max-plus arithmetic: scalars, products, powers, Kleene star and scaling.
"""

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algebra.errors import ClosureDivergenceError, DimensionMismatchError, NonFiniteScalingError
from algebra.spectral import normalize
from algebra.tropical_core import (
    TropMatrix,
    as_weight,
    format_weight,
    kleene_star,
    mat_add,
    mat_mul,
    mat_power,
    mat_power_stream,
    scale_diag,
    shift,
    tadd,
    tmul,
    vec_mat,
)
from strategies import matrices, scalings


def M(rows):
    return TropMatrix.from_rows(rows)


def test_scalar_operations():
    assert tadd(Fraction(1), Fraction(2)) == 2
    assert tadd(None, Fraction(-3)) == -3
    assert tmul(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)
    assert tmul(None, Fraction(4)) is None


def test_as_weight_tokens():
    assert as_weight("-inf") is None
    assert as_weight(".") is None
    assert as_weight("3/2") == Fraction(3, 2)
    assert as_weight(float("-inf")) is None
    with pytest.raises(TypeError):
        as_weight(0.5)
    assert as_weight("0.5", exact=False) == 0.5


def test_format_weight_is_canonical():
    assert format_weight(Fraction(6, 4)) == "3/2"
    assert format_weight(Fraction(-2)) == "-2"
    assert format_weight(None) == "-inf"


def test_matrix_must_be_square():
    with pytest.raises(DimensionMismatchError):
        M([[0, 1], [2]])
    with pytest.raises(DimensionMismatchError):
        TropMatrix(())


def test_product_example():
    A = M([[0, 2], [None, 0]])
    B = M([[1, None], [3, 0]])
    assert mat_mul(A, B) == M([[5, 2], [3, 0]])


def test_product_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        mat_mul(M([[0]]), M([[0, 0], [0, 0]]))


def test_power_zero_is_identity():
    A = M([[1, 2], [3, 4]])
    assert mat_power(A, 0) == TropMatrix.identity(2)
    assert mat_power(A, 1) == A


def test_power_stream_matches_repeated_products():
    A = M([[None, 0], [-1, None]])
    stream = mat_power_stream(A)
    assert [next(stream) for _ in range(4)] == [mat_power(A, t) for t in range(1, 5)]
    assert mat_power(A, 2) == M([[-1, None], [None, -1]])


def test_vector_times_matrix():
    A = M([[0, -1], [None, 2]])
    assert vec_mat((Fraction(0), None), A) == (0, -1)


def test_kleene_star_of_negative_cycle():
    A = M([[None, -1], [-2, None]])
    star = kleene_star(A)
    assert star == M([[0, -1], [-2, 0]])


def test_kleene_star_diverges_on_positive_cycle():
    with pytest.raises(ClosureDivergenceError):
        kleene_star(M([[None, 1], [0, None]]))


def test_scaling_rejects_bottom():
    with pytest.raises(NonFiniteScalingError):
        scale_diag(M([[0, 1], [1, 0]]), (Fraction(0), None))


def test_approximate_matrices_compare_with_tolerance():
    A = TropMatrix.from_rows([[0.0, 1.0], [None, 0.5]], tolerance=1e-6)
    B = TropMatrix.from_rows([[1e-9, 1.0], [None, 0.5]], tolerance=1e-6)
    assert A.close_to(B)
    assert A != B


@settings(max_examples=60, deadline=None)
@given(matrices(max_n=4), matrices(max_n=4), matrices(max_n=4))
def test_product_is_associative(A, B, C):
    if not A.n == B.n == C.n:
        return
    assert mat_mul(mat_mul(A, B), C) == mat_mul(A, mat_mul(B, C))


@settings(max_examples=60, deadline=None)
@given(matrices(n=3), matrices(n=3), matrices(n=3))
def test_product_distributes_over_sum(A, B, C):
    assert mat_mul(A, mat_add(B, C)) == mat_add(mat_mul(A, B), mat_mul(A, C))


@settings(max_examples=40, deadline=None)
@given(matrices(max_n=4), st.integers(0, 4), st.integers(0, 4))
def test_powers_add_exponents(A, s, t):
    assert mat_mul(mat_power(A, s), mat_power(A, t)) == mat_power(A, s + t)


@settings(max_examples=40, deadline=None)
@given(matrices(max_n=4), st.integers(-3, 3))
def test_shift_commutes_with_powers(A, c):
    t = 3
    assert mat_power(shift(A, Fraction(c)), t) == shift(mat_power(A, t), Fraction(c * t))


def naive_product(A, B):
    n = A.n
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                out[i][j] = tadd(out[i][j], tmul(A[i, k], B[k, j]))
    return M(out)


def best_walk_weight(A, i, j, t):
    best = None
    for middle in product(range(A.n), repeat=t - 1):
        nodes = (i, *middle, j)
        weight = Fraction(0)
        for u, v in zip(nodes, nodes[1:]):
            if A[u, v] is None:
                weight = None
                break
            weight += A[u, v]
        best = tadd(best, weight)
    return best


@settings(max_examples=60, deadline=None)
@given(matrices(max_n=4), matrices(max_n=4))
def test_product_matches_triple_loop(A, B):
    if A.n != B.n:
        return
    assert mat_mul(A, B) == naive_product(A, B)


@settings(max_examples=25, deadline=None)
@given(matrices(max_n=4), st.integers(1, 6))
def test_power_entries_are_heaviest_walks(A, t):
    At = mat_power(A, t)
    for i in range(A.n):
        for j in range(A.n):
            assert At[i, j] == best_walk_weight(A, i, j, t)


@settings(max_examples=40, deadline=None)
@given(matrices(max_n=5))
def test_kleene_star_is_sum_of_low_powers(A):
    N, _ = normalize(A)
    expected = TropMatrix.identity(N.n)
    for t in range(1, N.n):
        expected = mat_add(expected, mat_power(N, t))
    assert kleene_star(N) == expected


@settings(max_examples=40, deadline=None)
@given(matrices(max_n=4), st.integers(1, 6), st.data())
def test_scaling_commutes_with_powers(A, t, data):
    x = data.draw(scalings(A.n))
    assert mat_power(scale_diag(A, x), t) == scale_diag(mat_power(A, t), x)


@settings(max_examples=40, deadline=None)
@given(matrices(max_n=5), st.data())
def test_inverse_scaling_restores_the_matrix(A, data):
    x = data.draw(scalings(A.n))
    assert scale_diag(scale_diag(A, x), tuple(-w for w in x)) == A


def test_scaling_example():
    A = M([[None, 1], [-1, None]])
    assert scale_diag(A, (Fraction(1, 2), Fraction(-1, 2))) == M([[None, 0], [0, None]])
