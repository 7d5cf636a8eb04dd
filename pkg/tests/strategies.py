"""
Hypothesis strategies for small exact matrices and digraphs.
"""

from fractions import Fraction

from hypothesis import strategies as st

from algebra.graph_analysis import Digraph, is_strongly_connected
from algebra.tropical_core import TropMatrix

WEIGHTS = [Fraction(0), Fraction(-1), Fraction(-1, 2), Fraction(-1, 3), Fraction(-2), Fraction(1), Fraction(3, 2)]


@st.composite
def weights(draw, allow_bottom: bool = True):
    options = st.sampled_from(WEIGHTS)
    if allow_bottom:
        options = st.one_of(st.none(), options)
    return draw(options)


@st.composite
def matrices(draw, min_n: int = 1, max_n: int = 5, n: int = None):
    """Exact square matrices with at least one cycle."""
    size = n if n is not None else draw(st.integers(min_n, max_n))
    rows = [[draw(weights()) for _ in range(size)] for _ in range(size)]
    # A diagonal entry keeps the maximum cycle mean finite
    k = draw(st.integers(0, size - 1))
    if rows[k][k] is None:
        rows[k][k] = draw(weights(allow_bottom=False))
    return TropMatrix(tuple(tuple(row) for row in rows))


@st.composite
def irreducible_matrices(draw, min_n: int = 1, max_n: int = 5):
    size = draw(st.integers(min_n, max_n))
    order = draw(st.permutations(list(range(size))))
    rows = [[draw(weights()) for _ in range(size)] for _ in range(size)]
    for a, b in zip(order, order[1:] + order[:1]):
        if rows[a][b] is None:
            rows[a][b] = draw(weights(allow_bottom=False))
    return TropMatrix(tuple(tuple(row) for row in rows))


@st.composite
def strongly_connected_digraphs(draw, min_n: int = 1, max_n: int = 6):
    size = draw(st.integers(min_n, max_n))
    order = draw(st.permutations(list(range(size))))
    edges = set(zip(order, order[1:] + order[:1]))
    extra = draw(st.sets(st.tuples(st.integers(0, size - 1), st.integers(0, size - 1)), max_size=2 * size))
    D = Digraph(size, frozenset(edges | extra))
    assert is_strongly_connected(D)
    return D


@st.composite
def scalings(draw, n: int):
    """Finite diagonal scaling vectors of length n."""
    return tuple(draw(weights(allow_bottom=False)) for _ in range(n))


@st.composite
def digraphs(draw, min_n: int = 1, max_n: int = 6):
    """Arbitrary digraphs, self-loops allowed."""
    size = draw(st.integers(min_n, max_n))
    edges = draw(st.sets(st.tuples(st.integers(0, size - 1), st.integers(0, size - 1)), max_size=3 * size))
    return Digraph(size, frozenset(edges))
