"""
Transients and eventual periods of max-plus matrix powers.

All detection runs on the normalized matrix (maximum cycle mean 0), where
A^{t+p} = lambda^p A^t becomes plain equality of powers. Powers are indexed from t = 0
(the tropical identity), so a sequence that is periodic from the start has transient 0.
"""

import logging
from collections import deque
from typing import Callable, Iterator, List, Literal, Optional

from pydantic import BaseModel, Field

from algebra.bounds import main1_for_node
from algebra.errors import CapExceededError, NonCriticalNodeError, ReducibleMatrixError
from algebra.graph_analysis import is_irreducible
from algebra.spectral import critical_graph, normalize
from algebra.tropical_core import Row, TropMatrix, mat_mul, rows_close, unit_vector, vec_mat

logger = logging.getLogger(__name__)

DEFAULT_MATRIX_CAP = 500


class TransientReport(BaseModel):
    """Transient T and period p of one scope of the power sequence."""

    scope: Literal["matrix", "row", "column", "entry"]
    index: Optional[int] = None
    column_index: Optional[int] = None
    transient: int = Field(ge=0)
    period: int = Field(ge=1)
    searched_up_to: int = Field(ge=0)


def row_orbit(N: TropMatrix, k: int) -> Iterator[Row]:
    """Rows k of N^0, N^1, N^2, ... lazily."""
    state = unit_vector(N.n, k, N.tolerance)
    while True:
        yield state
        state = vec_mat(state, N)


def matrix_orbit(N: TropMatrix) -> Iterator[TropMatrix]:
    state = TropMatrix.identity(N.n, N.tolerance)
    while True:
        yield state
        state = mat_mul(state, N)


def first_periodic_index(states: Iterator, period: int, cap: int, same: Callable) -> int:
    """
    Least t <= cap with states[t] == states[t + period].

    Only a window of period + 1 states is held in memory.

    Raises:
        CapExceededError: if no such t exists up to cap
    """
    window: deque = deque(maxlen=period + 1)
    for t, state in enumerate(states):
        window.append(state)
        if len(window) == period + 1 and same(window[0], window[-1]):
            return t - period
        if t - period >= cap:
            break
    raise CapExceededError(f"no periodicity with period {period} detected up to t = {cap}", cap)


def _rows_same(tol: float) -> Callable:
    return lambda u, v: rows_close(u, v, tol)


def _default_row_parameters(A: TropMatrix, k: int, period: Optional[int], cap: Optional[int]):
    C = critical_graph(A)
    comp = C.component_of(k)
    if comp is None:
        if period is None or cap is None:
            raise NonCriticalNodeError(f"node {k} is not critical; give both period and cap explicitly")
        return period, cap
    if period is None:
        period = comp.cyclicity
    if cap is None:
        cap = main1_for_node(A, k).minimum() + period
    return period, cap


def row_transient(A: TropMatrix, k: int, period: Optional[int] = None, cap: Optional[int] = None) -> TransientReport:
    """
    Transient of the k-th row: least t with row_k(A^{t+p}) = lambda^p row_k(A^t).

    For a critical k the period defaults to the cyclicity of k's critical component and
    the cap to the smallest applicable matrix-size bound plus the period.

    Raises:
        AcyclicMatrixError: if A is nilpotent
        NonCriticalNodeError: if k is not critical and period or cap is missing
        CapExceededError: if no periodicity is found up to cap
    """
    period, cap = _default_row_parameters(A, k, period, cap)
    N, _ = normalize(A)
    t = first_periodic_index(row_orbit(N, k), period, cap, _rows_same(A.tolerance))
    logger.debug("row %d: transient %d, period %d", k, t, period)
    return TransientReport(scope="row", index=k, transient=t, period=period, searched_up_to=cap)


def column_transient(A: TropMatrix, k: int, period: Optional[int] = None, cap: Optional[int] = None) -> TransientReport:
    """Transient of the k-th column, computed as a row transient of the transpose."""
    report = row_transient(A.transpose(), k, period, cap)
    return report.model_copy(update={"scope": "column"})


def entry_transient(
    A: TropMatrix, i: int, j: int, period: Optional[int] = None, cap: Optional[int] = None
) -> TransientReport:
    """
    Least T such that a_{i,j}^{(t+p)} = lambda^p a_{i,j}^{(t)} for every t >= T.

    Entry sequences need not stay periodic after a first coincidence, so the row i
    transient is found first and the last entry mismatch before it is located.
    """
    period, cap = _default_row_parameters(A, i, period, cap)
    N, _ = normalize(A)
    same = _rows_same(A.tolerance)
    history: List[Row] = []

    def recording(orbit):
        for state in orbit:
            history.append(state)
            yield state

    row_t = first_periodic_index(recording(row_orbit(N, i)), period, cap, same)
    last_mismatch = -1
    for t in range(row_t):
        if not same((history[t][j],), (history[t + period][j],)):
            last_mismatch = t
    return TransientReport(
        scope="entry", index=i, column_index=j, transient=last_mismatch + 1, period=period, searched_up_to=cap
    )


def matrix_transient(A: TropMatrix, cap: int = DEFAULT_MATRIX_CAP) -> TransientReport:
    """
    Transient of an irreducible matrix, with the lcm of critical-component cyclicities as period.

    Raises:
        ReducibleMatrixError: if A is not irreducible
        CapExceededError: if no periodicity is found up to cap
    """
    if not is_irreducible(A):
        raise ReducibleMatrixError("matrix transient requires an irreducible matrix")
    period = critical_graph(A).period
    N, _ = normalize(A)
    t = first_periodic_index(matrix_orbit(N), period, cap, lambda X, Y: X.close_to(Y))
    return TransientReport(scope="matrix", transient=t, period=period, searched_up_to=cap)


def least_eventual_period_row(A: TropMatrix, k: int) -> int:
    """
    Least eventual period of the k-th row of a critical node.

    Raises:
        NonCriticalNodeError: if k is not critical
    """
    if not critical_graph(A).is_critical(k):
        raise NonCriticalNodeError(f"node {k} is not critical")
    report = row_transient(A, k)
    N, _ = normalize(A)
    same = _rows_same(A.tolerance)
    rows: List[Row] = []
    for t, state in enumerate(row_orbit(N, k)):
        if t >= report.transient:
            rows.append(state)
        if len(rows) > report.period:
            break
    for p in range(1, report.period + 1):
        if same(rows[0], rows[p]):
            return p
    return report.period  # pragma: no cover
