"""
Property suites. Each check returns a list of ViolationReport; an empty list means every
asserted bound, lemma and identity held on the instance.
"""

import logging
from itertools import islice
from typing import Iterable, List, Optional

import numpy as np

from algebra.bounds import (
    Factorization,
    boolean_classic_bounds,
    build_B,
    build_Z,
    h_param,
    main1_for_node,
    main2_for_node,
    bound_identities,
    validate_factorization,
    wielandt_number,
)
from algebra.errors import CapExceededError, InvalidFactorizationError, TropicalError
from algebra.graph_analysis import (
    Digraph,
    Walk,
    cyclicity,
    digraph_of,
    girth,
    graph_power,
    is_irreducible,
    is_strongly_connected,
    boolean_transient,
)
from algebra.pumping import cycle_replace, window
from algebra.spectral import (
    critical_cycle_length,
    critical_distance,
    critical_graph,
    critical_matrix,
    is_strictly_visualized,
    normalize,
    pattern,
    visualize,
)
from algebra.transients import (
    column_transient,
    least_eventual_period_row,
    matrix_transient,
    row_orbit,
    row_transient,
)
from algebra.tropical_core import TropMatrix, mat_mul, mat_power
from harness.models import ViolationReport
from utils.matrix_io import from_matrix

logger = logging.getLogger(__name__)


def _require_exact(A: TropMatrix) -> None:
    if not A.is_exact:
        raise ValueError("theorem verification needs an exact matrix")


class _Collector:
    """Accumulates violations for one instance."""

    def __init__(self, A: Optional[TropMatrix]):
        self.A = A
        self.violations: List[ViolationReport] = []

    def add(self, prop: str, node: Optional[int] = None, measured=None, bound=None, detail: str = "") -> None:
        instance = from_matrix(self.A).model_dump() if self.A is not None else {}
        self.violations.append(
            ViolationReport(
                property=prop,
                node=None if node is None else node + 1,
                measured=measured,
                bound=bound,
                instance=instance,
                detail=detail,
            )
        )
        logger.warning("violation of %s at node %s: measured %s, bound %s", prop, node, measured, bound)

    def at_most(self, prop: str, node: int, measured: int, bound: int, detail: str = "") -> None:
        if measured > bound:
            self.add(prop, node, measured, bound, detail)


def _measure(col: _Collector, prop: str, k: int, compute):
    try:
        return compute()
    except CapExceededError as exc:
        col.add(prop + ".cap", k, None, exc.cap, str(exc))
    except TropicalError as exc:
        col.add(prop + ".error", k, detail=str(exc))
    return None


def check_main1(A: TropMatrix) -> List[ViolationReport]:
    """
    Every critical row and column transient against every applicable matrix-size
    bound, and the least eventual period of each critical row against its component's
    cyclicity.
    """
    _require_exact(A)
    col = _Collector(A)
    C = critical_graph(A)
    for k in sorted(C.nodes):
        bounds = main1_for_node(A, k)
        row = _measure(col, "main1.row", k, lambda: row_transient(A, k))
        column = _measure(col, "main1.column", k, lambda: column_transient(A, k))
        for name, value in bounds.applicable().items():
            if row is not None:
                col.at_most(f"main1.row.{name}", k, row.transient, value)
            if column is not None:
                col.at_most(f"main1.column.{name}", k, column.transient, value)
        gamma = C.component_of(k).cyclicity
        least = _measure(col, "period.least", k, lambda: least_eventual_period_row(A, k))
        if least is not None and least != gamma:
            col.add("period.least", k, least, gamma, "least eventual period differs from component cyclicity")
    return col.violations


def _check_main2_side(col: _Collector, A: TropMatrix, F: Factorization, side: str) -> None:
    """Row side on (A, F); the column side is the row side of (A^T, (W, V))."""
    C = critical_graph(A)
    for k in sorted(C.nodes):
        comp = C.component_of(k)
        h = _measure(col, f"main2.{side}.related", k, lambda: h_param(A, F, k))
        if h is None:
            continue
        col.at_most(f"main2.{side}.h", k, h, min(comp.size, F.r))
        report = main2_for_node(A, F, k)
        measured = _measure(col, f"main2.{side}", k, lambda: row_transient(A, k))
        if measured is None:
            continue
        for name, value in report.applicable().items():
            col.at_most(f"main2.{side}.{name}", k, measured.transient, value)


def check_main2(A: TropMatrix, F: Factorization) -> List[ViolationReport]:
    """
    Critical transients against the four factor-rank bounds, plus the structural facts
    they rest on: Z^2 = diag(A, B), irreducibility and cyclicity of B, h <= min(|H|, r)
    and T_k(A) <= T_beta(B) + 1 along critical edges (k, beta) of Z.

    Raises:
        InvalidFactorizationError: if F does not factor A
    """
    _require_exact(A)
    check = validate_factorization(A, F)
    if not check:
        raise InvalidFactorizationError(f"factorization does not factor the matrix ({check.reason})")
    col = _Collector(A)
    n, r = A.n, F.r
    Z = build_Z(F)
    B = build_B(F)

    Z2 = mat_mul(Z, Z)
    top = tuple(row[:n] for row in Z2.entries[:n])
    bottom = tuple(row[n:] for row in Z2.entries[n:])
    off = [w for row in Z2.entries[:n] for w in row[n:]] + [w for row in Z2.entries[n:] for w in row[:n]]
    if top != A.entries or bottom != B.entries or any(w is not None for w in off):
        col.add("main2.z_square", detail="Z^2 is not block-diagonal diag(A, B)")

    if is_irreducible(A):
        if not (is_irreducible(Z) and is_irreducible(B)):
            col.add("main2.irreducible", detail="Z or B is reducible for an irreducible A")
        elif cyclicity(digraph_of(B)) != cyclicity(digraph_of(A)):
            col.add("main2.cyclicity", measured=cyclicity(digraph_of(B)), bound=cyclicity(digraph_of(A)))

    _check_main2_side(col, A, F, "row")
    _check_main2_side(col, A.transpose(), Factorization(F.W, F.V), "column")

    for k, target in sorted(critical_graph(Z).edges):
        if k >= n or target < n:
            continue
        beta = target - n
        t_k = _measure(col, "transfer", k, lambda: row_transient(A, k))
        t_beta = _measure(col, "transfer", k, lambda: row_transient(B, beta))
        if t_k is not None and t_beta is not None:
            col.at_most("transfer", k, t_k.transient, t_beta.transient + 1, f"via B-node {beta + 1}")
    logger.debug("main2 checked: n=%d, r=%d", n, r)
    return col.violations


def _orbit_rows(N: TropMatrix, k: int, count: int) -> list:
    return list(islice(row_orbit(N, k), count))


def check_lemmas(A: TropMatrix) -> List[ViolationReport]:
    """
    Supporting lemmas on one instance: transients of powers, cycle-length bounds, critical
    walks, the Boolean and critical-matrix sandwiches, critical graphs of powers and
    strict visualization of powers.
    """
    _require_exact(A)
    col = _Collector(A)
    n = A.n
    C = critical_graph(A)
    N, _ = normalize(A)
    B, _ = visualize(A)
    irreducible = is_irreducible(A)
    d = cyclicity(digraph_of(A)) if irreducible else None
    P = pattern(A)
    AC = critical_matrix(A)
    powers = {m: mat_power(A, m) for m in (2, 3)}

    reports = {}
    for k in sorted(C.nodes):
        report = _measure(col, "lemma.row", k, lambda: row_transient(A, k))
        if report is not None:
            reports[k] = report

    for k, report in reports.items():
        T, p = report.transient, report.period

        # any coincidence row(r) == row(s), r < s, happens at r >= T
        rows = _orbit_rows(N, k, T + p + 1)
        for r_idx in range(T):
            if any(rows[r_idx] == rows[s] for s in range(r_idx + 1, len(rows))):
                col.add("lemma.powers.coincidence", k, T, r_idx)
                break
        for m, Am in powers.items():
            Tm = _measure(col, f"lemma.powers.{m}", k, lambda: row_transient(Am, k))
            if Tm is not None:
                col.at_most(f"lemma.powers.{m}", k, T, m * Tm.transient)

        ell = critical_cycle_length(C, k)
        col.at_most("lemma.cycle_length", k, T, (n - 1) * ell)
        tail = _orbit_rows(N, k, T + ell + 1)
        if tail[T] != tail[T + ell]:
            col.add("lemma.cycle_length.period", k, ell, p, "critical cycle length is not an eventual period")

        if irreducible:
            q, rem = divmod(n, d)
            col.at_most("lemma.cyclicity_classes", k, T, (q - 1) * ell + rem)

        comp = C.component_of(k)
        for l in sorted(comp.nodes):
            if l not in reports:
                continue
            r = critical_distance(C, k, l)
            T_l = reports[l].transient
            col.at_most("lemma.walk.transient", k, T, T_l + r, f"walk to node {l + 1} of length {r}")
            rows_k = _orbit_rows(B, k, T_l + r + p + 1)
            rows_l = _orbit_rows(B, l, T_l + p + 1)
            for t in range(T_l, T_l + p + 1):
                if rows_k[t + r] != rows_l[t]:
                    col.add("lemma.walk.rows", k, t, T_l, f"rows of node {l + 1} after a critical walk of length {r}")
                    break

        Tp = _measure(col, "lemma.pattern", k, lambda: row_transient(P, k))
        if Tp is not None:
            col.at_most("lemma.pattern", k, Tp.transient, T)
        Tc = _measure(col, "lemma.critical_matrix", k, lambda: row_transient(AC, k))
        if Tc is not None:
            col.at_most("lemma.critical_matrix", k, Tc.transient, T)

    crit = C.digraph()
    for t in range(1, 5):
        At = mat_power(A, t)
        if critical_graph(At).edges != graph_power(crit, t).edges:
            col.add("lemma.critical_powers", measured=t, detail="critical graph of a power is not the power of the critical graph")
        if not is_strictly_visualized(mat_power(B, t)):
            col.add("lemma.visualized_powers", measured=t, detail="power of a strictly visualized matrix lost strictness")
    return col.violations


def _row_count(masks: Iterable[int]) -> int:
    return len({m for m in masks if m})


def boolean_rank_witness(D: Digraph) -> int:
    """Width of the smaller of the distinct-rows and distinct-columns factorizations."""
    rows = D.out_masks
    cols = Digraph(D.n, frozenset((j, i) for i, j in D.edges)).out_masks
    return min(_row_count(rows), _row_count(cols))


def _check_digraph(col: _Collector, D: Digraph, cross_check: bool) -> None:
    n = D.n
    d, g = cyclicity(D), girth(D)
    T = boolean_transient(D)
    r = boolean_rank_witness(D)
    for name, value in boolean_classic_bounds(n, d, g, r).items():
        if T > value:
            col.add(f"classic.{name}", None, T, value, f"digraph edges {sorted(D.edges)}")
    for name, holds in bound_identities(n, d, g).items():
        if not holds:
            col.add(f"classic.identity.{name}", detail=f"n={n}, d={d}, g={g}")
    if len(D.edges) == n and g == n and T != 0:
        col.add("classic.hamiltonian", None, T, 0, "a lone Hamiltonian cycle is periodic from the start")
    if cross_check:
        A = TropMatrix.from_rows([[0 if D.has_edge(i, j) else None for j in range(n)] for i in range(n)])
        measured = matrix_transient(A).transient
        if measured != T:
            col.A = A
            col.add("classic.cross_check", None, measured, T, "matrix transient differs from digraph transient")
            col.A = None


def check_boolean_classics(
    nmax: int, samples: int = 0, seed: int = 0, cross_check_every: int = 97, stats: Optional[dict] = None
) -> List[ViolationReport]:
    """
    All strongly connected digraphs with at most min(nmax, 4) nodes are enumerated; larger
    sizes up to nmax get ``samples`` random strongly connected digraphs each. Brute-force
    transients are compared with the classical bounds, the bound identities are asserted,
    and every ``cross_check_every``-th digraph is re-measured as a Boolean matrix.
    """
    col = _Collector(None)
    count = 0
    for n in range(1, min(nmax, 4) + 1):
        for code in range(1 << (n * n)):
            masks = [(code >> (i * n)) & ((1 << n) - 1) for i in range(n)]
            D = Digraph.from_masks(masks)
            if not D.edges or not is_strongly_connected(D):
                continue
            _check_digraph(col, D, cross_check_every and count % cross_check_every == 0)
            count += 1
    rng = np.random.default_rng(seed)
    for n in range(5, nmax + 1):
        drawn = 0
        while drawn < samples:
            masks = [int(m) for m in rng.integers(0, 1 << n, size=n)]
            D = Digraph.from_masks(masks)
            if not D.edges or not is_strongly_connected(D):
                continue
            _check_digraph(col, D, cross_check_every and drawn % cross_check_every == 0)
            drawn += 1
            count += 1
    logger.info("classical bounds checked on %d digraphs", count)
    if stats is not None:
        stats["digraphs"] = count
    return col.violations


def check_pumping(D: Digraph, hamiltonian: Walk, W: Walk, A: Optional[TropMatrix] = None) -> List[ViolationReport]:
    """
    Cycle replacement on one walk: endpoints, length window, congruence, and, when A has
    the Hamiltonian cycle as a critical cycle, that the replacement is at least as heavy.
    """
    col = _Collector(A)
    try:
        V = cycle_replace(D, hamiltonian, W)
    except TropicalError as exc:
        col.add("pumping.error", detail=f"walk {W}: {exc}")
        return col.violations
    lo, hi = window(D.n)
    if (V.start, V.end) != (W.start, W.end):
        col.add("pumping.endpoints", detail=f"walk {W} -> {V}")
    if not lo <= V.length <= hi:
        col.add("pumping.window", measured=V.length, bound=hi, detail=f"walk {W}")
    if (V.length - W.length) % D.n:
        col.add("pumping.congruence", measured=V.length, bound=W.length, detail=f"walk {W}")
    if A is not None:
        B, _ = visualize(A)
        if V.weight(B) < W.weight(B):
            col.add("pumping.weight", detail=f"walk {W} -> {V} lost weight")
    return col.violations


def check_power_identity(A: TropMatrix) -> List[ViolationReport]:
    """
    With a critical Hamiltonian cycle, A^t = A^{s(t)} on the normalized matrix for
    W(n) <= t <= W(n) + 2n, where s(t) = W(n) + ((t - W(n)) mod n).
    """
    _require_exact(A)
    col = _Collector(A)
    n = A.n
    N, _ = normalize(A)
    wiel = wielandt_number(n)
    powers = [mat_power(N, wiel)]
    for _ in range(2 * n):
        powers.append(mat_mul(powers[-1], N))
    for offset, P in enumerate(powers):
        if P != powers[offset % n]:
            col.add("pumping.power_identity", measured=wiel + offset, bound=wiel + offset % n)
    return col.violations
