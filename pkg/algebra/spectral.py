"""
Maximum cycle mean, critical graph, normalization and visualization scaling.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import FrozenSet, Optional, Sequence, Tuple

from algebra.errors import AcyclicMatrixError, ConsistencyError
from algebra.graph_analysis import (
    Digraph,
    bfs_distances,
    cyclicity,
    girth,
    is_irreducible,
    strongly_connected_components,
)
from algebra.tropical_core import (
    ONE,
    Row,
    TropMatrix,
    Weight,
    format_weight,
    kleene_star,
    scale_diag,
    shift,
    weights_close,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CritComponent:
    """A strongly connected component of the critical graph."""

    nodes: FrozenSet[int]
    cyclicity: int
    girth: int

    @property
    def size(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class CriticalGraph:
    lam: Weight
    n: int
    nodes: FrozenSet[int]
    edges: FrozenSet[Tuple[int, int]]
    components: Tuple[CritComponent, ...]

    def digraph(self) -> Digraph:
        return Digraph(self.n, self.edges)

    def is_critical(self, k: int) -> bool:
        return k in self.nodes

    def component_of(self, k: int) -> Optional[CritComponent]:
        for comp in self.components:
            if k in comp.nodes:
                return comp
        return None

    @property
    def period(self) -> int:
        """lcm of the component cyclicities: the least eventual period of an irreducible matrix."""
        return lcm(*(c.cyclicity for c in self.components))


@lru_cache(maxsize=256)
def max_cycle_mean(A: TropMatrix) -> Weight:
    """
    Maximum cycle mean by Karp's recurrence from a virtual source joined to every node.

    D_k(v) is the heaviest walk of exactly k edges ending in v. Then
    lambda = max_v min_{k<n} (D_n(v) - D_k(v)) / (n - k) over nodes with D_n(v) finite.
    Returns None when the digraph of A is acyclic.
    """
    n = A.n
    zero = ONE if A.is_exact else 0.0
    levels = [tuple(zero for _ in range(n))]
    for _ in range(n):
        prev = levels[-1]
        nxt = []
        for v in range(n):
            best = None
            for u in range(n):
                w = A.entries[u][v]
                if w is None or prev[u] is None:
                    continue
                s = prev[u] + w
                if best is None or s > best:
                    best = s
            nxt.append(best)
        levels.append(tuple(nxt))

    lam: Weight = None
    final = levels[n]
    for v in range(n):
        if final[v] is None:
            continue
        worst = None
        for k in range(n):
            dk = levels[k][v]
            if dk is None:
                continue
            diff = final[v] - dk
            mean = Fraction(diff, n - k) if A.is_exact else diff / (n - k)
            if worst is None or mean < worst:
                worst = mean
        if worst is not None and (lam is None or worst > lam):
            lam = worst
    return lam


def normalize(A: TropMatrix) -> Tuple[TropMatrix, Weight]:
    """
    Subtract the maximum cycle mean from every finite entry.

    Raises:
        AcyclicMatrixError: if A has no cycle
    """
    lam = max_cycle_mean(A)
    if lam is None:
        raise AcyclicMatrixError("matrix digraph is acyclic (the matrix is nilpotent)")
    return shift(A, -lam), lam


@lru_cache(maxsize=256)
def critical_graph(A: TropMatrix) -> CriticalGraph:
    """
    Nodes and edges on cycles of maximal mean.

    Edge (i, j) is critical iff a_{i,j} + star_{j,i} = 0 for the Kleene star of the
    normalized matrix.
    """
    normalized, lam = normalize(A)
    star = kleene_star(normalized)
    tol = A.tolerance
    edges = set()
    for i, j, w in normalized.finite_weights():
        back = star.entries[j][i]
        if back is not None and weights_close(w + back, 0 if tol else ONE, tol):
            edges.add((i, j))
    nodes = frozenset(v for e in edges for v in e)
    crit = Digraph(A.n, frozenset(edges))

    components = []
    for comp in strongly_connected_components(crit):
        if not comp <= nodes:
            continue
        sub, _ = crit.induced(comp)
        components.append(CritComponent(frozenset(comp), cyclicity(sub), girth(sub)))
    logger.debug("critical graph: lambda=%s, %d node(s), %d component(s)", format_weight(lam), len(nodes), len(components))
    return CriticalGraph(lam, A.n, nodes, frozenset(edges), tuple(components))


def critical_cycle_length(C: CriticalGraph, k: int) -> int:
    """Length of a shortest critical cycle through k."""
    crit = C.digraph()
    if not C.is_critical(k):
        raise ValueError(f"node {k} is not critical")
    if crit.has_edge(k, k):
        return 1
    dist = bfs_distances(crit, k)
    return min(dist[u] + 1 for u in crit.predecessors[k] if u in dist)


def critical_distance(C: CriticalGraph, k: int, l: int) -> Optional[int]:
    """Length of a shortest critical walk from k to l, or None if there is none."""
    return bfs_distances(C.digraph(), k).get(l)


def _complete_for_visualization(N: TropMatrix) -> TropMatrix:
    """
    Fill zero entries of a normalized matrix with a weight so low that any cycle
    through a filled entry has negative mean. The critical graph is unchanged.
    """
    total = sum((abs(w) for _, _, w in N.finite_weights()), ONE if N.is_exact else 0.0)
    mu = -(1 + N.n * total)
    logger.debug("reducible visualization: completing zero entries with %s", format_weight(mu))
    return TropMatrix(tuple(tuple(mu if w is None else w for w in row) for row in N.entries), N.tolerance)


def visualize(A: TropMatrix) -> Tuple[TropMatrix, Row]:
    """
    Strict visualization of the normalized matrix.

    Returns (B, x) with B = scale_diag(A - lambda, x), all entries of B at most 0 and
    b_{i,j} = 0 exactly on critical edges. x_i is the mean of row i of the Kleene star.

    Raises:
        AcyclicMatrixError: if A has no cycle
        ConsistencyError: if the result is not strictly visualized
    """
    normalized, _ = normalize(A)
    n = A.n
    source = normalized if is_irreducible(normalized) else _complete_for_visualization(normalized)
    star = kleene_star(source)
    if A.is_exact:
        x = tuple(Fraction(sum(row), n) for row in star.entries)
    else:
        x = tuple(sum(row) / n for row in star.entries)
    B = scale_diag(normalized, x)

    critical = critical_graph(A).edges
    tol = A.tolerance
    for i, j, w in B.finite_weights():
        on_zero = weights_close(w, 0 if tol else ONE, tol)
        if w > tol or on_zero != ((i, j) in critical):
            raise ConsistencyError(f"visualization failed at entry ({i}, {j}) = {format_weight(w)}")
    return B, x


def is_strictly_visualized(A: TropMatrix) -> bool:
    """All entries at most lambda, with equality exactly on critical edges."""
    lam = max_cycle_mean(A)
    if lam is None:
        return False
    critical = critical_graph(A).edges
    for i, j, w in A.finite_weights():
        if w > lam + A.tolerance:
            return False
        if weights_close(w, lam, A.tolerance) != ((i, j) in critical):
            return False
    return True


def critical_matrix(A: TropMatrix) -> TropMatrix:
    """Boolean matrix of the critical edge set: 0 on critical edges, zero elsewhere."""
    C = critical_graph(A)
    zero = ONE if A.is_exact else 0.0
    return TropMatrix(
        tuple(tuple(zero if (i, j) in C.edges else None for j in range(A.n)) for i in range(A.n)),
        A.tolerance,
    )


def pattern(A: TropMatrix) -> TropMatrix:
    """Support of A as a Boolean matrix: finite entries become 0."""
    zero = ONE if A.is_exact else 0.0
    return TropMatrix(tuple(tuple(None if w is None else zero for w in row) for row in A.entries), A.tolerance)


def is_boolean(A: TropMatrix) -> bool:
    return all(w == 0 for _, _, w in A.finite_weights())


def cycle_mean(A: TropMatrix, cycle: Sequence[int]) -> Weight:
    """Mean weight of a closed node sequence (v_0, ..., v_0)."""
    total = ONE if A.is_exact else 0.0
    for i, j in zip(cycle, cycle[1:]):
        w = A[i, j]
        if w is None:
            return None
        total += w
    length = len(cycle) - 1
    return Fraction(total, length) if A.is_exact else total / length
