"""
Closed-form transient bounds and the factor-rank construction.

Matrix-size bounds depend on the node count n, the cyclicity d of the matrix digraph
and the girth and size of the critical component H. Factor-rank bounds replace n by the
width r of a factorization A = V (x) W^T and |H| by the parameter h, both read off the
bipartite matrix Z = [[0, V], [W^T, 0]] and its square block B = W^T (x) V.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from pydantic import BaseModel

from algebra.errors import (
    BoundParameterError,
    ConsistencyError,
    DimensionMismatchError,
    InvalidFactorizationError,
    NonCriticalNodeError,
)
from algebra.graph_analysis import cyclicity, digraph_of, is_irreducible
from algebra.spectral import critical_graph
from algebra.tropical_core import ONE, Block, TropMatrix, as_weight, block_product

logger = logging.getLogger(__name__)


class BoundsReport(BaseModel):
    """
    Transient bounds for one critical node. ``schwarz`` and ``kim`` are None when they do
    not apply (reducible matrix, no cyclicity available).
    """

    node: Optional[int] = None
    wielandt: int
    dulmage_mendelsohn: int
    schwarz: Optional[int] = None
    kim: Optional[int] = None

    def applicable(self) -> Dict[str, int]:
        values = {
            "wielandt": self.wielandt,
            "dulmage_mendelsohn": self.dulmage_mendelsohn,
            "schwarz": self.schwarz,
            "kim": self.kim,
        }
        return {name: value for name, value in values.items() if value is not None}

    def minimum(self) -> int:
        return min(self.applicable().values())


def wielandt_number(k: int) -> int:
    """0 if k = 1, else (k-1)^2 + 1."""
    if k < 1:
        raise BoundParameterError(f"Wielandt number needs k >= 1, got {k}")
    return 0 if k == 1 else (k - 1) ** 2 + 1


def bounds_main1(n: int, d: Optional[int], g_h: int, size_h: int, node: Optional[int] = None) -> BoundsReport:
    """
    Matrix-size bounds (Wielandt, Dulmage-Mendelsohn, Schwarz, Kim).

    Args:
        n: Dimension of the matrix
        d: Cyclicity of the matrix digraph, or None for reducible matrices
        g_h: Girth of the critical component of the node
        size_h: Node count of that component
        node: Node the bounds are reported for

    Raises:
        BoundParameterError: on inconsistent parameters
    """
    if not 1 <= g_h <= size_h <= n:
        raise BoundParameterError(f"need 1 <= g(H) <= |H| <= n, got g(H)={g_h}, |H|={size_h}, n={n}")
    report = BoundsReport(
        node=node,
        wielandt=wielandt_number(n),
        dulmage_mendelsohn=(n - 2) * g_h + size_h,
    )
    if d is None:
        return report
    if not 1 <= d <= n or g_h % d:
        raise BoundParameterError(f"cyclicity d={d} must lie in [1, {n}] and divide g(H)={g_h}")
    q, rem = divmod(n, d)
    report.schwarz = d * wielandt_number(q) + rem
    report.kim = (q - 2) * g_h + min(n, size_h + rem)
    logger.debug("node %s: tightest matrix-size bound %d", node, report.minimum())
    return report


def bounds_main2(r: int, d: Optional[int], g_h: int, h: int, node: Optional[int] = None) -> BoundsReport:
    """
    Factor-rank bounds: the matrix-size formulas at width r and parameter h, plus one.

    Raises:
        BoundParameterError: on inconsistent parameters
    """
    if not 1 <= h <= r or g_h < 1:
        raise BoundParameterError(f"need 1 <= h <= r and g(H) >= 1, got h={h}, r={r}, g(H)={g_h}")
    report = BoundsReport(
        node=node,
        wielandt=wielandt_number(r) + 1,
        dulmage_mendelsohn=(r - 2) * g_h + h + 1,
    )
    if d is None:
        return report
    if not 1 <= d <= r or g_h % d:
        raise BoundParameterError(f"cyclicity d={d} must lie in [1, {r}] and divide g(H)={g_h}")
    q, rem = divmod(r, d)
    report.schwarz = d * wielandt_number(q) + rem + 1
    report.kim = (q - 2) * g_h + min(r, h + rem) + 1
    return report


def main1_for_node(A: TropMatrix, k: int) -> BoundsReport:
    """
    Matrix-size bounds for a critical node of A.

    Raises:
        NonCriticalNodeError: if k is not critical
    """
    comp = critical_graph(A).component_of(k)
    if comp is None:
        raise NonCriticalNodeError(f"node {k} is not critical")
    d = cyclicity(digraph_of(A)) if is_irreducible(A) else None
    return bounds_main1(A.n, d, comp.girth, comp.size, node=k)


@dataclass(frozen=True)
class Factorization:
    """
    Witness A = max_alpha v_alpha + w_alpha^T with V and W stored as n x r blocks
    (column alpha of each block is the vector v_alpha or w_alpha).
    """

    V: Block
    W: Block

    def __post_init__(self):
        object.__setattr__(self, "V", tuple(tuple(row) for row in self.V))
        object.__setattr__(self, "W", tuple(tuple(row) for row in self.W))

    @classmethod
    def from_rows(cls, V, W) -> "Factorization":
        """Build from nested sequences of anything ``as_weight`` accepts."""
        return cls(_coerce_block(V), _coerce_block(W))

    @property
    def n(self) -> int:
        return len(self.V)

    @property
    def r(self) -> int:
        return len(self.V[0]) if self.V else 0

    def v(self, alpha: int) -> Tuple:
        return tuple(row[alpha] for row in self.V)

    def w(self, alpha: int) -> Tuple:
        return tuple(row[alpha] for row in self.W)

    def product(self) -> TropMatrix:
        """V (x) W^T."""
        return TropMatrix(block_product(self.V, tuple(zip(*self.W))))


def _coerce_block(rows) -> Block:
    return tuple(tuple(as_weight(x) for x in row) for row in rows)


@dataclass(frozen=True)
class FactorizationCheck:
    ok: bool
    reason: str

    def __bool__(self) -> bool:
        return self.ok


def _shape_problem(F: Factorization, n: Optional[int] = None) -> Optional[FactorizationCheck]:
    if F.n == 0 or F.r == 0 or len(F.W) != F.n:
        return FactorizationCheck(False, "dimension")
    if n is not None and F.n != n:
        return FactorizationCheck(False, "dimension")
    if any(len(row) != F.r for row in F.V + F.W):
        return FactorizationCheck(False, "dimension")
    for alpha in range(F.r):
        if all(x is None for x in F.v(alpha)) or all(x is None for x in F.w(alpha)):
            return FactorizationCheck(False, "zero-vector")
    return None


def validate_factorization(A: TropMatrix, F: Factorization) -> FactorizationCheck:
    """
    True iff A = V (x) W^T exactly and no v_alpha or w_alpha is the zero vector.

    The reason is one of "ok", "dimension", "zero-vector" or "mismatch".
    """
    problem = _shape_problem(F, A.n)
    if problem is not None:
        return problem
    if F.product().entries != A.entries:
        return FactorizationCheck(False, "mismatch")
    return FactorizationCheck(True, "ok")


def _require_shape(F: Factorization) -> None:
    problem = _shape_problem(F)
    if problem is not None:
        raise InvalidFactorizationError(f"invalid factorization ({problem.reason})")


def build_Z(F: Factorization) -> TropMatrix:
    """The (n+r) x (n+r) bipartite matrix [[0, V], [W^T, 0]]."""
    _require_shape(F)
    n, r = F.n, F.r
    rows = []
    for i in range(n):
        rows.append((None,) * n + F.V[i])
    for alpha in range(r):
        rows.append(F.w(alpha) + (None,) * r)
    return TropMatrix(tuple(rows))


def build_B(F: Factorization) -> TropMatrix:
    """r x r matrix b_{alpha,beta} = max_i w_{i,alpha} + v_{i,beta}, i.e. W^T (x) V."""
    _require_shape(F)
    return TropMatrix(block_product(tuple(zip(*F.W)), F.V))


def related_components(A: TropMatrix, F: Factorization, k: int) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """
    The critical component H of A containing k and its related component H' of B.

    Both are the two halves of the critical component of Z through k: the nodes below n
    form H, the remaining nodes shifted by -n form H'.

    Raises:
        InvalidFactorizationError: if F does not factor A
        NonCriticalNodeError: if k is not critical in A
        ConsistencyError: if the halves are not critical components of A and B
    """
    check = validate_factorization(A, F)
    if not check:
        raise InvalidFactorizationError(f"factorization does not factor the matrix ({check.reason})")
    comp_a = critical_graph(A).component_of(k)
    if comp_a is None:
        raise NonCriticalNodeError(f"node {k} is not critical")

    n = A.n
    comp_z = critical_graph(build_Z(F)).component_of(k)
    if comp_z is None:
        raise ConsistencyError(f"critical node {k} of A is not critical in Z")
    H = frozenset(v for v in comp_z.nodes if v < n)
    H_prime = frozenset(v - n for v in comp_z.nodes if v >= n)
    if H != comp_a.nodes:
        raise ConsistencyError(f"Z-component through {k} does not restrict to the critical component of A")
    comp_b = critical_graph(build_B(F)).component_of(min(H_prime)) if H_prime else None
    if comp_b is None or comp_b.nodes != H_prime:
        raise ConsistencyError(f"Z-component through {k} does not restrict to a critical component of B")
    return H, H_prime


def h_param(A: TropMatrix, F: Factorization, k: int) -> int:
    """
    h = min(|H|, |H'|) for the critical component H of k and its related component H' of B.

    Raises:
        ConsistencyError: if g(H) differs from g(H')
    """
    H, H_prime = related_components(A, F, k)
    g_h = critical_graph(A).component_of(k).girth
    g_h_prime = critical_graph(build_B(F)).component_of(min(H_prime)).girth
    if g_h != g_h_prime:
        raise ConsistencyError(f"girth mismatch between related components: {g_h} vs {g_h_prime}")
    h = min(len(H), len(H_prime))
    logger.debug("node %d: |H|=%d, |H'|=%d, h=%d", k, len(H), len(H_prime), h)
    return h


def main2_for_node(A: TropMatrix, F: Factorization, k: int) -> BoundsReport:
    """Factor-rank bounds for a critical node, evaluated at the width of F."""
    h = h_param(A, F, k)
    g_h = critical_graph(A).component_of(k).girth
    B = build_B(F)
    d = cyclicity(digraph_of(B)) if is_irreducible(A) else None
    return bounds_main2(F.r, d, g_h, h, node=k)


def trivial_factorization(A: TropMatrix) -> Factorization:
    """
    V = the nonzero columns of A, W = the matching unit vectors. Then B is A restricted
    to its nonzero columns.
    """
    zero = ONE if A.is_exact else 0.0
    kept = [j for j in range(A.n) if any(w is not None for w in A.column(j))]
    if not kept:
        raise DimensionMismatchError("the zero matrix has no factorization without zero vectors")
    V = tuple(tuple(A[i, j] for j in kept) for i in range(A.n))
    W = tuple(tuple(zero if i == j else None for j in kept) for i in range(A.n))
    return Factorization(V, W)


def distinct_rows_factorization(A: TropMatrix) -> Factorization:
    """
    One outer product per distinct nonzero row u: v is 0 on the rows equal to u, w = u.
    The width is the number of distinct nonzero rows.
    """
    zero = ONE if A.is_exact else 0.0
    rows: List[Tuple] = []
    for row in A.entries:
        if any(w is not None for w in row) and row not in rows:
            rows.append(row)
    if not rows:
        raise DimensionMismatchError("the zero matrix has no factorization without zero vectors")
    V = tuple(tuple(zero if A.row(i) == u else None for u in rows) for i in range(A.n))
    W = tuple(tuple(u[j] for u in rows) for j in range(A.n))
    return Factorization(V, W)


def boolean_classic_bounds(n: int, d: int, g: int, r: Optional[int] = None) -> Dict[str, int]:
    """
    Classical bounds on the transient of a strongly connected digraph, keyed by name.

    Wielandt, Dulmage-Mendelsohn and the two factor-rank bounds need a primitive digraph
    (d = 1) and are left out otherwise; the rank bounds also need r.
    """
    if not 1 <= d <= n or g < 1 or g % d:
        raise BoundParameterError(f"inconsistent digraph parameters n={n}, d={d}, g={g}")
    q, rem = divmod(n, d)
    bounds = {
        "schwarz": d * wielandt_number(q) + rem,
        "kim": (q - 2) * g + n,
    }
    if d == 1:
        bounds["wielandt"] = wielandt_number(n)
        bounds["dulmage_mendelsohn"] = (n - 2) * g + n
        if r is not None:
            bounds["rank_wielandt"] = wielandt_number(r) + 1
            bounds["rank_kim"] = (r - 2) * g + r + 1
    return bounds


def bound_identities(n: int, d: int, g: int) -> Dict[str, bool]:
    """
    Arithmetic identities between the classical bounds. An identity whose premise does
    not hold for (n, d, g) is reported as True.
    """
    q, rem = divmod(n, d)
    classic = boolean_classic_bounds(n, d, g)
    identities = {}

    identities["schwarz_is_wielandt_if_primitive"] = d != 1 or classic["schwarz"] == wielandt_number(n)
    identities["dulmage_mendelsohn_is_wielandt_if_girth_n_minus_1"] = (
        g != n - 1 or (n - 2) * g + n == wielandt_number(n)
    )
    if q >= 2:
        threshold = d * (q - 1)
        identities["kim_is_schwarz_at_threshold_girth"] = (q - 2) * threshold + n == classic["schwarz"]
    else:
        identities["kim_is_schwarz_at_threshold_girth"] = True
    identities["kim_is_schwarz_if_all_cycles_shortest"] = g // d != q or (
        g == d and classic["kim"] == classic["schwarz"] == n - g
    )
    return identities
