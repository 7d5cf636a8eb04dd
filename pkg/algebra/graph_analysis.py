"""
Structure of unweighted digraphs: strong connectivity, cyclicity, cyclicity classes,
girth and digraph powers.

Nodes are 0-based integers ``0..n-1``.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from algebra.errors import (
    AcyclicDigraphError,
    ConsistencyError,
    EdgelessDigraphError,
    InvalidWalkError,
    NotStronglyConnectedError,
)
from algebra.tropical_core import TropMatrix, Weight

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


@dataclass(frozen=True)
class Digraph:
    """A digraph on nodes 0..n-1. Self-loops allowed, no parallel edges."""

    n: int
    edges: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        edges = frozenset((int(i), int(j)) for i, j in self.edges)
        for i, j in edges:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) outside node range 0..{self.n - 1}")
        object.__setattr__(self, "edges", edges)

    @cached_property
    def successors(self) -> Tuple[Tuple[int, ...], ...]:
        out: List[List[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            out[i].append(j)
        return tuple(tuple(sorted(s)) for s in out)

    @cached_property
    def predecessors(self) -> Tuple[Tuple[int, ...], ...]:
        inc: List[List[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            inc[j].append(i)
        return tuple(tuple(sorted(s)) for s in inc)

    @cached_property
    def out_masks(self) -> Tuple[int, ...]:
        """Successor sets as bitmasks, bit j set iff (i, j) is an edge."""
        return tuple(sum(1 << j for j in succ) for succ in self.successors)

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self.edges

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def induced(self, nodes: Iterable[int]) -> Tuple["Digraph", Tuple[int, ...]]:
        """
        Subgraph induced on ``nodes``, relabelled to 0..m-1.

        Returns:
            (subgraph, mapping) where mapping[new] = old
        """
        mapping = tuple(sorted(set(nodes)))
        index = {old: new for new, old in enumerate(mapping)}
        edges = frozenset((index[i], index[j]) for i, j in self.edges if i in index and j in index)
        return Digraph(len(mapping), edges), mapping

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> "Digraph":
        n = len(masks)
        return cls(n, frozenset((i, j) for i, m in enumerate(masks) for j in range(n) if m >> j & 1))


@dataclass(frozen=True)
class Walk:
    """A node sequence (i_0, ..., i_t). Length t; a single node is the empty walk."""

    nodes: Tuple[int, ...]

    def __post_init__(self):
        nodes = tuple(int(v) for v in self.nodes)
        if not nodes:
            raise InvalidWalkError("a walk needs at least one node")
        object.__setattr__(self, "nodes", nodes)

    @property
    def length(self) -> int:
        return len(self.nodes) - 1

    @property
    def start(self) -> int:
        return self.nodes[0]

    @property
    def end(self) -> int:
        return self.nodes[-1]

    @property
    def is_closed(self) -> bool:
        return self.start == self.end

    @property
    def is_cycle(self) -> bool:
        """Nonempty closed walk with no repeated interior node."""
        return self.length > 0 and self.is_closed and len(set(self.nodes[:-1])) == self.length

    def edges(self) -> List[Edge]:
        return list(zip(self.nodes, self.nodes[1:]))

    def is_valid_in(self, D: Digraph) -> bool:
        if any(not 0 <= v < D.n for v in self.nodes):
            return False
        return all(D.has_edge(i, j) for i, j in self.edges())

    def weight(self, A: TropMatrix) -> Weight:
        total: Weight = Fraction(0) if A.is_exact else 0.0
        for i, j in self.edges():
            w = A[i, j]
            if w is None:
                return None
            total = total + w
        return total

    def __str__(self) -> str:
        return ",".join(str(v + 1) for v in self.nodes)


def parse_walk(text: str) -> Walk:
    """Parse a 1-based comma-separated walk such as "1,2,3,1"."""
    try:
        nodes = [int(tok) - 1 for tok in text.replace(" ", "").split(",") if tok]
    except ValueError as exc:
        raise InvalidWalkError(f"cannot parse walk {text!r}") from exc
    if any(v < 0 for v in nodes):
        raise InvalidWalkError(f"walk {text!r} uses node numbers below 1")
    return Walk(tuple(nodes))


def digraph_of(A: TropMatrix) -> Digraph:
    """Edge (i, j) iff a_{i,j} is not the semiring zero."""
    return Digraph(A.n, frozenset((i, j) for i, j, _ in A.finite_weights()))


def strongly_connected_components(D: Digraph) -> List[FrozenSet[int]]:
    """Maximal strongly connected node sets, ordered by smallest member."""
    comps = [frozenset(c) for c in nx.strongly_connected_components(D.to_networkx())]
    return sorted(comps, key=min)


def is_strongly_connected(D: Digraph) -> bool:
    return D.n >= 1 and nx.is_strongly_connected(D.to_networkx())


def is_irreducible(A: TropMatrix) -> bool:
    return is_strongly_connected(digraph_of(A))


def _require_strongly_connected(D: Digraph) -> None:
    if not D.edges:
        raise EdgelessDigraphError(f"digraph on {D.n} node(s) has no edges")
    if not is_strongly_connected(D):
        raise NotStronglyConnectedError("digraph is not strongly connected")


def bfs_distances(D: Digraph, root: int) -> Dict[int, int]:
    dist = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in D.successors[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def cyclicity(D: Digraph) -> int:
    """
    gcd of all cycle lengths of a strongly connected digraph.

    Computed as the gcd over edges (u, v) of dist(u) + 1 - dist(v), with BFS
    distances from node 0.

    Raises:
        EdgelessDigraphError: if D has no edge
        NotStronglyConnectedError: if D is not strongly connected
    """
    _require_strongly_connected(D)
    dist = bfs_distances(D, 0)
    return reduce(gcd, (abs(dist[u] + 1 - dist[v]) for u, v in D.edges), 0)


def cyclicity_classes(D: Digraph) -> List[FrozenSet[int]]:
    """
    The d cyclicity classes. Class 0 holds node 0; every edge goes from class s to s+1 mod d.
    """
    d = cyclicity(D)
    dist = bfs_distances(D, 0)
    classes: List[Set[int]] = [set() for _ in range(d)]
    for v, dv in dist.items():
        classes[dv % d].add(v)
    return [frozenset(c) for c in classes]


def girth(D: Digraph) -> int:
    """
    Length of a shortest nonempty cycle.

    Raises:
        AcyclicDigraphError: if D has no cycle
    """
    best: Optional[int] = None
    for root in range(D.n):
        if D.has_edge(root, root):
            return 1
        dist = bfs_distances(D, root)
        for u in D.predecessors[root]:
            if u in dist:
                length = dist[u] + 1
                if best is None or length < best:
                    best = length
    if best is None:
        raise AcyclicDigraphError("digraph has no cycle")
    return best


def _mask_product(left: Sequence[int], right: Sequence[int]) -> Tuple[int, ...]:
    out = []
    for m in left:
        acc = 0
        j = 0
        while m:
            if m & 1:
                acc |= right[j]
            m >>= 1
            j += 1
        out.append(acc)
    return tuple(out)


def graph_power(D: Digraph, k: int) -> Digraph:
    """Edge (i, j) iff D has a walk of length exactly k from i to j."""
    if k < 1:
        raise ValueError(f"digraph power needs k >= 1, got {k}")
    result = D.out_masks
    base = D.out_masks
    # square-and-multiply on Boolean row masks
    k -= 1
    while k:
        if k & 1:
            result = _mask_product(result, base)
        base = _mask_product(base, base)
        k >>= 1
    return Digraph.from_masks(result)


def boolean_transient(D: Digraph) -> int:
    """
    Least t >= 0 with D^t = D^{t+d}, D^0 the identity relation.

    Raises:
        NotStronglyConnectedError, EdgelessDigraphError: D must be strongly connected
    """
    d = cyclicity(D)
    t = _first_repeat(D, d, lambda masks: masks)
    logger.debug("Boolean transient %d on %d node(s), cyclicity %d", t, D.n, d)
    return t


def boolean_row_transient(D: Digraph, k: int) -> int:
    """Least t >= 0 from which the k-th row of D^t is periodic with period cyclicity(D)."""
    d = cyclicity(D)
    return _first_repeat(D, d, lambda masks: masks[k])


def _first_repeat(D: Digraph, d: int, project) -> int:
    n = D.n
    state = tuple(1 << i for i in range(n))
    window: deque = deque()
    t = 0
    # strongly connected digraphs settle within (n-1)^2 + 1 + d steps
    limit = (n - 1) ** 2 + 2 * d + 2
    while t <= limit + d:
        window.append(project(state))
        if len(window) > d:
            if window[0] == window[-1]:
                return t - d
            window.popleft()
        state = _mask_product(state, D.out_masks)
        t += 1
    raise ConsistencyError("Boolean power sequence did not become periodic")
