"""
Walk surgery: decompose a walk into a path and cycles, drop cycle sets whose total
length is a multiple of n, and pad with copies of a Hamiltonian cycle until the length
lands in the window [(n-1)^2 + 1, (n-1)^2 + n].
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from algebra.errors import ConsistencyError, InvalidWalkError, NotHamiltonianError
from algebra.graph_analysis import Digraph, Walk

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WalkDecomposition:
    """A simple path plus the cycles cut out of a walk, in removal order."""

    path: Walk
    cycles: Tuple[Walk, ...]

    @property
    def total_length(self) -> int:
        return self.path.length + sum(c.length for c in self.cycles)

    def reassemble(self) -> Walk:
        """Re-insert the cycles, last removed first, at the first occurrence of their anchor."""
        nodes = list(self.path.nodes)
        for cycle in reversed(self.cycles):
            nodes = insert_cycle(nodes, cycle)
        return Walk(tuple(nodes))


def window(n: int) -> Tuple[int, int]:
    """Inclusive length window (n-1)^2 + 1 .. (n-1)^2 + n."""
    return (n - 1) ** 2 + 1, (n - 1) ** 2 + n


def zero_mod_subset(xs: Sequence[int], n: int) -> List[int]:
    """
    Nonempty index set I (0-based) with sum(xs[i] for i in I) divisible by n.

    Only the first n values are used. Two of the prefix sums s_0 = 0, ..., s_n share a
    residue mod n; the indices between them form I.

    Raises:
        ValueError: if fewer than n values are given
    """
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    if len(xs) < n:
        raise ValueError(f"need at least {n} values, got {len(xs)}")
    seen = {0: 0}
    total = 0
    for j, x in enumerate(xs[:n], start=1):
        total += x
        residue = total % n
        if residue in seen:
            return list(range(seen[residue], j))
        seen[residue] = j
    raise ConsistencyError("pigeonhole failed")  # pragma: no cover


def decompose_walk(D: Digraph, W: Walk) -> WalkDecomposition:
    """
    Split W into a simple path and cycles by cutting out the first closed piece each time
    a node repeats while scanning left to right.

    Raises:
        InvalidWalkError: if W is not a walk of D
    """
    if not W.is_valid_in(D):
        raise InvalidWalkError(f"{W} is not a walk of the digraph")
    path: List[int] = []
    position = {}
    cycles: List[Walk] = []
    for v in W.nodes:
        if v in position:
            cut = position[v]
            cycles.append(Walk(tuple(path[cut:]) + (v,)))
            for u in path[cut + 1:]:
                del position[u]
            del path[cut + 1:]
        else:
            position[v] = len(path)
            path.append(v)
    return WalkDecomposition(Walk(tuple(path)), tuple(cycles))


def reduce_cycles(cycles: Sequence[Walk], n: int) -> List[Walk]:
    """
    Remove sets of cycles whose total length is a multiple of n until fewer than n remain.

    Single cycles of length divisible by n go first; then the pigeonhole subset of the
    first n remaining cycles is removed repeatedly.
    """
    remaining = [c for c in cycles if c.length % n]
    while len(remaining) >= n:
        drop = set(zero_mod_subset([c.length for c in remaining], n))
        remaining = [c for idx, c in enumerate(remaining) if idx not in drop]
    return remaining


def rotate(cycle: Walk, v: int) -> Walk:
    """The same cycle read from node v."""
    body = cycle.nodes[:-1]
    i = body.index(v)
    return Walk(body[i:] + body[:i] + (v,))


def insert_cycle(nodes: Sequence[int], cycle: Walk) -> List[int]:
    """Splice a cycle into a node sequence at the first node they share."""
    members = set(cycle.nodes)
    for pos, v in enumerate(nodes):
        if v in members:
            spliced = rotate(cycle, v).nodes
            return list(nodes[:pos]) + list(spliced) + list(nodes[pos + 1:])
    raise InvalidWalkError("cycle shares no node with the walk")


def _require_hamiltonian(D: Digraph, hamiltonian: Walk) -> None:
    if not (hamiltonian.is_cycle and hamiltonian.length == D.n and hamiltonian.is_valid_in(D)):
        raise NotHamiltonianError(f"{hamiltonian} is not a Hamiltonian cycle of the digraph")


def cycle_replace(D: Digraph, hamiltonian: Walk, W: Walk) -> Walk:
    """
    A walk V with the endpoints of W, ell(V) = ell(W) mod n and ell(V) inside the
    window, built by removing cycles from W and inserting copies of the Hamiltonian cycle.
    W is returned unchanged when its length is already in the window.

    Raises:
        NotHamiltonianError: if ``hamiltonian`` is not a Hamiltonian cycle of D
        InvalidWalkError: if W is not a walk of D
        ConsistencyError: if the result fails its post-checks
    """
    _require_hamiltonian(D, hamiltonian)
    if not W.is_valid_in(D):
        raise InvalidWalkError(f"{W} is not a walk of the digraph")
    n = D.n
    lo, hi = window(n)
    if lo <= W.length <= hi:
        return W

    decomposition = decompose_walk(D, W)
    kept = reduce_cycles(decomposition.cycles, n)
    path = decomposition.path
    on_path = set(path.nodes)

    nodes = list(path.nodes)
    if all(on_path & set(c.nodes) for c in kept):
        case = "C"
    else:
        case = "D"
        nodes = list(rotate(hamiltonian, path.start).nodes) + nodes[1:]
    for cycle in kept:
        nodes = insert_cycle(nodes, cycle)
    if len(nodes) - 1 > hi:
        raise ConsistencyError(f"case {case} produced length {len(nodes) - 1} above {hi}")

    loop = list(rotate(hamiltonian, path.start).nodes)
    while len(nodes) - 1 < lo:
        nodes = loop + nodes[1:]
    V = Walk(tuple(nodes))
    logger.debug("cycle replacement case %s: %d -> %d", case, W.length, V.length)

    if not (V.start == W.start and V.end == W.end):
        raise ConsistencyError("cycle replacement changed the endpoints")
    if not lo <= V.length <= hi or (V.length - W.length) % n:
        raise ConsistencyError(f"cycle replacement length {V.length} misses the window or congruence")
    if not V.is_valid_in(D):
        raise ConsistencyError("cycle replacement left the digraph")
    return V
