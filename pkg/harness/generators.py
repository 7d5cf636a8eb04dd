"""
Seeded instance generators.

All randomness flows through ``numpy.random.Generator`` objects, either built from a
GenSpec seed or handed in by the runner, so instances are reproducible.
"""

import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from algebra.bounds import Factorization
from algebra.errors import ConsistencyError
from algebra.graph_analysis import Digraph, Walk, is_irreducible, is_strongly_connected
from algebra.tropical_core import ONE, TropMatrix, Weight, scale_diag
from harness.models import GenSpec

logger = logging.getLogger(__name__)

MAX_CONNECT_ATTEMPTS = 50
MAX_LOW_RANK_ATTEMPTS = 100


def _choice(rng: np.random.Generator, values: Sequence) -> object:
    return values[int(rng.integers(len(values)))]


def _random_scaling(rng: np.random.Generator, n: int) -> Tuple[Fraction, ...]:
    return tuple(Fraction(int(v)) for v in rng.integers(-2, 3, size=n))


def _matrix_from_weights(n: int, weights: dict) -> TropMatrix:
    return TropMatrix(tuple(tuple(weights.get((i, j)) for j in range(n)) for i in range(n)))


def _free_weights(spec: GenSpec, rng: np.random.Generator) -> dict:
    n = spec.n
    boolean = spec.structure == "boolean"
    values: List[Fraction] = [ONE] if boolean else [ONE] + spec.palette()
    for attempt in range(MAX_CONNECT_ATTEMPTS + 1):
        weights = {}
        for i in range(n):
            for j in range(n):
                if rng.random() < spec.density:
                    weights[(i, j)] = _choice(rng, values)
        if n == 1:
            weights.setdefault((0, 0), _choice(rng, values))
        if attempt == MAX_CONNECT_ATTEMPTS:
            order = [int(v) for v in rng.permutation(n)]
            for a, b in zip(order, order[1:] + order[:1]):
                weights.setdefault((a, b), _choice(rng, values))
        if is_strongly_connected(Digraph(n, frozenset(weights))):
            return weights
    raise ConsistencyError("spanning cycle did not connect the digraph")


def planted_weights(spec: GenSpec, rng: np.random.Generator) -> dict:
    """
    Digraph built from planted cycles of the given lengths.

    The first cycle runs 0 -> 1 -> ... -> L0-1 -> 0 with weight 0. Every later cycle of
    length L follows the first one from node 0, detours through up to L-1 fresh nodes and
    returns to 0; its edges off the first cycle get negative palette weights. With lengths
    [6, 4] on 7 nodes this is the Schwarz digraph, with [n, n-1] the Wielandt digraph.

    Raises:
        ValueError: if the cycles cannot be planted or leave nodes uncovered
    """
    n = spec.n
    first = spec.planted[0]
    palette = spec.palette()
    weights = {(v, (v + 1) % first): ONE for v in range(first)}
    fresh = first
    for L in spec.planted[1:]:
        m = min(n - fresh, L - 1)
        shared = L - m - 1
        if shared > first - 1:
            raise ValueError(f"cycle of length {L} cannot share a path with the first cycle of length {first}")
        route = list(range(shared + 1)) + list(range(fresh, fresh + m)) + [0]
        for a, b in zip(route, route[1:]):
            if (a, b) not in weights:
                weights[(a, b)] = _choice(rng, palette)
        fresh += m
    if fresh != n:
        raise ValueError(f"planted cycles {spec.planted} cover {fresh} of {n} nodes")
    return weights


def gen_irreducible(spec: GenSpec) -> TropMatrix:
    """
    An irreducible matrix following ``spec.structure``. Free and Boolean instances are
    redrawn until strongly connected; after repeated failures a random spanning cycle
    is added.
    """
    rng = spec.rng()
    if spec.structure == "low-rank":
        return gen_low_rank(spec)[0]
    if spec.structure == "planted":
        weights = planted_weights(spec, rng)
    else:
        weights = _free_weights(spec, rng)
    A = _matrix_from_weights(spec.n, weights)
    if spec.scale and spec.structure != "boolean":
        A = scale_diag(A, _random_scaling(rng, spec.n))
    logger.debug("generated %s instance: n=%d, seed=%d", spec.structure, spec.n, spec.seed)
    return A


def _random_block(rng: np.random.Generator, n: int, r: int, density: float, values: Sequence[Fraction]):
    block = [[_choice(rng, values) if rng.random() < density else None for _ in range(r)] for _ in range(n)]
    for alpha in range(r):
        if all(block[i][alpha] is None for i in range(n)):
            block[int(rng.integers(n))][alpha] = _choice(rng, values)
    return tuple(tuple(row) for row in block)


def gen_low_rank(spec: GenSpec) -> Tuple[TropMatrix, Factorization]:
    """
    A = V (x) W^T for random n x r blocks without zero columns. Redrawn until A is
    irreducible; the last attempt uses full blocks, which always gives a full matrix.
    """
    rng = spec.rng()
    n, r = spec.n, spec.rank or 1
    values = [ONE] + spec.palette()
    F = None
    for attempt in range(MAX_LOW_RANK_ATTEMPTS + 1):
        density = 1.0 if attempt == MAX_LOW_RANK_ATTEMPTS else max(spec.density, 1.0 / n)
        F = Factorization(_random_block(rng, n, r, density, values), _random_block(rng, n, r, density, values))
        if is_irreducible(F.product()):
            break
    logger.debug("low-rank instance: n=%d, r=%d, seed=%d, %d attempt(s)", n, r, spec.seed, attempt + 1)
    if spec.scale:
        x = _random_scaling(rng, n)
        F = Factorization(
            tuple(tuple(None if w is None else w - x[i] for w in row) for i, row in enumerate(F.V)),
            tuple(tuple(None if w is None else w + x[i] for w in row) for i, row in enumerate(F.W)),
        )
    return F.product(), F


def gen_reducible(spec: GenSpec) -> TropMatrix:
    """
    Two irreducible diagonal blocks joined by edges from the first block to the second
    only. Needs n >= 2.
    """
    rng = spec.rng()
    n1 = int(rng.integers(1, spec.n))
    top = gen_irreducible(spec.model_copy(update={"n": n1, "seed": int(rng.integers(2**63))}))
    bottom = gen_irreducible(spec.model_copy(update={"n": spec.n - n1, "seed": int(rng.integers(2**63))}))
    palette = spec.palette()
    rows = []
    for i in range(spec.n):
        row: List[Weight] = []
        for j in range(spec.n):
            if i < n1 and j < n1:
                row.append(top[i, j])
            elif i >= n1 and j >= n1:
                row.append(bottom[i - n1, j - n1])
            elif i < n1 and rng.random() < spec.density:
                row.append(_choice(rng, palette))
            else:
                row.append(None)
        rows.append(tuple(row))
    return TropMatrix(tuple(rows))


def gen_hamiltonian_digraph(rng: np.random.Generator, n: int, density: float) -> Tuple[Digraph, Walk]:
    """A random digraph containing a random Hamiltonian cycle, returned with that cycle."""
    order = [int(v) for v in rng.permutation(n)]
    edges = set(zip(order, order[1:] + order[:1]))
    for i in range(n):
        for j in range(n):
            if rng.random() < density:
                edges.add((i, j))
    return Digraph(n, frozenset(edges)), Walk(tuple(order) + (order[0],))


def gen_walk(rng: np.random.Generator, D: Digraph, length: int, start: Optional[int] = None) -> Walk:
    """A uniform random walk; every node of D must have an out-edge."""
    v = int(rng.integers(D.n)) if start is None else start
    nodes = [v]
    for _ in range(length):
        v = int(_choice(rng, D.successors[v]))
        nodes.append(v)
    return Walk(tuple(nodes))


def critical_hamiltonian_matrix(
    rng: np.random.Generator, D: Digraph, hamiltonian: Walk, palette: Sequence[Fraction]
) -> TropMatrix:
    """Weight 0 on the Hamiltonian cycle, negative palette weights elsewhere, then a random scaling."""
    cycle_edges = set(hamiltonian.edges())
    weights = {e: ONE if e in cycle_edges else _choice(rng, palette) for e in sorted(D.edges)}
    A = _matrix_from_weights(D.n, weights)
    return scale_diag(A, _random_scaling(rng, D.n))
