"""
Exact max-plus arithmetic.

Weights live in the additive (log-domain) convention: a finite weight is a
``fractions.Fraction``, the semiring zero (no edge, max-times 0) is ``None``.
An approximate mode stores ``float`` weights instead; it is selected by giving a
matrix a positive ``tolerance`` and is only meant for decimal max-times input.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice
from typing import Iterator, Optional, Sequence, Tuple, Union

from algebra.errors import ClosureDivergenceError, DimensionMismatchError, NonFiniteScalingError

Weight = Optional[Union[Fraction, float]]
Row = Tuple[Weight, ...]
Block = Tuple[Row, ...]

BOTTOM: Weight = None
ONE: Weight = Fraction(0)

_BOTTOM_TOKENS = {"-inf", ".", "⊥", "bottom", "-infinity"}


def as_weight(value, exact: bool = True) -> Weight:
    """
    Coerce user input into a weight.

    Args:
        value: None, int, Fraction, float or a string such as "3/2", "-1" or "-inf"
        exact: When True floats are rejected instead of silently becoming inexact rationals

    Returns:
        A Fraction, a float (approximate mode) or None for the semiring zero
    """
    if value is None:
        return None
    if isinstance(value, str):
        token = value.strip()
        if token.lower() in _BOTTOM_TOKENS:
            return None
        if exact:
            return Fraction(token)
        return float(token)
    if isinstance(value, bool):
        raise TypeError("booleans are not tropical weights")
    if isinstance(value, (int, Fraction)):
        return Fraction(value) if exact else float(value)
    if isinstance(value, float):
        if math.isinf(value) and value < 0:
            return None
        if exact:
            raise TypeError(f"float {value!r} given to an exact matrix; pass a string or Fraction")
        if math.isnan(value) or math.isinf(value):
            raise ValueError(f"non-finite weight {value!r}")
        return value
    raise TypeError(f"cannot interpret {value!r} as a tropical weight")


def format_weight(w: Weight) -> str:
    """Canonical text of a weight: "p/q", "p" or "-inf"."""
    if w is None:
        return "-inf"
    if isinstance(w, float):
        return repr(w)
    return str(w)


def tadd(a: Weight, b: Weight) -> Weight:
    """Tropical addition: max, with the semiring zero neutral."""
    if a is None:
        return b
    if b is None:
        return a
    return a if a >= b else b


def tmul(a: Weight, b: Weight) -> Weight:
    """Tropical multiplication: ordinary sum, with the semiring zero absorbing."""
    if a is None or b is None:
        return None
    return a + b


def weights_close(a: Weight, b: Weight, tol: float = 0.0) -> bool:
    if a is None or b is None:
        return a is None and b is None
    if tol:
        return abs(a - b) <= tol
    return a == b


def rows_close(u: Sequence[Weight], v: Sequence[Weight], tol: float = 0.0) -> bool:
    if not tol:
        return tuple(u) == tuple(v)
    return len(u) == len(v) and all(weights_close(a, b, tol) for a, b in zip(u, v))


def _freeze_block(rows) -> Block:
    return tuple(tuple(row) for row in rows)


@dataclass(frozen=True)
class TropMatrix:
    """Dense square max-plus matrix. Immutable and hashable."""

    entries: Block
    tolerance: float = 0.0

    def __post_init__(self):
        entries = _freeze_block(self.entries)
        n = len(entries)
        if n < 1:
            raise DimensionMismatchError("a tropical matrix needs at least one row")
        for row in entries:
            if len(row) != n:
                raise DimensionMismatchError(f"matrix is not square: row of length {len(row)} in {n}x{n}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows, tolerance: float = 0.0) -> "TropMatrix":
        """Build a matrix from nested sequences of anything ``as_weight`` accepts."""
        exact = not tolerance
        return cls(tuple(tuple(as_weight(x, exact=exact) for x in row) for row in rows), tolerance)

    @classmethod
    def identity(cls, n: int, tolerance: float = 0.0) -> "TropMatrix":
        zero = 0.0 if tolerance else ONE
        return cls(tuple(tuple(zero if i == j else None for j in range(n)) for i in range(n)), tolerance)

    @classmethod
    def bottom(cls, n: int, tolerance: float = 0.0) -> "TropMatrix":
        return cls(tuple((None,) * n for _ in range(n)), tolerance)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def is_exact(self) -> bool:
        return not self.tolerance

    def __getitem__(self, index: Tuple[int, int]) -> Weight:
        i, j = index
        return self.entries[i][j]

    def row(self, k: int) -> Row:
        return self.entries[k]

    def column(self, k: int) -> Row:
        return tuple(row[k] for row in self.entries)

    def transpose(self) -> "TropMatrix":
        return TropMatrix(tuple(zip(*self.entries)), self.tolerance)

    def finite_weights(self) -> Iterator[Tuple[int, int, Weight]]:
        for i, row in enumerate(self.entries):
            for j, w in enumerate(row):
                if w is not None:
                    yield i, j, w

    def close_to(self, other: "TropMatrix") -> bool:
        if self.n != other.n:
            return False
        tol = max(self.tolerance, other.tolerance)
        return all(rows_close(u, v, tol) for u, v in zip(self.entries, other.entries))

    def __str__(self) -> str:
        return "\n".join(" ".join(format_weight(w) if w is not None else "." for w in row) for row in self.entries)


def _check_same_size(A: TropMatrix, B: TropMatrix) -> None:
    if A.n != B.n:
        raise DimensionMismatchError(f"dimension mismatch: {A.n}x{A.n} vs {B.n}x{B.n}")


def block_product(left: Block, right: Block) -> Block:
    """Max-plus product of two rectangular blocks (m x k times k x q)."""
    inner = len(right)
    if left and len(left[0]) != inner:
        raise DimensionMismatchError(f"inner dimensions differ: {len(left[0])} vs {inner}")
    columns = list(zip(*right)) if right else []
    result = []
    for row in left:
        support = [(k, w) for k, w in enumerate(row) if w is not None]
        new_row = []
        for col in columns:
            best = None
            for k, w in support:
                b = col[k]
                if b is not None:
                    s = w + b
                    if best is None or s > best:
                        best = s
            new_row.append(best)
        result.append(tuple(new_row))
    return tuple(result)


def mat_mul(A: TropMatrix, B: TropMatrix) -> TropMatrix:
    """(A ⊗ B)_{i,j} = max_k a_{i,k} + b_{k,j}."""
    _check_same_size(A, B)
    return TropMatrix(block_product(A.entries, B.entries), max(A.tolerance, B.tolerance))


def mat_add(A: TropMatrix, B: TropMatrix) -> TropMatrix:
    """Entrywise tropical sum."""
    _check_same_size(A, B)
    return TropMatrix(
        tuple(tuple(tadd(a, b) for a, b in zip(u, v)) for u, v in zip(A.entries, B.entries)),
        max(A.tolerance, B.tolerance),
    )


def vec_mat(v: Sequence[Weight], A: TropMatrix) -> Row:
    """Row vector times matrix: (v ⊗ A)_j = max_k v_k + a_{k,j}."""
    if len(v) != A.n:
        raise DimensionMismatchError(f"vector of length {len(v)} against {A.n}x{A.n} matrix")
    return block_product((tuple(v),), A.entries)[0]


def unit_vector(n: int, k: int, tolerance: float = 0.0) -> Row:
    zero = 0.0 if tolerance else ONE
    return tuple(zero if j == k else None for j in range(n))


def shift(A: TropMatrix, c: Weight) -> TropMatrix:
    """Add the scalar c to every finite entry (tropical scalar multiplication)."""
    return TropMatrix(tuple(tuple(tmul(w, c) for w in row) for row in A.entries), A.tolerance)


def mat_power_stream(A: TropMatrix) -> Iterator[TropMatrix]:
    """Yield A, A^2, A^3, ... lazily."""
    power = A
    while True:
        yield power
        power = mat_mul(power, A)


def mat_power(A: TropMatrix, t: int) -> TropMatrix:
    """A^t for t >= 0 (A^0 is the tropical identity)."""
    if t < 0:
        raise ValueError(f"negative exponent {t}")
    if t == 0:
        return TropMatrix.identity(A.n, A.tolerance)
    return next(islice(mat_power_stream(A), t - 1, None))


def kleene_star(A: TropMatrix) -> TropMatrix:
    """
    I ⊕ A ⊕ ... ⊕ A^{n-1}.

    Raises:
        ClosureDivergenceError: if some cycle has positive weight
    """
    n = A.n
    star = TropMatrix.identity(n, A.tolerance)
    power = star
    for t in range(1, n + 1):
        power = mat_mul(power, A)
        for i in range(n):
            d = power.entries[i][i]
            if d is not None and d > A.tolerance:
                raise ClosureDivergenceError(
                    f"closed walk of length {t} at node {i} has positive weight {format_weight(d)}"
                )
        if t < n:
            star = mat_add(star, power)
    return star


def scale_diag(A: TropMatrix, x: Sequence[Weight]) -> TropMatrix:
    """Diagonal similarity scaling: a_{i,j} - x_i + x_j on finite entries."""
    if len(x) != A.n:
        raise DimensionMismatchError(f"scaling vector of length {len(x)} for {A.n}x{A.n} matrix")
    for i, xi in enumerate(x):
        if xi is None or (isinstance(xi, float) and not math.isfinite(xi)):
            raise NonFiniteScalingError(f"scaling component {i} is not finite")
    return TropMatrix(
        tuple(
            tuple(None if w is None else w - x[i] + x[j] for j, w in enumerate(row))
            for i, row in enumerate(A.entries)
        ),
        A.tolerance,
    )
