"""
Matrix documents: the on-disk form of matrices, factorizations and violation reproducers.

Two formats are read. JSON documents carry the full MatrixDocument; the text format is
one whitespace-separated row per line, "." (or "-inf") for the semiring zero and "#"
starting a comment. Only JSON is written.
"""

import json
import math
from pathlib import Path
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from algebra.bounds import Factorization
from algebra.tropical_core import TropMatrix, as_weight, format_weight


class MatrixFormatError(ValueError):
    """Raised when a matrix file cannot be parsed."""


def _token(x) -> str:
    """JSON null stands for the semiring zero."""
    if x is None:
        return "-inf"
    return x if isinstance(x, str) else str(x)


def _canonical_max_plus(token: str) -> str:
    try:
        return format_weight(as_weight(token))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"entry {token!r} is neither a rational nor -inf")


def _canonical_max_times(token: str) -> str:
    try:
        value = float(token)
    except ValueError:
        raise ValueError(f"entry {token!r} is not a number")
    if math.isnan(value) or math.isinf(value) or value < 0:
        raise ValueError(f"max-times entry {token!r} must be a finite non-negative number")
    return token.strip()


class FactorizationDocument(BaseModel):
    """n x r blocks V and W with A = V (x) W^T."""

    V: List[List[str]]
    W: List[List[str]]

    @field_validator("V", "W", mode="before")
    @classmethod
    def _canonical_entries(cls, block):
        if not isinstance(block, list) or not all(isinstance(row, list) for row in block):
            raise ValueError("factorization blocks must be lists of rows")
        return [[_canonical_max_plus(_token(x)) for x in row] for row in block]


class MatrixDocument(BaseModel):
    """
    A square matrix with metadata. Max-plus entries are stored canonically ("p/q", "p" or
    "-inf"), so printing a parsed document reproduces it exactly.
    """

    n: int = Field(ge=1)
    convention: Literal["max-plus", "max-times-float"] = "max-plus"
    entries: List[List[str]]
    name: Optional[str] = None
    source: Optional[str] = None
    notes: Optional[str] = None
    factorization: Optional[FactorizationDocument] = None

    @field_validator("entries", mode="before")
    @classmethod
    def _stringify(cls, value):
        if not isinstance(value, list):
            raise ValueError("entries must be a list of rows")
        return [[_token(x) for x in row] for row in value]

    @model_validator(mode="after")
    def _shape_and_values(self) -> "MatrixDocument":
        if len(self.entries) != self.n or any(len(row) != self.n for row in self.entries):
            raise ValueError(f"entries must form a {self.n}x{self.n} array")
        canonical = _canonical_max_plus if self.convention == "max-plus" else _canonical_max_times
        self.entries = [[canonical(x) for x in row] for row in self.entries]
        if self.factorization is not None:
            if self.convention != "max-plus":
                raise ValueError("factorizations are only supported for max-plus documents")
            F = self.factorization
            if len(F.V) != self.n or len(F.W) != self.n:
                raise ValueError(f"factorization blocks need {self.n} rows")
        return self


def to_matrix(doc: MatrixDocument, tolerance: float = 1e-9) -> TropMatrix:
    """
    Exact TropMatrix for max-plus documents. Max-times documents go through the natural
    logarithm (0 becomes the semiring zero) into an approximate matrix with ``tolerance``.
    """
    if doc.convention == "max-plus":
        return TropMatrix.from_rows(doc.entries)
    rows = [[None if float(x) == 0 else math.log(float(x)) for x in row] for row in doc.entries]
    return TropMatrix.from_rows(rows, tolerance=tolerance)


def from_matrix(
    A: TropMatrix,
    name: Optional[str] = None,
    source: Optional[str] = None,
    notes: Optional[str] = None,
    factorization: Optional[Factorization] = None,
) -> MatrixDocument:
    """Document of a matrix. Float entries of approximate matrices are stored as the rationals of their decimal text."""
    fdoc = None
    if factorization is not None:
        fdoc = FactorizationDocument(
            V=[[format_weight(w) for w in row] for row in factorization.V],
            W=[[format_weight(w) for w in row] for row in factorization.W],
        )
    entries = [[format_weight(A[i, j]) for j in range(A.n)] for i in range(A.n)]
    return MatrixDocument(n=A.n, entries=entries, name=name, source=source, notes=notes, factorization=fdoc)


def factorization_of(doc: Union[MatrixDocument, FactorizationDocument]) -> Optional[Factorization]:
    fdoc = doc if isinstance(doc, FactorizationDocument) else doc.factorization
    if fdoc is None:
        return None
    return Factorization.from_rows(fdoc.V, fdoc.W)


def parse_text(text: str, name: Optional[str] = None, convention: str = "max-plus") -> MatrixDocument:
    """
    Parse the whitespace text format.

    Raises:
        MatrixFormatError: if the text holds no rows
    """
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise MatrixFormatError("no matrix rows found")
    return MatrixDocument(n=len(rows), convention=convention, entries=rows, name=name)


def format_text(doc: MatrixDocument) -> str:
    """Aligned text rendering with "." for the semiring zero."""
    cells = [["." if x == "-inf" else x for x in row] for row in doc.entries]
    width = max(len(x) for row in cells for x in row)
    lines = [f"# {doc.name}"] if doc.name else []
    lines += [" ".join(x.rjust(width) for x in row) for row in cells]
    return "\n".join(lines) + "\n"


def dumps_document(doc: Union[MatrixDocument, FactorizationDocument]) -> str:
    """Byte-stable JSON: sorted keys, two-space indent, unset metadata left out."""
    return json.dumps(doc.model_dump(exclude_none=True), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads_document(text: str, name: Optional[str] = None) -> MatrixDocument:
    """
    Parse a JSON document, falling back to the text format when the input is not JSON.

    Raises:
        MatrixFormatError: if neither format applies
        pydantic.ValidationError: if a JSON document has the wrong shape or entries
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise MatrixFormatError(f"invalid JSON matrix document: {e}")
        return MatrixDocument.model_validate(data)
    try:
        return parse_text(text, name=name)
    except ValueError as e:
        raise MatrixFormatError(f"invalid text matrix: {e}")


def load_document(path: Union[str, Path]) -> MatrixDocument:
    """
    Read a matrix file.

    Raises:
        FileNotFoundError: if the file does not exist
        MatrixFormatError: if the content cannot be parsed
    """
    path = Path(path)
    with open(path, 'r', encoding='utf-8') as file:
        text = file.read()
    return loads_document(text, name=path.stem)


def load_factorization(path: Union[str, Path]) -> Factorization:
    """
    Read a factorization from either a bare {"V": ..., "W": ...} document or a matrix
    document carrying one.

    Raises:
        MatrixFormatError: if the file holds no factorization
    """
    with open(path, 'r', encoding='utf-8') as file:
        try:
            data = json.load(file)
        except json.JSONDecodeError as e:
            raise MatrixFormatError(f"invalid JSON factorization document: {e}")
    if isinstance(data, dict) and "entries" in data:
        F = factorization_of(MatrixDocument.model_validate(data))
    else:
        F = factorization_of(FactorizationDocument.model_validate(data))
    if F is None:
        raise MatrixFormatError(f"{path} holds no factorization")
    return F


def save_document(doc: MatrixDocument, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as file:
        file.write(dumps_document(doc))
    return path
