"""Sparse binary label matrices: parsing, column statistics, structure detection."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence


class DatasetFormatError(ValueError):
    """Raised when dataset text does not follow the ``n m`` + rows format."""


@dataclass(frozen=True)
class LabelMatrix:
    """An n x m binary label matrix stored both by rows and by columns.

    ``rows[i]`` is the sorted tuple of labels of example ``i``;
    ``cols[j]`` is the sorted tuple of examples carrying label ``j``.
    Use :meth:`from_rows` rather than the constructor.
    """

    n: int
    m: int
    rows: tuple[tuple[int, ...], ...]
    cols: tuple[tuple[int, ...], ...] = field(repr=False)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], m: int) -> "LabelMatrix":
        norm = []
        for i, row in enumerate(rows):
            r = sorted(row)
            for a, b in zip(r, r[1:]):
                if a == b:
                    raise ValueError(f"row {i}: duplicate label id {a}")
            if r and (r[0] < 0 or r[-1] >= m):
                raise ValueError(f"row {i}: label id out of range [0, {m})")
            norm.append(tuple(r))
        cols: list[list[int]] = [[] for _ in range(m)]
        for i, r in enumerate(norm):
            for j in r:
                cols[j].append(i)
        return cls(len(norm), m, tuple(norm), tuple(tuple(c) for c in cols))

    @cached_property
    def col_masks(self) -> tuple[int, ...]:
        """Column j as an int bitset over examples (bit i set iff y_ij = 1)."""
        masks = []
        for c in self.cols:
            mask = 0
            for i in c:
                mask |= 1 << i
            masks.append(mask)
        return tuple(masks)

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m}"]
        lines.extend(" ".join(map(str, r)) for r in self.rows)
        return "\n".join(lines) + "\n"


def parse_dataset(text: str) -> LabelMatrix:
    """Parse ``"n m"`` followed by exactly n lines of 0-based label ids."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise DatasetFormatError("empty input, expected header 'n m'")
    header = lines[0].split()
    if len(header) != 2:
        raise DatasetFormatError(f"malformed header {lines[0]!r}")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise DatasetFormatError(f"malformed header {lines[0]!r}") from None
    if n < 0 or m < 0:
        raise DatasetFormatError("n and m must be nonnegative")
    body = lines[1:]
    if len(body) != n:
        raise DatasetFormatError(f"expected {n} data lines, found {len(body)}")
    rows = []
    for lineno, line in enumerate(body, start=2):
        try:
            ids = [int(tok) for tok in line.split()]
        except ValueError:
            raise DatasetFormatError(f"line {lineno}: non-integer label id") from None
        for j in ids:
            if j < 0 or j >= m:
                raise DatasetFormatError(f"line {lineno}: label id {j} out of range [0, {m})")
        if len(set(ids)) != len(ids):
            raise DatasetFormatError(f"line {lineno}: duplicate label id")
        rows.append(ids)
    return LabelMatrix.from_rows(rows, m)


def read_dataset(path) -> LabelMatrix:
    with open(path, encoding="ascii") as fh:
        return parse_dataset(fh.read())


@dataclass(frozen=True)
class ColumnStats:
    weights: tuple[int, ...]
    fractions: tuple[Fraction, ...]
    total_weight: int


def column_stats(Y: LabelMatrix) -> ColumnStats:
    weights = tuple(len(c) for c in Y.cols)
    if Y.n:
        fractions = tuple(Fraction(w, Y.n) for w in weights)
    else:
        fractions = tuple(Fraction(0) for _ in weights)
    return ColumnStats(weights, fractions, sum(weights))


class Kind(enum.Enum):
    MULTI_CLASS = "multiclass"
    NESTED = "nested"
    GENERAL = "general"


@dataclass(frozen=True)
class StructureKind:
    kind: Kind
    nested_order: tuple[int, ...] | None = None


def nested_order(Y: LabelMatrix) -> tuple[int, ...] | None:
    """Return a label order making the columns a componentwise chain, or None.

    Columns are sorted by (weight, label id). Two columns of equal weight can
    only be chained if they are identical, so any permutation inside such a
    group is as good as the sorted one.
    """
    masks = Y.col_masks
    order = sorted(range(Y.m), key=lambda j: (len(Y.cols[j]), j))
    for a, b in zip(order, order[1:]):
        if masks[a] & ~masks[b]:
            return None
    return tuple(order)


def detect_structure(Y: LabelMatrix) -> StructureKind:
    if Y.n > 0 and all(len(r) == 1 for r in Y.rows):
        return StructureKind(Kind.MULTI_CLASS)
    order = nested_order(Y)
    if order is not None:
        return StructureKind(Kind.NESTED, order)
    return StructureKind(Kind.GENERAL)


def is_multiclass(Y: LabelMatrix) -> bool:
    return detect_structure(Y).kind is Kind.MULTI_CLASS


def matrix_from_columns(cols: Sequence[Iterable[int]], n: int) -> LabelMatrix:
    """Build a matrix from per-label example sets (handy for nested instances)."""
    rows: list[list[int]] = [[] for _ in range(n)]
    for j, c in enumerate(cols):
        for i in c:
            rows[i].append(j)
    return LabelMatrix.from_rows(rows, len(cols))
