"""Sparse affine maps x -> Ax + b over exact rationals.

The matrix is stored in triplet form; only nonzero entries are kept, and the
three sparsity statistics used throughout the complexity accounting are

    l0        -- number of nonzero matrix entries,
    l0_colmax -- max over columns of the per-column entry count,
    l0_rowmax -- max over rows of the per-row entry count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(v) -> Fraction:
    """Coerce ints, strings like '3/4', and Fractions; rejects floats."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"expected exact rational, got {type(v).__name__}: {v!r}")


@dataclass(frozen=True)
class AffineMap:
    """Affine map R^cols -> R^rows, x -> Ax + b, with A sparse."""

    rows: int
    cols: int
    entries: tuple[tuple[int, int, Fraction], ...]  # sorted by (row, col), nonzero
    bias: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("AffineMap dimensions must be positive")
        if len(self.bias) != self.rows:
            raise ValueError("bias length must equal rows")
        seen = set()
        for i, j, v in self.entries:
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ValueError(f"entry ({i},{j}) out of range")
            if v == 0:
                raise ValueError("stored entries must be nonzero")
            if (i, j) in seen:
                raise ValueError(f"duplicate entry at ({i},{j})")
            seen.add((i, j))

    @staticmethod
    def from_entries(rows: int, cols: int,
                     entries: Iterable[tuple[int, int, object]],
                     bias: Sequence[object] | None = None) -> "AffineMap":
        b = tuple(as_fraction(v) for v in bias) if bias is not None else (ZERO,) * rows
        ents = tuple(sorted((i, j, as_fraction(v)) for i, j, v in entries
                            if as_fraction(v) != 0))
        return AffineMap(rows, cols, ents, b)

    @staticmethod
    def from_dense(matrix: Sequence[Sequence[object]],
                   bias: Sequence[object] | None = None) -> "AffineMap":
        rows = len(matrix)
        cols = len(matrix[0])
        ents = [(i, j, v) for i, row in enumerate(matrix) for j, v in enumerate(row)]
        return AffineMap.from_entries(rows, cols, ents, bias)

    @staticmethod
    def identity(n: int) -> "AffineMap":
        return AffineMap.from_entries(n, n, [(i, i, ONE) for i in range(n)])

    @staticmethod
    def constant(bias: Sequence[object], cols: int) -> "AffineMap":
        return AffineMap.from_entries(len(list(bias)), cols, [], bias)

    # -- sparsity statistics ------------------------------------------------

    @property
    def l0(self) -> int:
        return len(self.entries)

    @property
    def l0_colmax(self) -> int:
        counts: dict[int, int] = {}
        for _, j, _ in self.entries:
            counts[j] = counts.get(j, 0) + 1
        return max(counts.values(), default=0)

    @property
    def l0_rowmax(self) -> int:
        counts: dict[int, int] = {}
        for i, _, _ in self.entries:
            counts[i] = counts.get(i, 0) + 1
        return max(counts.values(), default=0)

    @property
    def bias_l0(self) -> int:
        return sum(1 for v in self.bias if v != 0)

    # -- algebra ------------------------------------------------------------

    def apply(self, x: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if len(x) != self.cols:
            raise ValueError(f"expected input of length {self.cols}, got {len(x)}")
        out = list(self.bias)
        for i, j, v in self.entries:
            out[i] += v * x[j]
        return tuple(out)

    def rows_dict(self) -> list[dict[int, Fraction]]:
        rows: list[dict[int, Fraction]] = [dict() for _ in range(self.rows)]
        for i, j, v in self.entries:
            rows[i][j] = v
        return rows

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """self o inner as a single affine map: A2(A1 x + b1) + b2."""
        if self.cols != inner.rows:
            raise ValueError("dimension mismatch in composition")
        inner_rows = inner.rows_dict()
        acc: dict[tuple[int, int], Fraction] = {}
        bias = list(self.bias)
        for i, k, v in self.entries:
            bias[i] += v * inner.bias[k]
            for j, w in inner_rows[k].items():
                key = (i, j)
                acc[key] = acc.get(key, ZERO) + v * w
        ents = [(i, j, v) for (i, j), v in acc.items() if v != 0]
        return AffineMap.from_entries(self.rows, inner.cols, ents, bias)

    def scale(self, a: Fraction) -> "AffineMap":
        a = as_fraction(a)
        if a == 0:
            return AffineMap.constant([ZERO] * self.rows, self.cols)
        return AffineMap.from_entries(
            self.rows, self.cols,
            [(i, j, a * v) for i, j, v in self.entries],
            [a * b for b in self.bias])

    def add(self, other: "AffineMap") -> "AffineMap":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch in addition")
        acc: dict[tuple[int, int], Fraction] = {(i, j): v for i, j, v in self.entries}
        for i, j, v in other.entries:
            acc[(i, j)] = acc.get((i, j), ZERO) + v
        bias = [a + b for a, b in zip(self.bias, other.bias)]
        return AffineMap.from_entries(
            self.rows, self.cols,
            [(i, j, v) for (i, j), v in acc.items() if v != 0], bias)

    def block_diag(self, other: "AffineMap") -> "AffineMap":
        """Independent inputs: (x, y) -> (self x, other y)."""
        ents = list(self.entries)
        ents += [(i + self.rows, j + self.cols, v) for i, j, v in other.entries]
        return AffineMap.from_entries(self.rows + other.rows, self.cols + other.cols,
                                      ents, self.bias + other.bias)

    def vstack(self, other: "AffineMap") -> "AffineMap":
        """Shared input: x -> (self x, other x)."""
        if self.cols != other.cols:
            raise ValueError("vstack requires equal input dimensions")
        ents = list(self.entries)
        ents += [(i + self.rows, j, v) for i, j, v in other.entries]
        return AffineMap.from_entries(self.rows + other.rows, self.cols,
                                      ents, self.bias + other.bias)

    def hsum(self, other: "AffineMap") -> "AffineMap":
        """Separate inputs, summed output: (x, y) -> self x + other y."""
        if self.rows != other.rows:
            raise ValueError("hsum requires equal output dimensions")
        ents = list(self.entries)
        ents += [(i, j + self.cols, v) for i, j, v in other.entries]
        bias = [a + b for a, b in zip(self.bias, other.bias)]
        return AffineMap.from_entries(self.rows, self.cols + other.cols, ents, bias)

    def drop_row(self, row: int) -> "AffineMap":
        if self.rows == 1:
            raise ValueError("cannot drop the only row")
        ents = [(i if i < row else i - 1, j, v)
                for i, j, v in self.entries if i != row]
        bias = tuple(b for i, b in enumerate(self.bias) if i != row)
        return AffineMap.from_entries(self.rows - 1, self.cols, ents, bias)

    def drop_col_into_bias(self, col: int, value: Fraction) -> "AffineMap":
        """Remove input `col`, folding `value * column` into the bias."""
        if self.cols == 1:
            raise ValueError("cannot drop the only column")
        bias = list(self.bias)
        ents = []
        for i, j, v in self.entries:
            if j == col:
                bias[i] += v * value
            else:
                ents.append((i, j if j < col else j - 1, v))
        return AffineMap.from_entries(self.rows, self.cols - 1, ents, bias)
