"""Dense exact linear algebra over the rationals.

Everything in the package ultimately reduces to row reduction of dense
matrices with `fractions.Fraction` entries.  Pivoting is deterministic
(first nonzero entry in column order, no magnitude heuristics), so every
derived basis is reproducible byte for byte.

Vectors are plain tuples of Fractions; matrices are immutable tuples of
row tuples wrapped in :class:`MatrixQ`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import DimensionError

Scalar = Fraction
Vector = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def vec(values: Iterable) -> Vector:
    return tuple(Fraction(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, k: int) -> Vector:
    return tuple(ONE if i == k else ZERO for i in range(n))


def vec_add(a: Vector, b: Vector) -> Vector:
    if len(a) != len(b):
        raise DimensionError(f"vector lengths differ: {len(a)} vs {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Vector, b: Vector) -> Vector:
    if len(a) != len(b):
        raise DimensionError(f"vector lengths differ: {len(a)} vs {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(s: Fraction, a: Vector) -> Vector:
    return tuple(s * x for x in a)


def is_zero_vector(a: Vector) -> bool:
    return all(x == 0 for x in a)


@dataclass(frozen=True)
class MatrixQ:
    """Immutable dense matrix over the rationals."""

    rows: int
    cols: int
    entries: tuple[Vector, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows:
            raise DimensionError(f"expected {self.rows} rows, got {len(self.entries)}")
        for r in self.entries:
            if len(r) != self.cols:
                raise DimensionError(f"ragged row: expected {self.cols} columns, got {len(r)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "MatrixQ":
        entries = tuple(vec(r) for r in rows)
        if entries:
            width = len(entries[0])
        else:
            if cols is None:
                raise DimensionError("empty matrix needs an explicit column count")
            width = cols
        return cls(len(entries), width, entries)

    @classmethod
    def identity(cls, n: int) -> "MatrixQ":
        return cls(n, n, tuple(unit_vector(n, i) for i in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "MatrixQ":
        return cls(rows, cols, tuple(zero_vector(cols) for _ in range(rows)))

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "MatrixQ":
        return MatrixQ(self.cols, self.rows, tuple(self.column(j) for j in range(self.cols)))

    def __add__(self, other: "MatrixQ") -> "MatrixQ":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("matrix shapes differ under addition")
        return MatrixQ(self.rows, self.cols,
                       tuple(vec_add(a, b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "MatrixQ") -> "MatrixQ":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("matrix shapes differ under subtraction")
        return MatrixQ(self.rows, self.cols,
                       tuple(vec_sub(a, b) for a, b in zip(self.entries, other.entries)))

    def scale(self, s) -> "MatrixQ":
        s = Fraction(s)
        return MatrixQ(self.rows, self.cols, tuple(vec_scale(s, r) for r in self.entries))

    def __matmul__(self, other: "MatrixQ") -> "MatrixQ":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            ri = self.entries[i]
            row = [ZERO] * other.cols
            for k, a in enumerate(ri):
                if a == 0:
                    continue
                rk = other.entries[k]
                for j, b in enumerate(rk):
                    if b != 0:
                        row[j] += a * b
            out.append(tuple(row))
        return MatrixQ(self.rows, other.cols, tuple(out))

    def apply(self, v: Vector) -> Vector:
        if len(v) != self.cols:
            raise DimensionError(f"vector length {len(v)} does not match {self.cols} columns")
        out = [ZERO] * self.rows
        for i, ri in enumerate(self.entries):
            acc = ZERO
            for a, x in zip(ri, v):
                if a != 0 and x != 0:
                    acc += a * x
            out[i] = acc
        return tuple(out)

    def is_zero(self) -> bool:
        return all(is_zero_vector(r) for r in self.entries)


@dataclass(frozen=True)
class RrefResult:
    matrix: MatrixQ
    pivots: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rref(m: MatrixQ) -> RrefResult:
    """Reduced row echelon form with deterministic pivoting.

    Scans columns left to right and picks the first row with a nonzero
    entry; no magnitude-based pivot choice is ever made, so the result
    is a function of the exact input alone.
    """
    work = [list(r) for r in m.entries]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        pr = None
        for i in range(r, m.rows):
            if work[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        pv = work[r][c]
        if pv != 1:
            work[r] = [x / pv for x in work[r]]
        for i in range(m.rows):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    reduced = MatrixQ(m.rows, m.cols, tuple(tuple(row) for row in work))
    return RrefResult(reduced, tuple(pivots))


def rank(m: MatrixQ) -> int:
    return rref(m).rank


def row_space_basis(rows: Sequence[Vector], width: int) -> tuple[Vector, ...]:
    """Canonical (reduced echelon) basis of the span of the given rows."""
    if not rows:
        return ()
    m = MatrixQ.from_rows(rows, cols=width)
    res = rref(m)
    return tuple(res.matrix.entries[i] for i in range(res.rank))


def kernel_basis(m: MatrixQ) -> tuple[Vector, ...]:
    """Basis of the right null space, one vector per free column.

    The free-column construction on the reduced echelon form yields a
    deterministic basis: for each non-pivot column c the vector has 1 in
    position c and the negated pivot-row entries above.
    """
    res = rref(m)
    pivot_set = set(res.pivots)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for c in free_cols:
        v = [ZERO] * m.cols
        v[c] = ONE
        for r_i, p in enumerate(res.pivots):
            v[p] = -res.matrix.entries[r_i][c]
        basis.append(tuple(v))
    return tuple(basis)


def solve_in_span(m: MatrixQ, b: Vector) -> Optional[Vector]:
    """One exact solution x of m @ x = b, or None when b is outside the span.

    Free variables are set to zero, so the returned solution is again a
    deterministic function of the input.
    """
    if len(b) != m.rows:
        raise DimensionError(f"rhs length {len(b)} does not match {m.rows} rows")
    aug = MatrixQ(m.rows, m.cols + 1,
                  tuple(row + (bb,) for row, bb in zip(m.entries, b)))
    res = rref(aug)
    if m.cols in res.pivots:
        return None
    x = [ZERO] * m.cols
    for r_i, p in enumerate(res.pivots):
        x[p] = res.matrix.entries[r_i][m.cols]
    return tuple(x)


@dataclass(frozen=True)
class QuotientSpace:
    """Ambient space modulo the span of a set of vectors.

    The subspace basis is kept in reduced echelon form.  Coset
    coordinates of an ambient vector are read off from the non-pivot
    columns after eliminating the pivot entries, which vanishes exactly
    on the subspace; `lift` is a section of that map.
    """

    ambient_dim: int
    subspace_basis: tuple[Vector, ...]
    pivots: tuple[int, ...]
    free_columns: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.free_columns)

    @property
    def subspace_dim(self) -> int:
        return len(self.subspace_basis)

    def reduce(self, v: Vector) -> Vector:
        """Canonical coset representative (pivot coordinates eliminated)."""
        if len(v) != self.ambient_dim:
            raise DimensionError(f"vector length {len(v)} does not match ambient {self.ambient_dim}")
        out = list(v)
        for row, p in zip(self.subspace_basis, self.pivots):
            f = out[p]
            if f != 0:
                for j, y in enumerate(row):
                    if y != 0:
                        out[j] -= f * y
        return tuple(out)

    def coset_coordinates(self, v: Vector) -> Vector:
        red = self.reduce(v)
        return tuple(red[c] for c in self.free_columns)

    def lift(self, coords: Vector) -> Vector:
        if len(coords) != self.dim:
            raise DimensionError(f"expected {self.dim} coset coordinates, got {len(coords)}")
        out = [ZERO] * self.ambient_dim
        for c, x in zip(self.free_columns, coords):
            out[c] = x
        return tuple(out)

    def contains(self, v: Vector) -> bool:
        """Whether v lies in the subspace (has zero coset class)."""
        return is_zero_vector(self.reduce(v))


def build_quotient(ambient_dim: int, spanning: Sequence[Vector]) -> QuotientSpace:
    basis = row_space_basis(list(spanning), ambient_dim)
    pivots = tuple(next(j for j, x in enumerate(row) if x != 0) for row in basis)
    pivot_set = set(pivots)
    free_cols = tuple(c for c in range(ambient_dim) if c not in pivot_set)
    return QuotientSpace(ambient_dim, basis, pivots, free_cols)


def parse_scalar(text: str) -> Fraction:
    """Parse "p/q" or "p" into an exact rational."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational scalar: {text!r}") from exc


def format_scalar(x: Fraction) -> str:
    return str(x)
