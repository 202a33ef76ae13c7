"""Exact integer and rational linear algebra on intersection lattices.

Everything downstream (normal-class arithmetic, kernel dimensions, Euler
numbers) reduces to three primitives implemented here:

* evaluating a symmetric integer Gram form on coordinate vectors,
* the rank / kernel dimension of an exact rational matrix,
* the topological Euler number of a smooth curve from its divisor class,
  via adjunction: e(c) = -c.(c + K).

No floating point is used anywhere in this package.  Inputs in the built-in
catalog are small, but all arithmetic goes through Python integers and
``fractions.Fraction``, so the contract is unbounded precision.  Rank is
computed by fraction-free (Bareiss) elimination after clearing denominators;
only the rank over the rationals is needed, never torsion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vec = tuple[int, ...]
IntMatrix = tuple[tuple[int, ...], ...]


class ExactLatticeError(Exception):
    """Base class for errors raised by this module."""


class DimensionMismatch(ExactLatticeError):
    """A vector or matrix does not match the rank it is used against."""


class SmoothCurveParityError(ExactLatticeError):
    """A class whose adjunction sum is odd cannot carry a smooth curve."""


class ZeroCurveClass(ExactLatticeError):
    """The zero class is not the class of a curve."""


def vec(*coords: int) -> Vec:
    return tuple(int(c) for c in coords)


def as_vec(coords: Iterable[int]) -> Vec:
    return tuple(int(c) for c in coords)


def vec_add(u: Vec, v: Vec) -> Vec:
    if len(u) != len(v):
        raise DimensionMismatch(f"cannot add vectors of lengths {len(u)} and {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vec, v: Vec) -> Vec:
    if len(u) != len(v):
        raise DimensionMismatch(f"cannot subtract vectors of lengths {len(u)} and {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(k: int, u: Vec) -> Vec:
    return tuple(k * a for a in u)


def vec_zero(n: int) -> Vec:
    return (0,) * n


def vec_sum(vectors: Sequence[Vec], n: int) -> Vec:
    """Sum of ``vectors``, or the zero vector of length ``n`` if empty."""
    total = vec_zero(n)
    for v in vectors:
        total = vec_add(total, v)
    return total


def mat_vec(m: IntMatrix, v: Vec) -> Vec:
    """Apply an integer matrix (tuple of rows) to a coordinate vector."""
    if m and len(m[0]) != len(v):
        raise DimensionMismatch(
            f"matrix with {len(m[0])} columns applied to vector of length {len(v)}"
        )
    return tuple(sum(r[j] * v[j] for j in range(len(v))) for r in m)


def as_int_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    out = tuple(tuple(int(x) for x in row) for row in rows)
    if out and any(len(row) != len(out[0]) for row in out):
        raise DimensionMismatch("ragged matrix rows")
    return out


@dataclass(frozen=True)
class IntersectionLattice:
    """A finite-rank integral lattice with a symmetric Gram form.

    This is the numerical shadow of the second cohomology of a surface: a
    chosen (possibly partial) basis of divisor classes together with their
    intersection numbers.
    """

    rank: int
    gram: IntMatrix
    basis_labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise ExactLatticeError("rank must be non-negative")
        if len(self.gram) != self.rank or any(len(r) != self.rank for r in self.gram):
            raise DimensionMismatch(
                f"gram matrix must be {self.rank}x{self.rank}, got "
                f"{len(self.gram)} rows"
            )
        for i in range(self.rank):
            for j in range(i):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ExactLatticeError(
                        f"gram matrix is not symmetric at ({i},{j})"
                    )
        if len(self.basis_labels) != self.rank:
            raise DimensionMismatch(
                f"expected {self.rank} basis labels, got {len(self.basis_labels)}"
            )
        if len(set(self.basis_labels)) != self.rank:
            raise ExactLatticeError("basis labels must be pairwise distinct")

    def check_vector(self, v: Sequence[int], what: str = "vector") -> None:
        if len(v) != self.rank:
            raise DimensionMismatch(
                f"{what} {tuple(v)} of length {len(v)} does not match rank-"
                f"{self.rank} lattice [{', '.join(self.basis_labels)}]"
            )


def make_lattice(gram: Iterable[Iterable[int]], labels: Sequence[str] | None = None) -> IntersectionLattice:
    g = as_int_matrix(gram)
    if labels is None:
        labels = tuple(f"b{i + 1}" for i in range(len(g)))
    return IntersectionLattice(rank=len(g), gram=g, basis_labels=tuple(labels))


def pair(u: Sequence[int], v: Sequence[int], lattice: IntersectionLattice) -> int:
    """Evaluate the Gram form: sum_ij u_i G_ij v_j.  Symmetric and bilinear."""
    lattice.check_vector(u, "left vector")
    lattice.check_vector(v, "right vector")
    total = 0
    for i, ui in enumerate(u):
        if ui == 0:
            continue
        row = lattice.gram[i]
        total += ui * sum(row[j] * v[j] for j in range(lattice.rank))
    return total


def adjunction_euler(c: Sequence[int], canonical: Sequence[int], lattice: IntersectionLattice) -> int:
    """Euler number of a smooth curve of class ``c``: -(c.c + c.K).

    The result is 2 - 2g, hence always even; an odd adjunction sum means the
    class cannot be represented by a smooth curve under this form and signals
    inconsistent lattice data.
    """
    if all(x == 0 for x in c):
        raise ZeroCurveClass("the zero class is not a curve class")
    s = pair(c, c, lattice) + pair(c, canonical, lattice)
    if s % 2 != 0:
        raise SmoothCurveParityError(
            f"class {tuple(c)} not representable by a smooth curve under this "
            f"form: adjunction sum {s} is odd"
        )
    return -s


@dataclass(frozen=True)
class RationalMatrix:
    """A dense matrix of exact rationals (rows of ``Fraction``)."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows:
            raise DimensionMismatch("row count does not match entries")
        for r in self.entries:
            if len(r) != self.cols:
                raise DimensionMismatch("column count does not match entries")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int | Fraction]]) -> "RationalMatrix":
        entries = tuple(tuple(Fraction(x) for x in row) for row in rows)
        n_rows = len(entries)
        n_cols = len(entries[0]) if entries else 0
        if any(len(r) != n_cols for r in entries):
            raise DimensionMismatch("ragged matrix rows")
        return cls(rows=n_rows, cols=n_cols, entries=entries)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "RationalMatrix":
        z = Fraction(0)
        return cls(rows=rows, cols=cols, entries=tuple((z,) * cols for _ in range(rows)))

    def apply(self, v: Sequence[int | Fraction]) -> tuple[Fraction, ...]:
        if len(v) != self.cols:
            raise DimensionMismatch(
                f"matrix with {self.cols} columns applied to vector of length {len(v)}"
            )
        return tuple(sum((r[j] * v[j] for j in range(self.cols)), Fraction(0)) for r in self.entries)

    def rank(self) -> int:
        return matrix_rank(self)


def _integer_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination.

    All intermediate values stay integral; divisions by the previous pivot
    are exact by the Bareiss identity.
    """
    if not rows or not rows[0]:
        return 0
    n_rows, n_cols = len(rows), len(rows[0])
    rank = 0
    prev_pivot = 1
    for col in range(n_cols):
        piv = next((i for i in range(rank, n_rows) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pivot_row = rows[rank]
        p = pivot_row[col]
        for i in range(rank + 1, n_rows):
            ri = rows[i]
            f = ri[col]
            for j in range(col, n_cols):
                q, rem = divmod(p * ri[j] - f * pivot_row[j], prev_pivot)
                assert rem == 0, "Bareiss exact-division invariant violated"
                ri[j] = q
        prev_pivot = p
        rank += 1
        if rank == n_rows:
            break
    return rank


def matrix_rank(m: RationalMatrix) -> int:
    """Exact rank over the rationals (denominators cleared row by row)."""
    scaled: list[list[int]] = []
    for r in m.entries:
        lcm = 1
        for x in r:
            lcm = lcm // math.gcd(lcm, x.denominator) * x.denominator
        scaled.append([int(x * lcm) for x in r])
    return _integer_rank(scaled)


def kernel_dimension(m: RationalMatrix) -> int:
    """Dimension of the right kernel: cols - rank, computed exactly."""
    return m.cols - matrix_rank(m)
