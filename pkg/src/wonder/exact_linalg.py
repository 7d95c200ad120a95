"""Exact rational linear algebra: rank, nullspace and solve.

Rational scalars are ``fractions.Fraction`` (always in lowest terms with a
positive denominator).  Matrices are reduced by clearing denominators
row-wise and running the fraction-free integer kernel; back-substitution is
done over the rationals.  No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from wonder.kernels import bareiss_echelon

Rat = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rat(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a Fraction."""
    return Fraction(text)


def format_rat(q: Fraction) -> str:
    """Canonical string: ``"p/q"``, or ``"p"`` when the denominator is 1."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class SparseMat:
    """Immutable sparse rational matrix in triplet form.

    No duplicate positions and no explicitly stored zeros.
    """

    rows: int
    cols: int
    entries: tuple[tuple[int, int, Fraction], ...]

    def __post_init__(self):
        seen = set()
        for r, c, v in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry ({r},{c}) out of range")
            if (r, c) in seen:
                raise ValueError(f"duplicate entry at ({r},{c})")
            if v == 0:
                raise ValueError(f"explicit zero stored at ({r},{c})")
            seen.add((r, c))

    @classmethod
    def from_dense(cls, dense) -> "SparseMat":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        entries = []
        for r, row in enumerate(dense):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for c, v in enumerate(row):
                v = Fraction(v)
                if v:
                    entries.append((r, c, v))
        return cls(rows, cols, tuple(entries))

    def to_dense(self) -> list[list[Fraction]]:
        dense = [[ZERO] * self.cols for _ in range(self.rows)]
        for r, c, v in self.entries:
            dense[r][c] = v
        return dense

    def transpose(self) -> "SparseMat":
        return SparseMat(
            self.cols, self.rows, tuple((c, r, v) for r, c, v in self.entries)
        )


def _scaled_int_rows(dense) -> list[list[int]]:
    """Clear denominators row by row; preserves row space and solution sets
    when applied jointly to an augmented matrix."""
    out = []
    for row in dense:
        mult = lcm(*(v.denominator for v in row)) if row else 1
        out.append([int(v * mult) for v in row])
    return out


def rank_rows(dense) -> int:
    """Rank of a dense rational matrix (list of Fraction rows)."""
    if not dense or not dense[0]:
        return 0
    r, _, _ = bareiss_echelon(_scaled_int_rows(dense), len(dense[0]))
    return r


def nullspace_rows(dense, cols: int) -> list[tuple[Fraction, ...]]:
    """Exact basis of the right kernel of a dense rational matrix."""
    if cols == 0:
        return []
    if not dense:
        basis = []
        for f in range(cols):
            v = [ZERO] * cols
            v[f] = ONE
            basis.append(tuple(v))
        return basis
    rank, pivots, ech = bareiss_echelon(_scaled_int_rows(dense), cols)
    pivot_set = set(pivots)
    free_cols = [c for c in range(cols) if c not in pivot_set]
    basis = []
    for f in free_cols:
        v = [ZERO] * cols
        v[f] = ONE
        for i in range(rank - 1, -1, -1):
            p = pivots[i]
            s = ZERO
            row = ech[i]
            for c in range(p + 1, cols):
                if row[c] and v[c]:
                    s += Fraction(row[c]) * v[c]
            v[p] = -s / row[p]
        basis.append(tuple(v))
    return basis


def solve_rows(dense, rhs, cols: int | None = None) -> tuple[Fraction, ...] | None:
    """One exact solution of ``A x = rhs`` (free variables set to 0), or
    ``None`` when the system is inconsistent."""
    nrows = len(dense)
    if len(rhs) != nrows:
        raise ValueError(f"rhs length {len(rhs)} != row count {nrows}")
    if cols is None:
        cols = len(dense[0]) if nrows else 0
    aug = [list(row) + [Fraction(b)] for row, b in zip(dense, rhs)]
    if not aug:
        return (ZERO,) * cols
    rank, pivots, ech = bareiss_echelon(_scaled_int_rows(aug), cols + 1)
    if any(p == cols for p in pivots):
        return None
    v = [ZERO] * (cols + 1)
    v[cols] = -ONE  # contribution of the rhs column during back-substitution
    for i in range(rank - 1, -1, -1):
        p = pivots[i]
        s = ZERO
        row = ech[i]
        for c in range(p + 1, cols + 1):
            if row[c] and v[c]:
                s += Fraction(row[c]) * v[c]
        v[p] = -s / row[p]
    return tuple(v[:cols])


def rank(m: SparseMat) -> int:
    """Exact rank over the rationals."""
    return rank_rows(m.to_dense())


def nullspace_basis(m: SparseMat) -> list[tuple[Fraction, ...]]:
    """Exact basis of the right kernel; size is cols - rank."""
    return nullspace_rows(m.to_dense(), m.cols)


def solve(m: SparseMat, rhs) -> tuple[Fraction, ...] | None:
    """Exact solution of ``m x = rhs`` or ``None`` if inconsistent."""
    return solve_rows(m.to_dense(), rhs, cols=m.cols)
