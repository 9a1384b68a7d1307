"""Exact linear algebra over Q by fraction-free (Bareiss) elimination."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

__all__ = ["EchelonForm", "echelon", "rank", "solve"]


class InconsistentSystem(ValueError):
    pass


class Underdetermined(ValueError):
    pass


def _integer_row(row: Sequence) -> list[int]:
    den = 1
    for x in row:
        x = Fraction(x)
        if x.denominator != 1:
            den = lcm(den, x.denominator)
    return [int(Fraction(x) * den) for x in row]


@dataclass
class EchelonForm:
    rows: list[list[int]]
    pivots: list[int]  # pivot column of each nonzero row

    @property
    def rank(self) -> int:
        return len(self.pivots)


def echelon(matrix: Sequence[Sequence]) -> EchelonForm:
    """Row echelon form of an integer-scaled copy of ``matrix``.

    Every row is first cleared of denominators (this does not change the
    row space), then eliminated with Bareiss' update so that all
    intermediate entries stay integral and no gcd bookkeeping is needed.
    """
    m = [_integer_row(r) for r in matrix]
    if not m:
        return EchelonForm([], [])
    ncols = len(m[0])
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        row_r = m[r]
        for i in range(r + 1, len(m)):
            row_i = m[i]
            f = row_i[c]
            if f == 0:
                if p != prev:
                    m[i] = [(p * x) // prev for x in row_i]
                continue
            m[i] = [(p * x - f * y) // prev for x, y in zip(row_i, row_r)]
        prev = p
        pivots.append(c)
        r += 1
    return EchelonForm(m[: len(pivots)], pivots)


def rank(matrix: Sequence[Sequence]) -> int:
    return echelon(matrix).rank


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Unique exact solution of the (possibly over-determined) system ``a x = b``.

    Raises InconsistentSystem if no solution exists and Underdetermined if
    the solution is not unique.
    """
    ncols = len(a[0]) if a else 0
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    ech = echelon(aug)
    if ncols in ech.pivots:
        raise InconsistentSystem("right-hand side is not in the column span")
    if ech.rank < ncols:
        raise Underdetermined(f"rank {ech.rank} < {ncols} unknowns")
    x = [Fraction(0)] * ncols
    for row, c in reversed(list(zip(ech.rows, ech.pivots))):
        s = Fraction(row[ncols])
        for j in range(c + 1, ncols):
            if row[j]:
                s -= row[j] * x[j]
        x[c] = s / row[c]
    return x
