"""Exact rational linear algebra: fraction-free rank, RREF, nullspace, spans.

Rank uses Bareiss (fraction-free) elimination on integer-scaled rows, with
the pivot chosen as the smallest nonzero magnitude in the pivot column to
limit entry growth.  RREF and nullspace work over Fractions directly and are
used on the small matrices of the subspace comparisons.
"""

from __future__ import annotations

import math
from fractions import Fraction


def _to_int_rows(rows) -> list[list[int]]:
    out = []
    for row in rows:
        row = [Fraction(c) for c in row]
        scale = math.lcm(*(c.denominator for c in row)) if row else 1
        out.append([int(c * scale) for c in row])
    return out


def rank(rows) -> int:
    """Exact rank via fraction-free (Bareiss) elimination."""
    m = _to_int_rows(rows)
    if not m or not m[0]:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    prev = 1
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        pivot = None
        for i in range(r, n_rows):
            if m[i][c] != 0 and (pivot is None or abs(m[i][c]) < abs(m[pivot][c])):
                pivot = i
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, n_rows):
            for j in range(c + 1, n_cols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
    return r


def rref(rows) -> list[list[Fraction]]:
    """Reduced row echelon form over Fractions; zero rows dropped.

    The result is a canonical basis of the row space, so two subspaces are
    equal iff their RREFs are equal.
    """
    m = [[Fraction(c) for c in row] for row in rows]
    if not m:
        return []
    n_rows, n_cols = len(m), len(m[0])
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        pivot = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return [row for row in m[:r]]


def nullspace(rows) -> list[list[Fraction]]:
    """Basis of the right kernel {x : M x = 0}, from the RREF of M."""
    if not rows:
        return []
    n_cols = len(rows[0])
    red = rref(rows)
    pivots = []
    for row in red:
        lead = next(i for i, x in enumerate(row) if x != 0)
        pivots.append(lead)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * n_cols
        vec[f] = Fraction(1)
        for row, p in zip(red, pivots):
            vec[p] = -row[f]
        basis.append(vec)
    return basis


class Spanner:
    """Incrementally maintained echelon basis of a growing span."""

    def __init__(self, n_cols: int):
        self.n_cols = n_cols
        self._rows: dict[int, list[Fraction]] = {}  # leading column -> normalized row

    @property
    def dim(self) -> int:
        return len(self._rows)

    def _reduce(self, vec) -> list[Fraction]:
        vec = [Fraction(c) for c in vec]
        for lead in sorted(self._rows):
            if vec[lead] != 0:
                f = vec[lead]
                row = self._rows[lead]
                vec = [a - f * b for a, b in zip(vec, row)]
        return vec

    def contains(self, vec) -> bool:
        return all(c == 0 for c in self._reduce(vec))

    def add(self, vec) -> bool:
        """Add a vector; True if it extended the span."""
        red = self._reduce(vec)
        lead = next((i for i, c in enumerate(red) if c != 0), None)
        if lead is None:
            return False
        inv = 1 / red[lead]
        self._rows[lead] = [c * inv for c in red]
        return True
