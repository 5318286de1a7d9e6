"""Exact linear algebra over the library's fields (rank and kernel)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .fields import Field, Rationals


def rank(field: Field, rows: Sequence[Sequence]) -> int:
    """Rank of a matrix of raw field elements.

    Over QQ the rows are scaled to integers and reduced with Bareiss'
    fraction-free elimination; finite fields use plain Gaussian elimination.
    """
    if isinstance(field, Rationals):
        return _bareiss_rank([_integer_row(r) for r in rows])
    return len(_echelon(field, [list(r) for r in rows])[1])


def _integer_row(row):
    den = 1
    for v in row:
        den = den * v.denominator // _gcd(den, v.denominator)
    return [int(v * den) for v in row]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _bareiss_rank(M: list[list[int]]) -> int:
    if not M:
        return 0
    M = [list(r) for r in M]
    m, n = len(M), len(M[0])
    prev = 1
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, m):
            for j in range(c + 1, n):
                M[i][j] = (M[i][j] * M[r][c] - M[i][c] * M[r][j]) // prev
            M[i][c] = 0
        prev = M[r][c]
        r += 1
        if r == m:
            break
    return r


def _echelon(field: Field, M: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form in place; returns (rows, pivot columns)."""
    if not M:
        return M, []
    m, n = len(M), len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if not field.is_zero(M[i][c])), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = field.inv(M[r][c])
        M[r] = [field.mul(v, inv) for v in M[r]]
        for i in range(m):
            if i != r and not field.is_zero(M[i][c]):
                t = M[i][c]
                M[i] = [field.sub(a, field.mul(t, b)) for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return M, pivots


def kernel(field: Field, rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Basis of {v : rows . v = 0} as lists of raw elements."""
    M = [list(r) for r in rows]
    if isinstance(field, Rationals):
        M = [[Fraction(v) for v in r] for r in M]
    M, pivots = _echelon(field, M)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero] * ncols
        v[fc] = field.one
        for i, pc in enumerate(pivots):
            v[pc] = field.neg(M[i][fc])
        basis.append(v)
    return basis
