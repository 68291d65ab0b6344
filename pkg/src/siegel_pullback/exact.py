"""Small exact linear algebra over the rationals."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def parse_fraction(text: str) -> Fraction:
    """Parse ``"num/den"`` (or an integer string) into a Fraction."""
    return Fraction(text.strip().replace("−", "-"))


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    M = [[Fraction(x) for x in row] for row in rows]
    if not M:
        return M, []
    ncols = len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def solve(A: Sequence[Sequence], b: Sequence) -> tuple[list[Fraction] | None, int, int | None]:
    """Solve ``A x = b`` exactly.

    Returns ``(x, residual_rank, first_bad_row)``.  ``residual_rank`` is
    ``rank([A|b]) - rank(A)`` (0 iff consistent).  Free variables are set to 0.
    ``first_bad_row`` is the index of the first equation violated by the
    least-index consistent prefix when the system is inconsistent.
    """
    n = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, piv = rref(aug)
    residual = 1 if n in piv else 0
    if residual:
        # locate the first equation that cannot be satisfied together with its predecessors
        for i in range(1, len(aug) + 1):
            _, p = rref(aug[:i])
            if n in p:
                return None, residual, i - 1
    x = [Fraction(0)] * n
    for row, c in zip(R, piv):
        x[c] = row[n]
    return x, residual, None
