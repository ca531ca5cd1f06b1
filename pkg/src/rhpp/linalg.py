"""Exact integer/rational matrix routines (lists of lists, no floats)."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*a)]


def det_int(a: Sequence[Sequence[int]]) -> int:
    """Signed determinant of an integer matrix by fraction-free Bareiss elimination."""
    m = [list(map(int, row)) for row in a]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve ``a x = b`` exactly; raises ``ZeroDivisionError`` if ``a`` is singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular system")
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c] / piv
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[i][n] / m[i][i] for i in range(n)]


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def symmetric_diagonalize(gram: Sequence[Sequence]) -> list[Fraction]:
    """Diagonal entries of a rational congruence diagonalization.

    Runs Gram-Schmidt in the given basis order; when a pivot vanishes it
    swaps in a later basis vector with nonzero norm or, failing that,
    replaces the pivot vector ``e_i`` by ``e_i + e_j`` for some ``j`` with
    ``<e_i, e_j> != 0``.  Zero entries appear only for degenerate input.
    """
    m = [[Fraction(x) for x in row] for row in gram]
    n = len(m)
    out = []
    for k in range(n):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][r] != 0), None)
            if swap is not None:
                m[k], m[swap] = m[swap], m[k]
                for row in m:
                    row[k], row[swap] = row[swap], row[k]
            else:
                j = next((c for c in range(k + 1, n) if m[k][c] != 0), None)
                if j is not None:
                    # e_k <- e_k + e_j gives norm 2<e_k,e_j> + <e_j,e_j> = 2 m[k][j] != 0
                    m[k] = [x + y for x, y in zip(m[k], m[j])]
                    for row in m:
                        row[k] += row[j]
        piv = m[k][k]
        out.append(piv)
        if piv == 0:
            continue
        for i in range(k + 1, n):
            f = m[i][k] / piv
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
                for row in m:
                    row[i] -= f * row[k]
    return out


def smith_normal_form(a: Sequence[Sequence[int]]):
    """Return ``(d, U, V)`` with ``U a V = diag(d)``, ``U, V`` unimodular, ``d_i | d_{i+1}``."""
    m = [list(map(int, row)) for row in a]
    rows, cols = len(m), len(m[0]) if m else 0
    U, V = identity(rows), identity(cols)

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        m[dst] = [x + f * y for x, y in zip(m[dst], m[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for row in m:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    for t in range(min(rows, cols)):
        while True:
            nonzero = [(abs(m[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if m[i][j]]
            if not nonzero:
                return [m[i][i] for i in range(min(rows, cols))], U, V
            _, i, j = min(nonzero)
            swap_rows(t, i)
            swap_cols(t, j)
            piv = m[t][t]
            done = True
            for i in range(t + 1, rows):
                if m[i][t]:
                    add_row(i, t, -(m[i][t] // piv))
                    if m[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if m[t][j]:
                    add_col(j, t, -(m[t][j] // piv))
                    if m[t][j]:
                        done = False
            if not done:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if m[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            U[t] = [-x for x in U[t]]
    return [m[i][i] for i in range(min(rows, cols))], U, V


def hermite_rows(vectors: Sequence[Sequence[int]]) -> Matrix:
    """Row-style Hermite normal form basis of the integer span of ``vectors``."""
    m = [list(map(int, v)) for v in vectors if any(v)]
    if not m:
        return []
    cols = len(m[0])
    r = 0
    for c in range(cols):
        rows = [i for i in range(r, len(m)) if m[i][c]]
        if not rows:
            continue
        while len([i for i in range(r, len(m)) if m[i][c]]) > 1:
            rows = [i for i in range(r, len(m)) if m[i][c]]
            p = min(rows, key=lambda i: abs(m[i][c]))
            for i in rows:
                if i != p:
                    f = m[i][c] // m[p][c]
                    m[i] = [x - f * y for x, y in zip(m[i], m[p])]
        p = next(i for i in range(r, len(m)) if m[i][c])
        m[r], m[p] = m[p], m[r]
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        for i in range(r):
            f = m[i][c] // m[r][c]
            m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return m[:r]
