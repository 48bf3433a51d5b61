"""Exact integer linear algebra.

Dense Smith normal form with tracked unimodular transforms, integral
kernels, cokernel invariant factors, and linear solves over the integers.
Everything is arbitrary-precision; there are no floating-point paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

__all__ = [
    "IntMatrix",
    "SmithDecomposition",
    "eye",
    "zeros",
    "mat_mul",
    "mat_vec",
    "smith",
    "rank",
    "kernel_basis",
    "solve",
    "cokernel_invariants",
    "det",
]

# Matrices are dense lists of row lists of Python ints.
IntMatrix = list[list[int]]


def zeros(m: int, n: int) -> IntMatrix:
    return [[0] * n for _ in range(m)]


def eye(n: int) -> IntMatrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = 1
    return out


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    m = len(a)
    inner = len(b)
    p = len(b[0]) if b else 0
    out = zeros(m, p)
    for i in range(m):
        row = out[i]
        ai = a[i]
        for t in range(inner):
            c = ai[t]
            if c:
                bt = b[t]
                for j in range(p):
                    if bt[j]:
                        row[j] += c * bt[j]
    return out


def mat_vec(a: IntMatrix, v: list[int]) -> list[int]:
    return [sum(c * x for c, x in zip(row, v)) for row in a]


@dataclass
class SmithDecomposition:
    """U·A·V = D with U, V unimodular and D diagonal, d_1 | d_2 | ..."""

    rows: int
    cols: int
    diag: list[int]
    u: IntMatrix
    v: IntMatrix
    uinv: IntMatrix
    vinv: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d)

    def d_matrix(self) -> IntMatrix:
        out = zeros(self.rows, self.cols)
        for i, d in enumerate(self.diag):
            out[i][i] = d
        return out


def smith(a_in: IntMatrix, cols: int | None = None) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivots are chosen as the smallest nonzero absolute entry, ties broken
    row-major, which keeps intermediate growth tame and is deterministic.
    """
    m = len(a_in)
    n = cols if cols is not None else (len(a_in[0]) if a_in else 0)
    a = [row[:] for row in a_in]
    u, ui = eye(m), eye(m)
    v, vi = eye(n), eye(n)

    # Row ops act on a and u on the left; their inverses act on ui's
    # columns so that u·ui = 1 stays true. Column ops mirror this on v/vi.
    def row_swap(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for r in ui:
            r[i], r[j] = r[j], r[i]

    def row_add(i: int, j: int, c: int) -> None:
        ai, aj = a[i], a[j]
        for t in range(n):
            if aj[t]:
                ai[t] += c * aj[t]
        pi, pj = u[i], u[j]
        for t in range(m):
            if pj[t]:
                pi[t] += c * pj[t]
        for r in ui:
            if r[i]:
                r[j] -= c * r[i]

    def row_neg(i: int) -> None:
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for r in ui:
            r[i] = -r[i]

    def col_swap(i: int, j: int) -> None:
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]
        vi[i], vi[j] = vi[j], vi[i]

    def col_add(i: int, j: int, c: int) -> None:
        # col i += c * col j
        for r in a:
            if r[j]:
                r[i] += c * r[j]
        for r in v:
            if r[j]:
                r[i] += c * r[j]
        qi, qj = vi[i], vi[j]
        for t in range(n):
            if qi[t]:
                qj[t] -= c * qi[t]

    def find_pivot(t: int) -> tuple[int, int] | None:
        best = None
        best_mag = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x:
                    mag = abs(x)
                    if best_mag is None or mag < best_mag:
                        best, best_mag = (i, j), mag
                        if mag == 1:
                            return best
        return best

    t = 0
    limit = min(m, n)
    while t < limit:
        piv = find_pivot(t)
        if piv is None:
            break
        if piv[0] != t:
            row_swap(t, piv[0])
        if piv[1] != t:
            col_swap(t, piv[1])
        while True:
            # clear column t below the pivot
            dirty = False
            for i in range(t + 1, m):
                x = a[i][t]
                if x:
                    q = x // a[t][t]
                    if q:
                        row_add(i, t, -q)
                    if a[i][t]:
                        row_swap(t, i)  # strictly smaller remainder becomes pivot
                        dirty = True
            if dirty:
                continue
            # clear row t right of the pivot
            for j in range(t + 1, n):
                x = a[t][j]
                if x:
                    q = x // a[t][t]
                    if q:
                        col_add(j, t, -q)
                    if a[t][j]:
                        col_swap(t, j)
                        dirty = True
            if not dirty:
                # pivot must divide the rest of the submatrix
                p = a[t][t]
                offender = None
                for i in range(t + 1, m):
                    row = a[i]
                    for j in range(t + 1, n):
                        if row[j] % p:
                            offender = i
                            break
                    if offender is not None:
                        break
                if offender is None:
                    break
                row_add(t, offender, 1)
        if a[t][t] < 0:
            row_neg(t)
        t += 1

    diag = [a[i][i] for i in range(limit)]
    return SmithDecomposition(m, n, diag, u, v, ui, vi)


def rank(a: IntMatrix, cols: int | None = None) -> int:
    """Rank over the integers, via sparse fraction-preserving elimination.

    Rows are kept as sparse dicts and divided by their gcd after each
    update, which keeps entries small on the structured matrices that
    arise here. Exact for any input regardless.
    """
    n = cols if cols is not None else (len(a[0]) if a else 0)
    rows = [{j: x for j, x in enumerate(r) if x} for r in a]
    rows = [r for r in rows if r]
    rk = 0
    while rows:
        # pivot row: prefer a unit entry, then the shortest row
        best = min(
            range(len(rows)),
            key=lambda i: (min(abs(x) for x in rows[i].values()) != 1, len(rows[i])),
        )
        prow = rows.pop(best)
        pcol = min(prow, key=lambda j: (abs(prow[j]), j))
        pval = prow[pcol]
        rk += 1
        nxt = []
        for r in rows:
            c = r.get(pcol)
            if c:
                merged = {j: pval * x for j, x in r.items()}
                for j, x in prow.items():
                    val = merged.get(j, 0) - c * x
                    if val:
                        merged[j] = val
                    else:
                        merged.pop(j, None)
                if merged:
                    g = 0
                    for x in merged.values():
                        g = gcd(g, x)
                    if g > 1:
                        merged = {j: x // g for j, x in merged.items()}
                    nxt.append(merged)
            elif r:
                nxt.append(r)
        rows = nxt
    return rk


def kernel_basis(a: IntMatrix, cols: int | None = None) -> list[list[int]]:
    """Basis of the saturated lattice {v : A v = 0}, as V-columns of the SNF."""
    s = smith(a, cols)
    rk = s.rank
    out = []
    for j in range(rk, s.cols):
        out.append([s.v[i][j] for i in range(s.cols)])
    return out


def solve_with(s: SmithDecomposition, b: list[int]) -> list[int] | None:
    """Solve A x = b given a precomputed decomposition of A."""
    c = mat_vec(s.u, b)
    y = [0] * s.cols
    for i in range(s.rows):
        d = s.diag[i] if i < len(s.diag) else 0
        if d:
            if c[i] % d:
                return None
            y[i] = c[i] // d
        elif c[i]:
            return None
    return mat_vec(s.v, y)


def solve(a: IntMatrix, b: list[int], cols: int | None = None) -> list[int] | None:
    """Some integer solution of A x = b, or None if there is none over Z."""
    return solve_with(smith(a, cols), b)


def cokernel_invariants(a: IntMatrix, cols: int | None = None) -> tuple[list[int], int]:
    """(nontrivial torsion invariant factors, free rank) of Z^rows / im(A)."""
    s = smith(a, cols)
    torsion = [d for d in s.diag if d > 1]
    return torsion, s.rows - s.rank


def inverse_unimodular(a: IntMatrix) -> IntMatrix:
    """Integer inverse of a matrix with determinant +-1."""
    s = smith(a)
    if s.rows != s.cols or any(d != 1 for d in s.diag):
        raise ValueError("matrix is not unimodular")
    # A = Uinv V inv-chain: U A V = I, so A^-1 = V U
    return mat_mul(s.v, s.u)


def det(a: IntMatrix) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for t in range(n - 1):
        if m[t][t] == 0:
            for i in range(t + 1, n):
                if m[i][t]:
                    m[t], m[i] = m[i], m[t]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                m[i][j] = (m[i][j] * m[t][t] - m[i][t] * m[t][j]) // prev
            m[i][t] = 0
        prev = m[t][t]
    return sign * m[n - 1][n - 1]
