"""Small dense linear algebra over plain Python sequences.

Everything here works element-wise on ``Fraction`` or ``float`` entries, so
the same routine serves both arithmetic modes.  Matrices are lists of rows.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .errors import SingularBasisError
from .scalar import Arithmetic

RANK_EPS = 1e-10


def dot(u: Sequence, v: Sequence):
    total = 0
    for a, b in zip(u, v):
        if a and b:
            total += a * b
    return total


def matvec(rows: Sequence[Sequence], x: Sequence) -> list:
    return [dot(row, x) for row in rows]


def vecmat(y: Sequence, rows: Sequence[Sequence], n: int) -> list:
    """Return ``rows^T y`` as a length-``n`` list."""
    out = [0] * n
    for yi, row in zip(y, rows):
        if yi:
            for j, a in enumerate(row):
                if a:
                    out[j] += yi * a
    return out


def transpose(rows: Sequence[Sequence], ncols: Optional[int] = None) -> list:
    if not rows:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*rows)]


def column(rows: Sequence[Sequence], j: int) -> list:
    return [row[j] for row in rows]


def _pivot_threshold(arith: Arithmetic, scale) -> float:
    return 0 if arith.exact else RANK_EPS * max(1.0, float(scale))


class LUFactor:
    """Row-pivoted LU factorization ``P B = L U`` of a square basis matrix."""

    def __init__(self, matrix: Sequence[Sequence], arith: Arithmetic):
        n = len(matrix)
        lu = [list(row) for row in matrix]
        perm = list(range(n))
        scale = max((abs(a) for row in lu for a in row), default=0)
        thresh = _pivot_threshold(arith, scale)
        for k in range(n):
            if arith.exact:
                p = next((i for i in range(k, n) if lu[i][k] != 0), None)
            else:
                p = max(range(k, n), key=lambda i: abs(lu[i][k]))
                if abs(lu[p][k]) <= thresh:
                    p = None
            if p is None:
                raise SingularBasisError("basis matrix is singular")
            if p != k:
                lu[k], lu[p] = lu[p], lu[k]
                perm[k], perm[p] = perm[p], perm[k]
            piv = lu[k][k]
            row_k = lu[k]
            for i in range(k + 1, n):
                row_i = lu[i]
                if row_i[k]:
                    f = row_i[k] / piv
                    row_i[k] = f
                    for j in range(k + 1, n):
                        if row_k[j]:
                            row_i[j] -= f * row_k[j]
        self.n = n
        self.lu = lu
        self.perm = perm

    def solve(self, rhs: Sequence) -> list:
        """Solve ``B x = rhs``."""
        n, lu = self.n, self.lu
        x = [rhs[p] for p in self.perm]
        for i in range(n):
            row = lu[i]
            s = x[i]
            for j in range(i):
                if row[j] and x[j]:
                    s -= row[j] * x[j]
            x[i] = s
        for i in range(n - 1, -1, -1):
            row = lu[i]
            s = x[i]
            for j in range(i + 1, n):
                if row[j] and x[j]:
                    s -= row[j] * x[j]
            x[i] = s / row[i]
        return x

    def solve_t(self, rhs: Sequence) -> list:
        """Solve ``B^T y = rhs``."""
        n, lu = self.n, self.lu
        z = list(rhs)
        # U^T z' = rhs
        for i in range(n):
            s = z[i]
            for j in range(i):
                if lu[j][i] and z[j]:
                    s -= lu[j][i] * z[j]
            z[i] = s / lu[i][i]
        # L^T w = z'
        for i in range(n - 1, -1, -1):
            s = z[i]
            for j in range(i + 1, n):
                if lu[j][i] and z[j]:
                    s -= lu[j][i] * z[j]
            z[i] = s
        y = [0] * n
        for k, p in enumerate(self.perm):
            y[p] = z[k]
        return y


def scan_rows(rows: Sequence[Sequence], arith: Arithmetic, rhs: Optional[Sequence] = None):
    """Split row indices into ``(kept, dependent, inconsistent)``, scanning in order.

    A row is kept when it is independent of the rows kept before it.  With
    ``rhs`` given, dependent rows whose right-hand side contradicts the kept
    rows are also listed in ``inconsistent``.
    """
    # echelon: list of (pivot column, reduced row, reduced rhs)
    echelon = []
    kept, dependent, inconsistent = [], [], []
    scale = max((abs(a) for row in rows for a in row), default=0)
    thresh = _pivot_threshold(arith, scale)
    for i, row in enumerate(rows):
        r = list(row)
        beta = rhs[i] if rhs is not None else 0
        for col, erow, ebeta in echelon:
            f = r[col]
            if f:
                f = f / erow[col]
                for j, a in enumerate(erow):
                    if a:
                        r[j] -= f * a
                beta -= f * ebeta
        if arith.exact:
            col = next((j for j, a in enumerate(r) if a != 0), None)
        else:
            col = max(range(len(r)), key=lambda j: abs(r[j]), default=None)
            if col is not None and abs(r[col]) <= thresh:
                col = None
        if col is None:
            dependent.append(i)
            bscale = max(1.0, float(max((abs(x) for x in rhs), default=0))) if rhs is not None else 1.0
            if rhs is not None and not (beta == 0 if arith.exact else abs(beta) <= RANK_EPS * bscale):
                inconsistent.append(i)
        else:
            kept.append(i)
            echelon.append((col, r, beta))
    return kept, dependent, inconsistent


def rank(rows: Sequence[Sequence], arith: Arithmetic) -> int:
    return len(scan_rows(rows, arith)[0])


def nullspace(rows: Sequence[Sequence], n: int, arith: Arithmetic) -> list:
    """A basis (list of length-``n`` vectors) of ``{x : rows x = 0}`` via RREF."""
    mat = [list(r) for r in rows]
    scale = max((abs(a) for row in mat for a in row), default=0)
    thresh = _pivot_threshold(arith, scale)
    pivots = []
    r = 0
    for col in range(n):
        if r >= len(mat):
            break
        if arith.exact:
            p = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        else:
            p = max(range(r, len(mat)), key=lambda i: abs(mat[i][col]))
            if abs(mat[p][col]) <= thresh:
                p = None
        if p is None:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        piv = mat[r][col]
        mat[r] = [a / piv for a in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
    free = [j for j in range(n) if j not in pivots]
    basis = []
    one = arith.one
    for fcol in free:
        vec = [arith.zero] * n
        vec[fcol] = one
        for i, pcol in enumerate(pivots):
            vec[pcol] = -mat[i][fcol]
        basis.append(vec)
    return basis


def primitive_integer(vec: Sequence[Fraction], positive_lead: bool = True) -> list:
    """Scale a rational vector to coprime integers.

    The sign is flipped so the first nonzero entry is positive unless
    ``positive_lead`` is False.
    """
    den = 1
    for a in vec:
        den = den * a.denominator // gcd(den, a.denominator)
    ints = [int(a * den) for a in vec]
    g = 0
    for a in ints:
        g = gcd(g, abs(a))
    if g == 0:
        return [Fraction(0)] * len(vec)
    lead = next(a for a in ints if a != 0)
    sign = 1 if lead > 0 or not positive_lead else -1
    return [Fraction(sign * a // g) for a in ints]
