"""LP data types, validation, orthogonal complements and KKT certificate checks.

Exact-mode data is stored as tuples of :class:`~fractions.Fraction`, float-mode
data as tuples of ``float``; every object carries the :class:`Arithmetic` it
was built with and operations never mix modes.

Parametric pairs keep the orthogonal-complement rows ``M`` unnormalized in
exact mode (normalizing needs square roots), so every relation that would use
``M M^T = I`` is written with the diagonal ``D = M M^T`` instead::

    A x = A d,  M x = M d + D v,  x >= 0
    B y = B c,  M y = M c + D u,  y >= 0,   <x, y> = 0

In float mode the rows are normalized and ``D`` is the identity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Optional, Sequence, Tuple

from . import linalg
from .errors import (
    AnchorError,
    DimensionMismatchError,
    EmptyProblemError,
    InconsistentRowsError,
    OrthogonalityError,
    RankDeficientError,
)
from .scalar import EXACT_ARITH, Arithmetic

Vector = Tuple[Any, ...]
Matrix = Tuple[Tuple[Any, ...], ...]


def _vec(values, arith: Arithmetic) -> Vector:
    return tuple(arith.convert(v) for v in values)


def _mat(rows, arith: Arithmetic) -> Matrix:
    return tuple(_vec(row, arith) for row in rows)


@dataclass(frozen=True)
class LinearProgram:
    """``min <c, x>  s.t.  A x = b,  x >= 0``."""

    A: Matrix
    b: Vector
    c: Vector
    name: str = "lp"
    arith: Arithmetic = EXACT_ARITH
    dropped_rows: Tuple[int, ...] = field(default=(), compare=False)
    meta: Mapping[str, Any] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        n = len(self.c)
        if len(self.A) != len(self.b):
            raise DimensionMismatchError(f"A has {len(self.A)} rows but b has length {len(self.b)}")
        for i, row in enumerate(self.A):
            if len(row) != n:
                raise DimensionMismatchError(f"row {i} of A has length {len(row)}, expected {n}")

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return len(self.c)

    @property
    def mode(self) -> str:
        return self.arith.mode

    def with_cost(self, c: Sequence, name: Optional[str] = None) -> "LinearProgram":
        return replace(self, c=tuple(c), name=name or self.name, meta={})

    def objective(self, x: Sequence):
        return linalg.dot(self.c, x)


def validate_standard_form(raw, arith: Optional[Arithmetic] = None) -> LinearProgram:
    """Build a full-row-rank :class:`LinearProgram` from raw data.

    ``raw`` is a mapping with keys ``A``, ``b``, ``c`` (and optionally
    ``name``) or an existing LinearProgram.  Dependent rows are dropped and
    their original indices recorded in ``dropped_rows``; a dependent row whose
    right-hand side disagrees raises :class:`InconsistentRowsError`.
    """
    if isinstance(raw, LinearProgram):
        arith = arith or raw.arith
        A, b, c, name, meta = raw.A, raw.b, raw.c, raw.name, dict(raw.meta)
    else:
        arith = arith or EXACT_ARITH
        try:
            A, b, c = raw["A"], raw["b"], raw["c"]
        except KeyError as exc:
            raise DimensionMismatchError(f"missing LP field {exc.args[0]!r}") from None
        name = raw.get("name", "lp")
        meta = dict(raw.get("meta", {}))
    c = _vec(c, arith)
    if len(c) == 0:
        raise EmptyProblemError("LP has no variables")
    b = _vec(b, arith)
    A = _mat(A, arith)
    if len(A) != len(b):
        raise DimensionMismatchError(f"A has {len(A)} rows but b has length {len(b)}")
    for i, row in enumerate(A):
        if len(row) != len(c):
            raise DimensionMismatchError(f"row {i} of A has length {len(row)}, expected {len(c)}")
    kept, dependent, inconsistent = linalg.scan_rows(A, arith, b)
    if inconsistent:
        raise InconsistentRowsError(f"rows {inconsistent} contradict the independent rows; LP infeasible")
    return LinearProgram(
        A=tuple(A[i] for i in kept),
        b=tuple(b[i] for i in kept),
        c=c,
        name=name,
        arith=arith,
        dropped_rows=tuple(dependent),
        meta=meta,
    )


def orthogonal_complement(A: Sequence[Sequence], B: Optional[Sequence[Sequence]] = None,
                          arith: Arithmetic = EXACT_ARITH, n: Optional[int] = None):
    """Rows ``M`` spanning the orthogonal complement of ``rowspace(A) + rowspace(B)``.

    Returns ``(M, D)`` with mutually orthogonal rows and ``D`` the diagonal of
    ``M M^T`` (as a tuple).  Exact mode keeps each row as a primitive integer
    vector; float mode normalizes so ``D`` is all ones.
    """
    A = [list(_vec(r, arith)) for r in A]
    B = [list(_vec(r, arith)) for r in (B or [])]
    if n is None:
        n = len((A or B)[0])
    for k, brow in enumerate(B):
        for i, arow in enumerate(A):
            if not arith.is_zero(linalg.dot(arow, brow)):
                raise OrthogonalityError(f"row {k} of B is not orthogonal to row {i} of A")
    if B and linalg.rank(B, arith) < len(B):
        raise RankDeficientError("rows of B are linearly dependent")
    null = linalg.nullspace(A + B, n, arith)
    M = []
    for vec in null:
        v = list(vec)
        for mrow in M:
            f = linalg.dot(v, mrow) / linalg.dot(mrow, mrow)
            if f:
                v = [a - f * b for a, b in zip(v, mrow)]
        if arith.exact:
            v = linalg.primitive_integer(v)
        else:
            norm = math.sqrt(linalg.dot(v, v))
            v = [a / norm for a in v]
        M.append(v)
    if not arith.exact:
        # one re-orthogonalization pass against the original rows
        for k in range(len(M)):
            v = M[k]
            for other in A + B + M[:k]:
                f = linalg.dot(v, other) / linalg.dot(other, other)
                v = [a - f * b for a, b in zip(v, other)]
            norm = math.sqrt(linalg.dot(v, v))
            M[k] = [a / norm for a in v]
    M = tuple(tuple(r) for r in M)
    D = tuple(linalg.dot(r, r) for r in M)
    return M, D


@dataclass(frozen=True)
class ParametricPair:
    """The OFD/RHS parametric construction around an LP.

    Holds the LP (``A, b, c``), an anchor ``d`` with ``A d = b``, rows ``B``
    orthogonal to ``A`` with ``a = B c``, and complement rows ``M`` with
    diagonal ``D = M M^T``.
    """

    lp: LinearProgram
    d: Vector
    B: Matrix
    a: Vector
    M: Matrix
    D: Vector
    assumption_clean: bool = True

    @property
    def arith(self) -> Arithmetic:
        return self.lp.arith

    @property
    def n(self) -> int:
        return self.lp.n

    @property
    def m(self) -> int:
        return self.lp.m

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.B)

    @property
    def r(self) -> int:
        return len(self.M)

    def scaled_image(self, x: Sequence, anchor: Sequence) -> list:
        """``D^{-1} M (x - anchor)``."""
        diff = [xi - ai for xi, ai in zip(x, anchor)]
        return [linalg.dot(row, diff) / dk for row, dk in zip(self.M, self.D)]


def build_parametric_pair(lp: LinearProgram, d: Sequence, B: Sequence[Sequence]) -> ParametricPair:
    arith = lp.arith
    d = _vec(d, arith)
    B = _mat(B, arith)
    if len(d) != lp.n:
        raise DimensionMismatchError(f"d has length {len(d)}, expected {lp.n}")
    for k, row in enumerate(B):
        if len(row) != lp.n:
            raise DimensionMismatchError(f"row {k} of B has length {len(row)}, expected {lp.n}")
    Ad = linalg.matvec(lp.A, d)
    for i, (lhs, rhs) in enumerate(zip(Ad, lp.b)):
        if not arith.eq(lhs, rhs):
            raise AnchorError(f"A d differs from b in row {i}: {lhs} != {rhs}")
    M, D = orthogonal_complement(lp.A, B, arith, n=lp.n)
    a = tuple(linalg.dot(row, lp.c) for row in B)
    _certify_assumption_one(lp.A, B, M, D, lp.n, arith)
    clean = all(not arith.is_neg(x) for x in d) and all(not arith.is_neg(x) for x in lp.c)
    return ParametricPair(lp=lp, d=d, B=B, a=a, M=M, D=D, assumption_clean=clean)


def _certify_assumption_one(A, B, M, D, n, arith):
    for name, left, right in (("A B^T", A, B), ("A M^T", A, M), ("B M^T", B, M)):
        for p in left:
            for q in right:
                if not arith.is_zero(linalg.dot(p, q)):
                    raise OrthogonalityError(f"{name} is not zero")
    for i, p in enumerate(M):
        for j, q in enumerate(M):
            if i != j and not arith.is_zero(linalg.dot(p, q)):
                raise OrthogonalityError("M M^T is not diagonal")
    if any(not arith.is_pos(dk) for dk in D):
        raise OrthogonalityError("M M^T has a non-positive diagonal entry")
    total = linalg.rank(A, arith) + (linalg.rank(B, arith) if B else 0) + (linalg.rank(M, arith) if M else 0)
    if total != n:
        raise RankDeficientError(f"rank(A) + rank(B) + rank(M) = {total}, expected {n}")


@dataclass(frozen=True)
class KktCertificate:
    x: Vector
    w: Vector
    y: Vector


@dataclass(frozen=True)
class ParametricCertificate:
    x_bar: Vector
    y_bar: Vector
    u: Vector
    v: Vector


@dataclass
class Verdict:
    """Outcome of a certificate check; truthy iff every condition holds."""

    ok: bool
    violations: list

    def __bool__(self):
        return self.ok


def _residual_ok(arith, lhs, rhs, scale=1) -> bool:
    if arith.exact:
        return lhs == rhs
    return abs(lhs - rhs) <= arith.eps_feas * max(1.0, abs(scale))


def _check_equal(arith, violations, label, lhs, rhs):
    scale = max((abs(v) for v in list(lhs) + list(rhs)), default=0)
    for i, (p, q) in enumerate(zip(lhs, rhs)):
        if not _residual_ok(arith, p, q, scale):
            violations.append(f"{label}: row {i}: {p} != {q}")
            return


def _check_nonneg(arith, violations, label, vec):
    for j, v in enumerate(vec):
        if arith.is_neg(v):
            violations.append(f"{label}: entry {j} = {v} < 0")
            return


def _check_complementary(arith, violations, x, y):
    gap = linalg.dot(x, y)
    scale = max(1, linalg.dot([abs(v) for v in x], [abs(v) for v in y]))
    if not _residual_ok(arith, gap, 0, scale if not arith.exact else 1):
        violations.append(f"<x,y> = {gap} != 0")


def kkt_check(lp: LinearProgram, cert: KktCertificate) -> Verdict:
    """``A x = b, x >= 0, A^T w + y = c, y >= 0, <x, y> = 0``."""
    arith = lp.arith
    x, w, y = cert.x, cert.w, cert.y
    if len(x) != lp.n or len(y) != lp.n or len(w) != lp.m:
        raise DimensionMismatchError("certificate dimensions do not match the LP")
    violations: list = []
    _check_equal(arith, violations, "Ax=b", linalg.matvec(lp.A, x), lp.b)
    _check_nonneg(arith, violations, "x>=0", x)
    ATw = linalg.vecmat(w, lp.A, lp.n)
    _check_equal(arith, violations, "A^T w + y = c", [p + q for p, q in zip(ATw, y)], lp.c)
    _check_nonneg(arith, violations, "y>=0", y)
    _check_complementary(arith, violations, x, y)
    return Verdict(not violations, violations)


def parametric_kkt_check(pair: ParametricPair, cert: ParametricCertificate) -> Verdict:
    """The seven D-scaled parametric KKT conditions at ``(u, v)``."""
    arith = pair.arith
    lp = pair.lp
    xb, yb, u, v = cert.x_bar, cert.y_bar, cert.u, cert.v
    if len(xb) != lp.n or len(yb) != lp.n or len(u) != pair.r or len(v) != pair.r:
        raise DimensionMismatchError("certificate dimensions do not match the pair")
    violations: list = []
    _check_equal(arith, violations, "A x = A d", linalg.matvec(lp.A, xb), linalg.matvec(lp.A, pair.d))
    Md = linalg.matvec(pair.M, pair.d)
    _check_equal(arith, violations, "M x = M d + D v", linalg.matvec(pair.M, xb),
                 [p + dk * vk for p, dk, vk in zip(Md, pair.D, v)])
    _check_nonneg(arith, violations, "x>=0", xb)
    _check_equal(arith, violations, "B y = B c", linalg.matvec(pair.B, yb), pair.a)
    Mc = linalg.matvec(pair.M, lp.c)
    _check_equal(arith, violations, "M y = M c + D u", linalg.matvec(pair.M, yb),
                 [p + dk * uk for p, dk, uk in zip(Mc, pair.D, u)])
    _check_nonneg(arith, violations, "y>=0", yb)
    _check_complementary(arith, violations, xb, yb)
    return Verdict(not violations, violations)

