"""Revised simplex method (two phases) and a brute-force vertex oracle.

The basis matrix is refactored from scratch at every iteration; with exact
rationals that keeps each step an exact solve and with floats it avoids
drift from product-form updates.  Problem sizes here are desk-scale.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import List, Optional, Tuple

from . import linalg
from .errors import IterationLimitError, SingularBasisError, SizeGuardError
from .linalg import LUFactor
from .model import KktCertificate, LinearProgram, kkt_check
from .scalar import Arithmetic, format_scalar

BLAND = "bland"
DANTZIG = "dantzig"
PARAMETRIC = "parametric"

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Basis:
    basic: Tuple[int, ...]

    def matrix(self, lp_or_rows) -> list:
        rows = lp_or_rows.A if isinstance(lp_or_rows, LinearProgram) else lp_or_rows
        return [[row[j] for j in self.basic] for row in rows]

    def factor(self, lp: LinearProgram) -> LUFactor:
        if len(set(self.basic)) != len(self.basic) or len(self.basic) != lp.m:
            raise SingularBasisError(f"basis {self.basic} is not a set of {lp.m} distinct columns")
        if any(not 0 <= j < lp.n for j in self.basic):
            raise SingularBasisError(f"basis {self.basic} has out-of-range indices")
        return LUFactor(self.matrix(lp), lp.arith)

    def primal(self, lp: LinearProgram) -> list:
        """The basic solution of this basis (may be infeasible)."""
        xB = self.factor(lp).solve(lp.b)
        x = [lp.arith.zero] * lp.n
        for j, v in zip(self.basic, xB):
            x[j] = v
        return x


@dataclass
class PivotStep:
    enter: int
    leave: int
    objective: object


@dataclass
class PivotTrace:
    rule: str
    steps: List[PivotStep] = field(default_factory=list)
    phase1_steps: int = 0

    @property
    def pivots(self) -> int:
        return len(self.steps)

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "phase1_steps": self.phase1_steps,
            "steps": [
                {"enter": s.enter, "leave": s.leave, "objective": format_scalar(s.objective)}
                for s in self.steps
            ],
        }


@dataclass
class SimplexSolution:
    status: str
    x: Optional[tuple] = None
    w: Optional[tuple] = None
    y: Optional[tuple] = None
    objective: object = None
    trace: PivotTrace = field(default_factory=lambda: PivotTrace(BLAND))
    basis: Optional[Basis] = None
    ray: Optional[tuple] = None

    def certificate(self) -> KktCertificate:
        return KktCertificate(self.x, self.w, self.y)


def default_iteration_limit(n: int) -> int:
    return 10 * 2 ** min(n, 20)


def _columns(A, n):
    return [[row[j] for row in A] for j in range(n)]


def _choose_entering(y, basic_set, rule, arith):
    best = None
    for j, yj in enumerate(y):
        if j in basic_set or not arith.is_neg(yj, "piv"):
            continue
        if rule == BLAND:
            return j
        if best is None or yj < y[best]:
            best = j
    return best


def _ratio_test(xB, dcol, basic, arith):
    """Row index leaving the basis, or None if the direction is unbounded.

    Ties go to the smallest leaving column index.
    """
    best = best_ratio = None
    for i, di in enumerate(dcol):
        if not arith.is_pos(di, "piv"):
            continue
        ratio = (xB[i] if arith.exact else max(xB[i], 0.0)) / di
        if best is None:
            best, best_ratio = i, ratio
            continue
        if arith.exact:
            tie = ratio == best_ratio
        else:
            tie = abs(ratio - best_ratio) <= arith.eps_piv * max(1.0, abs(best_ratio))
        if (tie and basic[i] < basic[best]) or (not tie and ratio < best_ratio):
            best, best_ratio = i, ratio
    return best


def _run_simplex(A, b, c, basic, arith: Arithmetic, rule: str, limit: int, steps: Optional[list]):
    """Phase-II loop from a feasible basis.

    Returns ``(status, basic, xB, w, y, ray)``; ``basic`` is updated in place.
    """
    n = len(c)
    cols = _columns(A, n)
    iters = 0
    objective = None
    while True:
        lu = LUFactor([[row[j] for j in basic] for row in A], arith)
        xB = lu.solve(b)
        w = lu.solve_t([c[j] for j in basic])
        basic_set = set(basic)
        y = [arith.zero if j in basic_set else c[j] - linalg.dot(cols[j], w) for j in range(n)]
        if objective is None:
            objective = linalg.dot([c[j] for j in basic], xB)
        enter = _choose_entering(y, basic_set, rule, arith)
        if enter is None:
            return "optimal", basic, xB, w, y, None
        dcol = lu.solve(cols[enter])
        r = _ratio_test(xB, dcol, basic, arith)
        if r is None:
            ray = [arith.zero] * n
            ray[enter] = arith.one
            for i, j in enumerate(basic):
                ray[j] = -dcol[i]
            return "unbounded", basic, xB, w, y, ray
        theta = (xB[r] if arith.exact else max(xB[r], 0.0)) / dcol[r]
        objective = objective + theta * y[enter]
        leave = basic[r]
        basic[r] = enter
        iters += 1
        if steps is not None:
            steps.append(PivotStep(enter, leave, objective))
        if iters > limit:
            raise IterationLimitError(f"simplex exceeded {limit} iterations (rule={rule})")


def _phase1(lp: LinearProgram, limit: int):
    """Return ``(basic list or None, pivot count)``."""
    arith = lp.arith
    m, n = lp.m, lp.n
    if m == 0:
        return [], 0
    A, b = [], []
    for row, bi in zip(lp.A, lp.b):
        if arith.is_neg(bi, "piv") or (arith.exact and bi < 0):
            A.append([-a for a in row])
            b.append(-bi)
        else:
            A.append(list(row))
            b.append(bi)
    one, zero = arith.one, arith.zero
    for i in range(m):
        A[i].extend(one if k == i else zero for k in range(m))
    cost = [zero] * n + [one] * m
    basic = list(range(n, n + m))
    steps: list = []
    status, basic, xB, _, _, _ = _run_simplex(A, b, cost, basic, arith, BLAND, limit, steps)
    pivots = len(steps)
    infeas = sum(xB[i] for i, j in enumerate(basic) if j >= n)
    scale = max(1.0, float(max((abs(v) for v in b), default=0)))
    if (infeas > 0) if arith.exact else (infeas > arith.eps_feas * scale):
        return None, pivots
    # drive remaining artificials out of the basis (they sit at level zero)
    cols = _columns(A, n)
    for p in range(m):
        if basic[p] < n:
            continue
        lu = LUFactor([[row[j] for j in basic] for row in A], arith)
        e = [zero] * m
        e[p] = one
        rho = lu.solve_t(e)
        basic_set = set(basic)
        best, best_val = None, None
        for j in range(n):
            if j in basic_set:
                continue
            val = linalg.dot(rho, cols[j])
            if arith.exact:
                if val != 0:
                    best = j
                    break
            elif abs(val) > arith.eps_piv and (best is None or abs(val) > best_val):
                best, best_val = j, abs(val)
        if best is None:
            raise SingularBasisError("could not drive an artificial variable out; A is rank deficient")
        basic[p] = best
        pivots += 1
    return basic, pivots


def phase1(lp: LinearProgram, max_iter: Optional[int] = None) -> Optional[Basis]:
    """A feasible basis of ``lp``, or ``None`` when the LP is infeasible."""
    limit = max_iter or default_iteration_limit(lp.n + lp.m)
    basic, _ = _phase1(lp, limit)
    return None if basic is None else Basis(tuple(basic))


def reduced_costs(lp: LinearProgram, basis: Basis):
    """``(w, y)`` with ``B^T w = c_B`` and ``y = c - A^T w`` (zero on the basis)."""
    lu = basis.factor(lp)
    w = lu.solve_t([lp.c[j] for j in basis.basic])
    ATw = linalg.vecmat(w, lp.A, lp.n)
    y = [ci - a for ci, a in zip(lp.c, ATw)]
    for j in basis.basic:
        y[j] = lp.arith.zero
    return tuple(w), tuple(y)


def _is_feasible_basis(lp: LinearProgram, basis: Basis) -> bool:
    x = basis.primal(lp)
    return all(not lp.arith.is_neg(v) for v in x)


def solve(lp: LinearProgram, rule: str = BLAND, start: Optional[Basis] = None,
          max_iter: Optional[int] = None) -> SimplexSolution:
    """Two-phase revised simplex on a validated LP.

    With ``start`` given, Phase I is skipped and the basis must be feasible.
    Optimal solutions carry ``(x, w, y)`` that pass :func:`kkt_check`;
    unbounded ones carry a feasible ``x`` and an improving ray.
    """
    if rule not in (BLAND, DANTZIG):
        raise ValueError(f"unknown pivot rule {rule!r}")
    arith = lp.arith
    limit = max_iter or default_iteration_limit(lp.n)
    trace = PivotTrace(rule)
    if start is None:
        basic, p1 = _phase1(lp, default_iteration_limit(lp.n + lp.m) if max_iter is None else max_iter)
        trace.phase1_steps = p1
        if basic is None:
            return SimplexSolution(INFEASIBLE, trace=trace)
    else:
        start.factor(lp)
        if not _is_feasible_basis(lp, start):
            raise ValueError(f"start basis {start.basic} is not primal feasible")
        basic = list(start.basic)
    status, basic, xB, w, y, ray = _run_simplex(lp.A, lp.b, lp.c, basic, arith, rule, limit, trace.steps)
    x = [arith.zero] * lp.n
    for j, v in zip(basic, xB):
        x[j] = v if arith.exact else max(v, 0.0)
    basis = Basis(tuple(basic))
    objective = lp.objective(x)
    if status == "unbounded":
        return SimplexSolution(UNBOUNDED, x=tuple(x), objective=None, trace=trace, basis=basis, ray=tuple(ray))
    return SimplexSolution(OPTIMAL, x=tuple(x), w=tuple(w), y=tuple(y), objective=objective,
                           trace=trace, basis=basis)


def verify(lp: LinearProgram, sol: SimplexSolution) -> bool:
    """KKT check for optimal solutions; ray check for unbounded ones."""
    if sol.status == OPTIMAL:
        return bool(kkt_check(lp, sol.certificate()))
    if sol.status == UNBOUNDED:
        arith = lp.arith
        r = sol.ray
        if any(not arith.is_zero(v) for v in linalg.matvec(lp.A, r)):
            return False
        if any(arith.is_neg(v) for v in r):
            return False
        return arith.is_neg(lp.objective(r), "piv") and all(not arith.is_neg(v) for v in sol.x)
    return True


@dataclass
class BruteForceResult:
    status: str
    value: object = None
    vertices: List[tuple] = field(default_factory=list)
    ray: Optional[tuple] = None


def brute_force_optimum(lp: LinearProgram, max_n: int = 24) -> BruteForceResult:
    """Enumerate every basis of ``lp``: optimal value and all optimal vertices.

    Unboundedness is detected from the extreme rays ``r_j = 1, r_B = -B^{-1} A_j``
    of the same bases.
    """
    if lp.n > max_n:
        raise SizeGuardError(f"brute force limited to n <= {max_n}, got n = {lp.n}")
    arith = lp.arith
    m, n = lp.m, lp.n
    cols = _columns(lp.A, n)
    vertices = {}
    ray = None
    for subset in combinations(range(n), m):
        try:
            lu = LUFactor([[row[j] for j in subset] for row in lp.A], arith)
        except SingularBasisError:
            continue
        xB = lu.solve(lp.b)
        if all(not arith.is_neg(v) for v in xB):
            x = [arith.zero] * n
            for j, v in zip(subset, xB):
                x[j] = v
            vertices[tuple(x)] = lp.objective(x)
        if ray is None:
            w = lu.solve_t([lp.c[j] for j in subset])
            members = set(subset)
            for j in range(n):
                if j in members:
                    continue
                if not arith.is_neg(lp.c[j] - linalg.dot(cols[j], w), "piv"):
                    continue
                dcol = lu.solve(cols[j])
                if all(not arith.is_pos(v, "piv") for v in dcol):
                    r = [arith.zero] * n
                    r[j] = arith.one
                    for i, k in enumerate(subset):
                        r[k] = -dcol[i]
                    ray = tuple(r)
                    break
    if not vertices:
        return BruteForceResult(INFEASIBLE)
    if ray is not None:
        return BruteForceResult(UNBOUNDED, ray=ray)
    best = min(vertices.values())
    optimal = sorted(v for v, val in vertices.items() if arith.eq(val, best))
    return BruteForceResult(OPTIMAL, value=best, vertices=optimal)


def bland_iteration_bound(lp: LinearProgram) -> int:
    return lp.n * comb(lp.n, lp.m)
