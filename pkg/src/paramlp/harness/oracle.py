"""Independent float oracle for transition points of a rank-one pair.

For one side of a pair the value function

    f(t) = min <c, x>  s.t.  A x = b,  M x = M p + D t,  x >= 0

is convex and piecewise linear on the projection interval, and its kinks
are the interior transition points (the finite ends of the interval are
transition points too).  The primal side uses ``(A, b, c)`` with anchor
``p = d``; the dual side uses ``(B, a, d)`` with anchor ``c``.

Values and slopes come from scipy's HiGHS (slopes from the equality
marginals), kinks are located by sampling a grid and bisecting every cell
whose end slopes differ.  Nothing here shares code with the exact sweep.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.optimize import linprog

from ..model import ParametricPair

PRIMAL = "primal"
DUAL = "dual"


@dataclass
class OracleResult:
    side: str
    lo: float
    hi: float
    transition_points: List[float] = field(default_factory=list)
    window: tuple = ()


def _side_data(pair: ParametricPair, side: str):
    """Float data of one side with every equality row scaled to unit length."""
    M = np.array([[float(v) for v in pair.M[0]]])
    if side == PRIMAL:
        A, b = pair.lp.A, pair.lp.b
        c, anchor = pair.lp.c, pair.d
    else:
        A, b = pair.B, pair.a
        c, anchor = pair.d, pair.lp.c
    A = np.array([[float(v) for v in row] for row in A]).reshape(-1, pair.n)
    b = np.array([float(v) for v in b])
    norms = np.linalg.norm(A, axis=1) if A.size else np.ones(0)
    return (A / norms[:, None], b / norms, np.array([float(v) for v in c]),
            M / np.linalg.norm(M), np.array([float(v) for v in anchor]))


class _SideOracle:
    def __init__(self, A, b, c, M, anchor):
        self.A, self.b, self.c, self.M = A, b, c, M
        self.base = float(M[0] @ anchor)
        self.A_eq = np.vstack([A, M]) if A.size else M
        self.floor = 1e-6 * max(1.0, float(np.abs(c).max()))

    def _lp(self, t):
        rhs = np.concatenate([self.b, [self.base + t]])
        return linprog(self.c, A_eq=self.A_eq, b_eq=rhs, bounds=(0, None), method="highs")

    def slope(self, t) -> Optional[float]:
        res = self._lp(t)
        if res.status != 0:
            return None
        return float(res.eqlin.marginals[-1])

    def theta(self):
        """Range of ``M x - M p`` over the feasible region."""
        out = []
        for sign in (1.0, -1.0):
            res = linprog(sign * self.M[0], A_eq=self.A if self.A.size else None,
                          b_eq=self.b if self.A.size else None, bounds=(0, None), method="highs")
            if res.status == 3:
                out.append(-sign * np.inf)
            elif res.status != 0:
                raise ValueError(f"projection LP failed: {res.message}")
            else:
                out.append(sign * res.fun - self.base)
        lo, hi = out
        return lo, hi

    def asymptotic_slope(self, direction: float) -> float:
        """Slope of ``f`` as ``t -> direction * inf`` from the recession LP."""
        rows = self.A_eq
        rhs = np.zeros(rows.shape[0])
        rhs[-1] = direction
        res = linprog(self.c, A_eq=rows, b_eq=rhs, bounds=(0, None), method="highs")
        if res.status != 0:
            raise ValueError(f"recession LP failed ({res.message}); value function not bounded")
        return direction * float(res.fun)


def _same(s1, s2, tol, floor=1e-9):
    return abs(s1 - s2) <= tol * max(abs(s1), abs(s2), floor)


def _far_end(oracle: _SideOracle, start: float, direction: float, slope_tol: float) -> float:
    target = oracle.asymptotic_slope(direction)
    R = max(1.0, abs(start))
    for _ in range(80):
        t = start + direction * R
        s = oracle.slope(t)
        if s is not None and _same(s, target, slope_tol, oracle.floor):
            return t
        R *= 2.0
    raise ValueError("could not bracket the kinks of the value function")


def _bisect(oracle, p, sp, q, sq, width, slope_tol, found):
    if _same(sp, sq, slope_tol, oracle.floor):
        return
    if q - p <= width:
        found.append(0.5 * (p + q))
        return
    m = 0.5 * (p + q)
    sm = oracle.slope(m)
    _bisect(oracle, p, sp, m, sm, width, slope_tol, found)
    _bisect(oracle, m, sm, q, sq, width, slope_tol, found)


def grid_transition_points(pair: ParametricPair, side: str = PRIMAL, grid: int = 1000,
                           width: float = 1e-9, slope_tol: float = 1e-7) -> OracleResult:
    """Transition points of one side of ``pair`` found by grid sampling and bisection."""
    if pair.r != 1:
        raise ValueError("grid oracle needs a rank-one parameter")
    # D = |M|^2 can be huge; search in the distance coordinate t sqrt(D) along
    # the unit row M / |M|, where slopes are on the scale of c
    root = float(np.sqrt(float(pair.D[0])))
    oracle = _SideOracle(*_side_data(pair, side))
    result = _grid_search(oracle, side, grid, width, slope_tol)
    result.lo, result.hi = result.lo / root, result.hi / root
    result.transition_points = [t / root for t in result.transition_points]
    result.window = tuple(t / root for t in result.window)
    return result


def _grid_search(oracle, side, grid, width, slope_tol) -> OracleResult:
    lo, hi = oracle.theta()
    result = OracleResult(side, lo, hi)
    if lo > hi - 1e-12 * (1 + abs(lo)):
        result.transition_points = [lo]
        result.window = (lo, hi)
        return result
    span = (hi - lo) if np.isfinite(lo) and np.isfinite(hi) else 1.0
    inset = 1e-9 * max(1.0, span)
    if np.isfinite(lo) and np.isfinite(hi):
        left, right = lo + inset, hi - inset
    elif np.isfinite(lo):
        left = lo + inset
        right = _far_end(oracle, left, 1.0, slope_tol)
    elif np.isfinite(hi):
        right = hi - inset
        left = _far_end(oracle, right, -1.0, slope_tol)
    else:
        left = _far_end(oracle, 0.0, -1.0, slope_tol)
        right = _far_end(oracle, 0.0, 1.0, slope_tol)
    result.window = (left, right)
    ts = np.linspace(left, right, grid)
    slopes = [oracle.slope(t) for t in ts]
    found: List[float] = []
    cell = width * max(1.0, right - left)
    for i in range(grid - 1):
        if slopes[i] is None or slopes[i + 1] is None:
            raise ValueError(f"value function undefined inside the projection interval near {ts[i]}")
        _bisect(oracle, ts[i], slopes[i], ts[i + 1], slopes[i + 1], cell, slope_tol, found)
    merged: List[float] = []
    for t in sorted(found):
        if not merged or t - merged[-1] > 1e3 * cell:
            merged.append(t)
    points = merged
    if np.isfinite(lo):
        points = [lo] + [t for t in points if t - lo > 1e3 * cell]
    if np.isfinite(hi):
        points = [t for t in points if hi - t > 1e3 * cell] + [hi]
    result.transition_points = points
    return result


def points_agree(exact_points, float_points, tol: float = 1e-6) -> bool:
    if len(exact_points) != len(float_points):
        return False
    return all(abs(float(e) - f) <= tol * max(1.0, abs(f))
               for e, f in zip(sorted(exact_points), sorted(float_points)))
