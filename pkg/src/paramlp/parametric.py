"""Single-parameter (r = 1) analysis of a parametric pair.

For a pair ``(A, b, c, d, B, a, M, D)`` the two families

    min <c + u M, x>  s.t.  A x = b, x >= 0          (objective side, parameter u)
    min <d + v M, y>  s.t.  B y = a, y >= 0          (objective side, parameter v)

are linked by the set-valued maps

    phi(u) = { D^-1 M (x* - d) : x* optimal for the u-problem }
    psi(v) = { D^-1 M (y* - c) : y* optimal for the v-problem }

``theta_interval`` gives the parameter ranges on which the right-hand-side
views are feasible, and ``sweep`` splits them into transition points and the
open invariancy intervals between them.  Both maps are monotone
non-increasing, which is what the endpoint-hopping sweep relies on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from . import linalg
from .errors import DomainError, InternalInconsistencyError, NoParametricDirectionError
from .model import LinearProgram, ParametricPair, validate_standard_form
from .scalar import format_scalar
from .simplex import OPTIMAL, UNBOUNDED, solve

PRIMAL = "primal"
DUAL = "dual"

INF = math.inf


@dataclass(frozen=True)
class Interval:
    """A scalar interval; infinite endpoints are always open."""

    lo: object
    hi: object
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        if self.lo == -INF and self.lo_closed:
            object.__setattr__(self, "lo_closed", False)
        if self.hi == INF and self.hi_closed:
            object.__setattr__(self, "hi_closed", False)

    @classmethod
    def closed(cls, lo, hi) -> "Interval":
        return cls(lo, hi, True, True)

    @classmethod
    def open(cls, lo, hi) -> "Interval":
        return cls(lo, hi, False, False)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def bounded(self) -> bool:
        return self.lo != -INF and self.hi != INF

    def closure(self) -> "Interval":
        return Interval.closed(self.lo, self.hi)

    def contains(self, x, arith=None) -> bool:
        if arith is not None and not arith.exact:
            lo_ok = x > self.lo or arith.eq(x, self.lo)
            hi_ok = x < self.hi or arith.eq(x, self.hi)
            return lo_ok and hi_ok
        lo_ok = x > self.lo or (self.lo_closed and x == self.lo)
        hi_ok = x < self.hi or (self.hi_closed and x == self.hi)
        return lo_ok and hi_ok

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def to_json(self) -> dict:
        return {"lo": format_scalar(self.lo), "hi": format_scalar(self.hi),
                "lo_closed": self.lo_closed, "hi_closed": self.hi_closed}

    def __str__(self):
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo}, {self.hi}{right}"


@dataclass(frozen=True)
class RatioTestResult:
    J: frozenset


@dataclass
class InvariancyDecomposition:
    side: str
    theta: Interval
    transition_points: Tuple
    intervals: Tuple[Interval, ...]
    interval_images: Tuple
    witnesses: List[dict] = field(default_factory=list)
    hops: int = 0
    diagnostics: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "side": self.side,
            "theta": {"lo": format_scalar(self.theta.lo), "hi": format_scalar(self.theta.hi)},
            "transition_points": [format_scalar(t) for t in self.transition_points],
            "intervals": [
                {"lo": format_scalar(i.lo), "hi": format_scalar(i.hi), "image": format_scalar(s)}
                for i, s in zip(self.intervals, self.interval_images)
            ],
            "witnesses": [
                {
                    "point": format_scalar(w["point"]),
                    "image": {"lo": format_scalar(w["image"].lo), "hi": format_scalar(w["image"].hi)},
                    "vertex": None if w.get("vertex") is None else [format_scalar(v) for v in w["vertex"]],
                }
                for w in self.witnesses
            ],
            "hops": self.hops,
            "diagnostics": list(self.diagnostics),
        }


def _require_rank_one(pair: ParametricPair):
    if pair.r != 1:
        if pair.r == 0:
            raise NoParametricDirectionError("no parametric direction (r = 0)")
        raise NoParametricDirectionError(f"single-parameter analysis needs r = 1, got r = {pair.r}")


def _side_lp(pair: ParametricPair, side: str) -> LinearProgram:
    """Feasible region of the chosen side: ``{A x = b}`` or ``{B y = a}``."""
    if side == PRIMAL:
        return pair.lp
    return validate_standard_form(
        {"A": pair.B, "b": pair.a, "c": [pair.arith.zero] * pair.n, "name": f"{pair.lp.name}:dual"},
        pair.arith,
    )


def _offset(pair: ParametricPair, side: str):
    return pair.d if side == PRIMAL else pair.lp.c


def _image_direction(pair: ParametricPair) -> list:
    dk = pair.D[0]
    return [mj / dk for mj in pair.M[0]]


def _extremes(lp: LinearProgram, direction: Sequence, offset_value):
    """Min and max of ``<direction, x> - offset_value`` over ``lp``'s region.

    Returns ``(lo, hi, argmin, argmax)``; infinite ends have ``None`` argument,
    and ``None`` is returned for an empty region.
    """
    low = solve(lp.with_cost(direction))
    if low.status not in (OPTIMAL, UNBOUNDED):
        return None
    high = solve(lp.with_cost([-v for v in direction]))
    lo = -INF if low.status == UNBOUNDED else low.objective - offset_value
    hi = INF if high.status == UNBOUNDED else -high.objective - offset_value
    return lo, hi, (low.x if low.status == OPTIMAL else None), (high.x if high.status == OPTIMAL else None)


def _interval_from(lo, hi) -> Interval:
    return Interval(lo, hi, lo != -INF, hi != INF)


@lru_cache(maxsize=512)
def _theta(pair: ParametricPair, side: str):
    lp = _side_lp(pair, side)
    direction = _image_direction(pair)
    ext = _extremes(lp, direction, linalg.dot(direction, _offset(pair, side)))
    if ext is None:
        return None
    lo, hi, xlo, xhi = ext
    return _interval_from(lo, hi), xlo, xhi


def theta_interval(pair: ParametricPair, side: str = PRIMAL) -> Optional[Interval]:
    """Projection interval of the chosen side; ``None`` when it is empty."""
    _require_rank_one(pair)
    if side not in (PRIMAL, DUAL):
        raise ValueError(f"side must be 'primal' or 'dual', got {side!r}")
    got = _theta(pair, side)
    return None if got is None else got[0]


def _optimal_face_image(pair: ParametricPair, side: str, param):
    """Image interval of the optimal face at ``param`` with its end vertices.

    ``side`` names the region being optimized over: PRIMAL optimizes
    ``<c + param M, x>`` over ``A x = b`` (this is phi), DUAL optimizes
    ``<d + param M, y>`` over ``B y = a`` (this is psi).
    """
    arith = pair.arith
    lp = _side_lp(pair, side)
    base = pair.lp.c if side == PRIMAL else pair.d
    cost = [bj + param * mj for bj, mj in zip(base, pair.M[0])]
    sol = solve(lp.with_cost(cost))
    if sol.status != OPTIMAL:
        raise InternalInconsistencyError(
            f"parametric problem is {sol.status} at {param} although the parameter is in range")
    face = validate_standard_form(
        {"A": list(lp.A) + [cost], "b": list(lp.b) + [sol.objective], "c": [arith.zero] * pair.n,
         "name": f"{lp.name}:face"},
        arith,
    )
    direction = _image_direction(pair)
    lo, hi, xlo, xhi = _extremes(face, direction, linalg.dot(direction, _offset(pair, side)))
    return _interval_from(lo, hi), xlo, xhi


def phi(pair: ParametricPair, u) -> Interval:
    """Right-hand-side image of the optimal face of ``min <c + u M, x>``."""
    _require_rank_one(pair)
    u = pair.arith.convert(u)
    dom = theta_interval(pair, DUAL)
    if dom is None or not dom.contains(u, pair.arith):
        raise DomainError(f"u = {u} lies outside the dual projection interval {dom}")
    return _optimal_face_image(pair, PRIMAL, u)[0]


def psi(pair: ParametricPair, v) -> Interval:
    """Right-hand-side image of the optimal face of ``min <d + v M, y>``."""
    _require_rank_one(pair)
    v = pair.arith.convert(v)
    dom = theta_interval(pair, PRIMAL)
    if dom is None or not dom.contains(v, pair.arith):
        raise DomainError(f"v = {v} lies outside the primal projection interval {dom}")
    return _optimal_face_image(pair, DUAL, v)[0]


def ratio_test_single_row(B_row: Sequence, a) -> RatioTestResult:
    """``{j : b_j != 0 and a / b_j > 0}`` for a single dual constraint row."""
    if all(bj == 0 for bj in B_row):
        raise ValueError("ratio test needs a nonzero row")
    return RatioTestResult(frozenset(j for j, bj in enumerate(B_row) if bj != 0 and a / bj > 0))


def sweep(pair: ParametricPair, side: str = PRIMAL, max_hops: Optional[int] = None) -> InvariancyDecomposition:
    """Transition points and invariancy intervals of one projection interval.

    Starting from an anchor (the finite left end of theta, else its finite
    right end, else 0), the sweep alternates the two maps: the opposite map at
    a transition point is a nondegenerate interval whose lower end is the
    constant image on the invariancy interval to the right; mapping that
    constant back gives the closure of the interval, whose right end is the
    next transition point.  The same happens leftwards with upper ends.
    """
    _require_rank_one(pair)
    if side not in (PRIMAL, DUAL):
        raise ValueError(f"side must be 'primal' or 'dual', got {side!r}")
    arith = pair.arith
    other = DUAL if side == PRIMAL else PRIMAL
    got = _theta(pair, side)
    if got is None:
        raise DomainError(f"{side} projection interval is empty")
    theta, theta_xlo, theta_xhi = got
    diagnostics: List[str] = []
    if not pair.assumption_clean:
        diagnostics.append("pair is not assumption-clean; (d, c) >= 0 fails")
    hard_cap = max_hops or 4 * (pair.n + 2) ** 2

    def opposite(t):
        # at a point t of this side, the image on the other side
        return _optimal_face_image(pair, other, t)[0]

    def forward(s):
        # at a constant image s on the other side, the closure on this side
        return _optimal_face_image(pair, side, s)

    points = {}
    intervals = []
    hops = 0

    def note_point(t, image, vertex):
        entry = points.setdefault(t, {"point": t, "image": image, "vertex": None})
        if entry["vertex"] is None and vertex is not None:
            entry["vertex"] = tuple(vertex)

    if theta.is_point:
        t = theta.lo
        note_point(t, opposite(t), theta_xlo)
        return _finish(pair, side, theta, points, intervals, hops, diagnostics)

    if theta.lo != -INF:
        anchor, anchor_vertex = theta.lo, theta_xlo
    elif theta.hi != INF:
        anchor, anchor_vertex = theta.hi, theta_xhi
    else:
        anchor, anchor_vertex = arith.zero, None
    image = opposite(anchor)
    if image.is_point:
        closure, xlo, xhi = forward(image.lo)
        hops += 1
        intervals.append((closure.lo, closure.hi, image.lo))
        right = (closure.hi, xhi, None)
        left = (closure.lo, xlo, None)
    else:
        note_point(anchor, image, anchor_vertex)
        right = left = (anchor, anchor_vertex, image)

    for direction, start in (("right", right), ("left", left)):
        t, vertex, image = start
        while t not in (-INF, INF):
            if image is None:
                image = opposite(t)
            note_point(t, image, vertex)
            s = image.lo if direction == "right" else image.hi
            if s in (-INF, INF):
                break
            closure, xlo, xhi = forward(s)
            hops += 1
            near, far = (closure.lo, closure.hi) if direction == "right" else (closure.hi, closure.lo)
            if not arith.eq(near, t):
                raise InternalInconsistencyError(
                    f"image closure {closure} does not start at transition point {t}")
            if arith.eq(far, t):
                diagnostics.append(f"stalled at {t}: zero-length invariancy interval merged")
                break
            if direction == "right":
                intervals.append((t, far, s))
                t, vertex = far, xhi
            else:
                intervals.append((far, t, s))
                t, vertex = far, xlo
            image = None
            if hops > hard_cap:
                raise InternalInconsistencyError(f"sweep did not terminate within {hard_cap} hops")
    return _finish(pair, side, theta, points, intervals, hops, diagnostics)


def _finish(pair, side, theta, points, intervals, hops, diagnostics):
    if hops > pair.n + 1:
        diagnostics.append(f"hop count {hops} exceeds n + 1 = {pair.n + 1}")
    tps = sorted(points)
    intervals.sort(key=lambda item: item[0])
    decomposition = InvariancyDecomposition(
        side=side,
        theta=theta,
        transition_points=tuple(tps),
        intervals=tuple(Interval.open(lo, hi) for lo, hi, _ in intervals),
        interval_images=tuple(s for _, _, s in intervals),
        witnesses=[points[t] for t in tps],
        hops=hops,
        diagnostics=diagnostics,
    )
    _verify_cover(decomposition, pair.arith)
    return decomposition


def _verify_cover(dec: InvariancyDecomposition, arith) -> None:
    """Check that intervals and points tile theta without overlap."""
    pieces = [(i.lo, i.hi) for i in dec.intervals]
    tps = list(dec.transition_points)
    theta = dec.theta
    if not pieces:
        if tps != [theta.lo] or not theta.is_point:
            raise InternalInconsistencyError("decomposition without intervals must be a single point")
        return
    if not arith.eq(pieces[0][0], theta.lo) or not arith.eq(pieces[-1][1], theta.hi):
        raise InternalInconsistencyError("invariancy intervals do not reach the ends of theta")
    for (lo1, hi1), (lo2, hi2) in zip(pieces, pieces[1:]):
        if not arith.eq(hi1, lo2):
            raise InternalInconsistencyError(f"gap or overlap between {hi1} and {lo2}")
    expected = [p for p in [pieces[0][0]] + [hi for _, hi in pieces] if p not in (-INF, INF)]
    if len(expected) != len(tps) or any(not arith.eq(p, q) for p, q in zip(expected, tps)):
        raise InternalInconsistencyError("transition points do not match interval endpoints")
