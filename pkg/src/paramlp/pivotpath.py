"""Parametric-objective path following on a rank-one embedding.

An LP ``min <c, x>, A x = b, x >= 0`` is embedded into a parametric pair with
``l = 1`` and ``r = n - m - 1``: the anchor ``d`` is a Phase-I vertex, ``c`` is
shifted by ``A^T w`` to be nonnegative when possible, ``B`` is the part of the
shifted cost orthogonal to the rows of ``A``, and ``M`` spans the rest.  A
direction ``s`` in parameter space gives the rank-one projection
``S = s s^T / <s, s>`` and the tilt ``g = M^T s``.

The solver then follows the costs ``c + t g`` from a large ``t`` down to
``t = 0``, pivoting once each time a nonbasic reduced cost reaches zero, and
counts those pivots against ``n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from . import linalg
from .errors import (
    InfeasibleError,
    IterationLimitError,
    NoParametricDirectionError,
    UnverifiedReportError,
)
from .harness.rng import SplitMix64
from .linalg import LUFactor
from .model import (
    LinearProgram,
    ParametricCertificate,
    ParametricPair,
    build_parametric_pair,
    kkt_check,
    validate_standard_form,
)
from .scalar import format_scalar
from .simplex import (
    BLAND,
    INFEASIBLE,
    OPTIMAL,
    PARAMETRIC,
    UNBOUNDED,
    Basis,
    PivotStep,
    PivotTrace,
    SimplexSolution,
    _ratio_test,
    default_iteration_limit,
    phase1,
    reduced_costs,
    solve,
)

INF = math.inf


@dataclass(frozen=True)
class Embedding:
    pair: ParametricPair
    s: tuple
    g: tuple
    c_shift: Optional[tuple]
    start: Basis
    assumption_clean: bool
    shift_found: bool
    seed: Optional[int] = None

    def projection(self) -> list:
        """``S = s s^T / <s, s>`` as a list of rows."""
        ss = linalg.dot(self.s, self.s)
        return [[si * sj / ss for sj in self.s] for si in self.s]


@dataclass
class PathReport:
    instance: str
    n: int
    pivots_phase2: int = 0
    pivots_bootstrap: int = 0
    breakpoints: List = field(default_factory=list)
    optimal_value: object = None
    optimal_verified: bool = False
    s: tuple = ()
    seed: Optional[int] = None
    t_start: object = None
    status: str = OPTIMAL
    assumption_clean: bool = True
    diagnostics: List[str] = field(default_factory=list)
    visited: List[tuple] = field(default_factory=list, repr=False)

    @property
    def bound_holds(self) -> bool:
        return self.pivots_phase2 <= self.n

    def to_json(self) -> dict:
        return {
            "instance": self.instance,
            "n": self.n,
            "pivots_phase2": self.pivots_phase2,
            "pivots_bootstrap": self.pivots_bootstrap,
            "bound_holds": self.bound_holds,
            "breakpoints": [format_scalar(t) for t in self.breakpoints],
            "optimal_value": None if self.optimal_value is None else format_scalar(self.optimal_value),
            "optimal_verified": self.optimal_verified,
            "s": [format_scalar(v) for v in self.s],
            "seed": self.seed,
            "t_start": None if self.t_start is None else format_scalar(self.t_start),
            "status": self.status,
            "assumption_clean": self.assumption_clean,
            "diagnostics": list(self.diagnostics),
        }


def find_cost_shift(lp: LinearProgram):
    """Some ``w`` with ``c + A^T w >= 0``, or ``None`` if there is none."""
    arith = lp.arith
    if all(not arith.is_neg(v) for v in lp.c):
        return tuple(arith.zero for _ in range(lp.m))
    m, n = lp.m, lp.n
    # columns: y (n), w+ (m), w- (m);  y - A^T w+ + A^T w- = c
    rows = []
    for j in range(n):
        row = [arith.one if k == j else arith.zero for k in range(n)]
        row += [-lp.A[i][j] for i in range(m)]
        row += [lp.A[i][j] for i in range(m)]
        rows.append(row)
    feas = validate_standard_form({"A": rows, "b": lp.c, "c": [arith.zero] * (n + 2 * m)}, arith)
    basis = phase1(feas)
    if basis is None:
        return None
    z = basis.primal(feas)
    return tuple(z[n + i] - z[n + m + i] for i in range(m))


def _orthogonal_to_rows(lp: LinearProgram, vec: Sequence) -> list:
    """Component of ``vec`` orthogonal to the row space of ``A``."""
    if lp.m == 0:
        return list(vec)
    gram = [[linalg.dot(p, q) for q in lp.A] for p in lp.A]
    lam = LUFactor(gram, lp.arith).solve(linalg.matvec(lp.A, vec))
    proj = linalg.vecmat(lam, lp.A, lp.n)
    return [v - p for v, p in zip(vec, proj)]


def synthesize_embedding(lp: LinearProgram, seed: int = 0) -> Embedding:
    """Build the ``l = 1, r = n - m - 1`` embedding of ``lp``.

    The default direction projects the vector that is 1 on the nonbasic
    coordinates of the Phase-I vertex, negated (so the vertex maximizes it),
    onto the row space of ``M``; a seeded random integer direction replaces
    it when that projection vanishes.
    """
    arith = lp.arith
    if lp.n < lp.m + 2:
        raise NoParametricDirectionError(f"no parametric direction: n = {lp.n} < m + 2 = {lp.m + 2}")
    start = phase1(lp)
    if start is None:
        raise InfeasibleError(f"{lp.name} is infeasible")
    d = start.primal(lp)
    w = find_cost_shift(lp)
    shift_found = w is not None
    c_shift = list(lp.c) if w is None else [ci + a for ci, a in zip(lp.c, linalg.vecmat(w, lp.A, lp.n))]
    if arith.exact:
        c_shift = [Fraction(v) for v in c_shift]
    shifted = lp.with_cost(c_shift)
    B0 = _orthogonal_to_rows(lp, c_shift)
    if all(arith.is_zero(v) for v in B0):
        B0 = linalg.nullspace(lp.A, lp.n, arith)[0]
    if arith.exact:
        B0 = linalg.primitive_integer(B0)
    else:
        norm = math.sqrt(linalg.dot(B0, B0))
        B0 = [v / norm for v in B0]
    pair = build_parametric_pair(shifted, d, [B0])
    basic = set(start.basic)
    outward = [arith.zero if j in basic else -arith.one for j in range(lp.n)]
    s = [linalg.dot(row, outward) / dk for row, dk in zip(pair.M, pair.D)]
    used_seed = None
    if all(arith.is_zero(v) for v in s):
        used_seed = seed
        rng = SplitMix64(seed)
        while all(arith.is_zero(v) for v in s):
            s = [arith.convert(rng.randint(-9, 9)) for _ in range(pair.r)]
    if arith.exact:
        s = linalg.primitive_integer(s, positive_lead=False)
    else:
        norm = math.sqrt(linalg.dot(s, s))
        s = [v / norm for v in s]
    g = linalg.vecmat(s, pair.M, lp.n)
    if arith.exact:
        g = [Fraction(v) for v in g]
    return Embedding(
        pair=pair,
        s=tuple(s),
        g=tuple(g),
        c_shift=None if w is None else tuple(w),
        start=start,
        assumption_clean=pair.assumption_clean,
        shift_found=shift_found,
        seed=used_seed,
    )


def _upper_tilt(lp: LinearProgram, g: Sequence):
    """``sup {t : c + t g + A^T w >= 0 for some w}``; ``None`` if the set is empty."""
    arith = lp.arith
    m, n = lp.m, lp.n
    # columns: y (n), w+ (m), w- (m), t+, t-;  y + A^T w+ - A^T w- - g t+ + g t- = c
    rows = []
    for j in range(n):
        row = [arith.one if k == j else arith.zero for k in range(n)]
        row += [lp.A[i][j] for i in range(m)]
        row += [-lp.A[i][j] for i in range(m)]
        row += [-g[j], g[j]]
        rows.append(row)
    cost = [arith.zero] * (n + 2 * m) + [-arith.one, arith.one]
    sol = solve(validate_standard_form({"A": rows, "b": lp.c, "c": cost}, arith))
    if sol.status == INFEASIBLE:
        return None
    if sol.status == UNBOUNDED:
        return INF
    return -sol.objective


def tilt_limit(c: Sequence, g: Sequence):
    """``1 + ||c||_1 * max_j 1/|g_j|`` over the nonzero ``g_j``."""
    nonzero = [abs(v) for v in g if v != 0]
    if not nonzero:
        return 1 + sum(abs(v) for v in c)
    return 1 + sum(abs(v) for v in c) / min(nonzero)


def parametric_path_solve(lp: LinearProgram, embedding: Optional[Embedding] = None, seed: int = 0,
                          max_iter: Optional[int] = None):
    """Solve ``lp`` by following ``c + t g`` from ``t_start`` down to 0.

    Returns ``(SimplexSolution, PathReport)``.  Bootstrap pivots (reaching a
    vertex optimal at ``t_start``) are reported apart from the parametric
    pivots; Phase-I pivots are in the trace.
    """
    arith = lp.arith
    report = PathReport(instance=lp.name, n=lp.n)
    trace = PivotTrace(PARAMETRIC)
    if embedding is None:
        try:
            embedding = synthesize_embedding(lp, seed)
        except InfeasibleError:
            report.status = INFEASIBLE
            return SimplexSolution(INFEASIBLE, trace=trace), report
    pair = embedding.pair
    base = pair.lp
    c, g = list(base.c), list(embedding.g)
    report.s, report.seed = embedding.s, embedding.seed
    report.assumption_clean = embedding.assumption_clean
    if not embedding.assumption_clean:
        report.diagnostics.append("assumption (d, c) >= 0 violated: no nonnegative cost shift")
    limit = max_iter or default_iteration_limit(lp.n)

    t_hi = _upper_tilt(base, g)
    if t_hi is None or t_hi < 0:
        # no t >= 0 makes the tilted cost bounded, so the LP itself is unbounded
        plain = solve(lp, BLAND, start=embedding.start)
        report.status = plain.status
        plain.trace.rule = PARAMETRIC
        return plain, report
    t = min(tilt_limit(c, g), t_hi)
    report.t_start = t

    boot = solve(base.with_cost([ci + t * gi for ci, gi in zip(c, g)]), BLAND, start=embedding.start)
    if boot.status != OPTIMAL:
        report.status = boot.status
        report.diagnostics.append(f"bootstrap at t = {t} ended {boot.status}")
        return SimplexSolution(boot.status, x=boot.x, ray=boot.ray, trace=trace), report
    report.pivots_bootstrap = boot.trace.pivots
    if report.pivots_bootstrap > lp.n ** 2:
        report.diagnostics.append(f"bootstrap took {report.pivots_bootstrap} > n^2 pivots")
    basic = list(boot.basis.basic)
    cols = [[row[j] for row in base.A] for j in range(lp.n)]
    report.visited.append((t, tuple(basic)))

    while True:
        lu = LUFactor([[row[j] for j in basic] for row in base.A], arith)
        xB = lu.solve(base.b)
        wc = lu.solve_t([c[j] for j in basic])
        wg = lu.solve_t([g[j] for j in basic])
        basic_set = set(basic)
        t_next, enter = None, None
        for j in range(lp.n):
            if j in basic_set:
                continue
            yg = g[j] - linalg.dot(cols[j], wg)
            if not arith.is_pos(yg, "piv"):
                continue
            tj = -(c[j] - linalg.dot(cols[j], wc)) / yg
            if t_next is None or tj > t_next:
                t_next, enter = tj, j
        if t_next is None or not arith.is_pos(t_next, "piv"):
            break
        dcol = lu.solve(cols[enter])
        r = _ratio_test(xB, dcol, basic, arith)
        if r is None:
            ray = [arith.zero] * lp.n
            ray[enter] = arith.one
            for i, j in enumerate(basic):
                ray[j] = -dcol[i]
            x = _expand(basic, xB, lp.n, arith)
            report.status = UNBOUNDED
            return SimplexSolution(UNBOUNDED, x=tuple(x), ray=tuple(ray), trace=trace,
                                   basis=Basis(tuple(basic))), report
        leave = basic[r]
        basic[r] = enter
        report.pivots_phase2 += 1
        if not report.breakpoints or t_next != report.breakpoints[-1]:
            report.breakpoints.append(t_next)
        t = t_next
        report.visited.append((t, tuple(basic)))
        trace.steps.append(PivotStep(enter, leave, lp.objective(Basis(tuple(basic)).primal(lp))))
        if report.pivots_phase2 > limit:
            raise IterationLimitError(f"parametric path exceeded {limit} pivots")

    basis = Basis(tuple(basic))
    x = basis.primal(lp)
    if not arith.exact:
        x = [max(v, 0.0) for v in x]
    w, y = reduced_costs(lp, basis)
    sol = SimplexSolution(OPTIMAL, x=tuple(x), w=w, y=y, objective=lp.objective(x), trace=trace, basis=basis)
    report.optimal_value = sol.objective
    report.optimal_verified = bool(kkt_check(lp, sol.certificate()))
    return sol, report


def _expand(basic, xB, n, arith):
    x = [arith.zero] * n
    for j, v in zip(basic, xB):
        x[j] = v
    return x


def breakpoint_certificate(embedding: Embedding, t, basic: Sequence[int]) -> ParametricCertificate:
    """Parametric KKT certificate at tilt ``t`` for a basis optimal there.

    ``u = t s`` puts the objective at ``c + M^T u = c + t g``; ``x`` is the
    basic solution, ``y`` its reduced costs and ``v = D^-1 M (x - d)``.
    """
    pair = embedding.pair
    lp = pair.lp
    basis = Basis(tuple(basic))
    x = basis.primal(lp)
    tilted = lp.with_cost([ci + t * gi for ci, gi in zip(lp.c, embedding.g)])
    _, y = reduced_costs(tilted, basis)
    u = tuple(t * si for si in embedding.s)
    v = tuple(pair.scaled_image(x, pair.d))
    return ParametricCertificate(tuple(x), tuple(y), u, v)


def bound_report(reports: Sequence[PathReport]) -> dict:
    """Pivots against ``n`` over a set of verified path reports."""
    for rep in reports:
        if not rep.optimal_verified:
            raise UnverifiedReportError(f"report for {rep.instance} is not optimal_verified")
    per_instance = []
    counterexamples = []
    max_ratio = None
    for rep in reports:
        ratio = Fraction(rep.pivots_phase2, rep.n)
        max_ratio = ratio if max_ratio is None else max(max_ratio, ratio)
        per_instance.append({"instance": rep.instance, "n": rep.n, "pivots": rep.pivots_phase2,
                             "bound_holds": rep.bound_holds})
        if not rep.bound_holds:
            counterexamples.append(rep.to_json())
    holds = sum(1 for rep in reports if rep.bound_holds)
    return {
        "instances": len(reports),
        "holds": holds,
        "fails": len(reports) - holds,
        "max_ratio": max_ratio,
        "per_instance": per_instance,
        "counterexamples": counterexamples,
    }
