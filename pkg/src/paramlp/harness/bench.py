"""Benchmark suites: run every (instance, rule) pair and record pivot counts."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

from ..errors import InternalInconsistencyError, SchemaError
from ..model import kkt_check
from ..pivotpath import parametric_path_solve
from ..scalar import EXACT, Arithmetic, format_scalar
from ..simplex import BLAND, DANTZIG, OPTIMAL, PARAMETRIC, Basis, brute_force_optimum, solve
from .generators import InstanceSpec
from .io import read_json, write_json

RULES = (BLAND, DANTZIG, PARAMETRIC)
BRUTE_FORCE_MAX_N = 10


class BenchAbort(InternalInconsistencyError):
    """A run failed verification; ``trace`` holds the failing pivot trace."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


@dataclass
class BenchRecord:
    instance: str
    rule: str
    pivots: int
    n: int
    status: str
    optimal_value: object
    optimal_verified: bool
    runtime: float
    pivots_bootstrap: int = 0
    phase1_pivots: int = 0

    @property
    def bound_holds(self) -> bool:
        return self.pivots <= self.n

    def to_json(self) -> dict:
        return {
            "instance": self.instance,
            "rule": self.rule,
            "pivots": self.pivots,
            "n": self.n,
            "bound_holds": self.bound_holds,
            "status": self.status,
            "optimal_value": None if self.optimal_value is None else format_scalar(self.optimal_value),
            "optimal_verified": self.optimal_verified,
            "runtime": self.runtime,
            "pivots_bootstrap": self.pivots_bootstrap,
            "phase1_pivots": self.phase1_pivots,
        }


@dataclass
class BenchReport:
    records: List[BenchRecord] = field(default_factory=list)

    def aggregate(self) -> dict:
        by_rule = {}
        for rec in self.records:
            agg = by_rule.setdefault(rec.rule, {"runs": 0, "pivots": 0, "bound_holds": 0, "max_ratio": 0.0})
            agg["runs"] += 1
            agg["pivots"] += rec.pivots
            agg["bound_holds"] += rec.bound_holds
            agg["max_ratio"] = max(agg["max_ratio"], rec.pivots / rec.n)
        return {
            "runs": len(self.records),
            "total_pivots": sum(r.pivots for r in self.records),
            "all_verified": all(r.optimal_verified for r in self.records),
            "by_rule": by_rule,
        }

    def to_json(self) -> dict:
        return {"records": [r.to_json() for r in self.records], "aggregate": self.aggregate()}


def parse_suite(data) -> tuple:
    """``(specs, rules, mode)`` from a suite document."""
    if not isinstance(data, dict):
        raise SchemaError("suite must be a JSON object")
    specs = []
    for item in data.get("instances", []):
        if "kind" not in item:
            raise SchemaError("suite instance is missing 'kind'")
        specs.append(InstanceSpec(item["kind"], dict(item.get("params", {})), item.get("name", "")))
    rules = list(data.get("rules", [BLAND]))
    for rule in rules:
        if rule not in RULES:
            raise SchemaError(f"unknown rule {rule!r}; expected one of {RULES}")
    return specs, rules, data.get("arith", EXACT)


def run_one(spec: InstanceSpec, rule: str, mode: str = EXACT) -> BenchRecord:
    """Solve one instance under one rule, verify it, and record the counts."""
    lp = spec.build(Arithmetic(mode))
    start = Basis(tuple(lp.meta["start"])) if "start" in lp.meta else None
    t0 = time.perf_counter()
    bootstrap = 0
    if rule == PARAMETRIC:
        sol, report = parametric_path_solve(lp)
        pivots, bootstrap = report.pivots_phase2, report.pivots_bootstrap
    else:
        sol = solve(lp, rule, start=start)
        pivots = sol.trace.pivots
    runtime = time.perf_counter() - t0
    verified = sol.status == OPTIMAL and bool(kkt_check(lp, sol.certificate()))
    if sol.status == OPTIMAL and not verified:
        raise BenchAbort(f"{lp.name} under {rule}: optimum failed the KKT check", sol.trace)
    if lp.n <= BRUTE_FORCE_MAX_N:
        ref = brute_force_optimum(lp)
        same = ref.status == sol.status and (
            sol.status != OPTIMAL or lp.arith.eq(ref.value, sol.objective)
        )
        if not same:
            raise BenchAbort(
                f"{lp.name} under {rule}: {sol.status} {sol.objective} disagrees with "
                f"enumeration {ref.status} {ref.value}",
                sol.trace,
            )
    return BenchRecord(
        instance=lp.name, rule=rule, pivots=pivots, n=lp.n, status=sol.status,
        optimal_value=sol.objective, optimal_verified=verified, runtime=runtime,
        pivots_bootstrap=bootstrap, phase1_pivots=sol.trace.phase1_steps,
    )


def _run_job(args):
    return run_one(*args)


def run_bench(suite, jobs: int = 1, trace_dump: Optional[str] = None) -> BenchReport:
    """Run a suite (document or path).  Records are sorted by instance, then rule.

    Non-optimal verdicts are recorded with ``optimal_verified = False``; a
    verification failure aborts the run and writes the failing trace to
    ``trace_dump`` when given.
    """
    if isinstance(suite, (str, Path)):
        suite = read_json(suite)
    specs, rules, mode = parse_suite(suite)
    work = [(spec, rule, mode) for spec in specs for rule in rules]
    try:
        if jobs > 1 and len(work) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                records = list(pool.map(_run_job, work))
        else:
            records = [run_one(*job) for job in work]
    except BenchAbort as exc:
        if trace_dump and exc.trace is not None:
            write_json(exc.trace.to_json(), trace_dump)
        raise
    records.sort(key=lambda r: (r.instance, r.rule))
    return BenchReport(records)
