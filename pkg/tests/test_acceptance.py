"""Acceptance run: one test per criterion, each printing a PASS/FAIL line.

Artifacts (bound report, count-bound counterexamples) are written to
``artifacts/`` at the repository root.
"""
import json
import time
from fractions import Fraction
from pathlib import Path

import pytest

from paramlp.harness.generators import (
    corpus_instance,
    fixture_t1_pair,
    gen_klee_minty,
    pair_corpus_params,
    gen_random_pair,
)
from paramlp.harness.oracle import grid_transition_points, points_agree
from paramlp.model import kkt_check
from paramlp.parametric import DUAL, INF, PRIMAL, Interval, phi, psi, sweep, theta_interval
from paramlp.pivotpath import bound_report, parametric_path_solve
from paramlp.scalar import FLOAT_ARITH, format_scalar
from paramlp.simplex import BLAND, DANTZIG, OPTIMAL, Basis, brute_force_optimum, solve

F = Fraction
ARTIFACTS = Path(__file__).resolve().parent.parent / "artifacts"
CORPUS_SEEDS = range(1, 201)
KM_DIMS = range(3, 9)


def report_line(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")


def _rel_close(a, b, tol=1e-8):
    return abs(a - b) <= tol * max(1.0, abs(b))


@pytest.fixture(scope="module")
def corpus_runs():
    t0 = time.perf_counter()
    runs = []
    for seed in CORPUS_SEEDS:
        lp = corpus_instance(seed)
        lpf = corpus_instance(seed, FLOAT_ARITH)
        runs.append((lp, solve(lp, BLAND), lpf, solve(lpf, BLAND), brute_force_optimum(lp)))
    return runs, time.perf_counter() - t0


@pytest.fixture(scope="module")
def km_runs():
    t0 = time.perf_counter()
    runs = []
    for D in KM_DIMS:
        lp = gen_klee_minty(D)
        runs.append((D, lp, solve(lp, DANTZIG, start=Basis(tuple(lp.meta["start"])))))
    return runs, time.perf_counter() - t0


@pytest.fixture(scope="module")
def path_runs():
    t0 = time.perf_counter()
    lps = [corpus_instance(s) for s in CORPUS_SEEDS] + [gen_klee_minty(D) for D in KM_DIMS]
    runs = [(lp,) + parametric_path_solve(lp) for lp in lps]
    return runs, time.perf_counter() - t0


def _interior(interval):
    lo, hi = interval.lo, interval.hi
    if lo == -INF and hi == INF:
        return F(0)
    if lo == -INF:
        return hi - 1
    if hi == INF:
        return lo + 1
    return (lo + hi) / 2


@pytest.fixture(scope="module")
def pair_runs():
    runs = []
    for n, seed in pair_corpus_params(50):
        pair = gen_random_pair(n, seed)
        primal = sweep(pair, PRIMAL)
        dual = sweep(pair, DUAL)
        oracle = grid_transition_points(pair, PRIMAL)
        runs.append((n, seed, pair, primal, dual, oracle))
    return runs


def test_criterion_1_oracle_equivalence(corpus_runs, capsys):
    runs, elapsed = corpus_runs
    exact_bad, float_bad = [], []
    for lp, sol, lpf, solf, ref in runs:
        if not (sol.status == ref.status == OPTIMAL and sol.objective == ref.value):
            exact_bad.append(lp.name)
        if not (solf.status == OPTIMAL and _rel_close(solf.objective, float(ref.value))):
            float_bad.append(lp.name)
    ok = not exact_bad and not float_bad and elapsed < 120
    report_line(capsys, 1, ok, f"{len(runs)} instances, exact mismatches {len(exact_bad)}, "
                               f"float mismatches {len(float_bad)}, {elapsed:.1f}s (limit 120s)")
    assert not exact_bad, exact_bad
    assert not float_bad, float_bad
    assert elapsed < 120


def test_criterion_2_certificate_soundness(corpus_runs, km_runs, path_runs, capsys):
    checked, failed = 0, []
    for lp, sol, lpf, solf, _ in corpus_runs[0]:
        for prob, s in ((lp, sol), (lpf, solf)):
            if s.status == OPTIMAL:
                checked += 1
                if not kkt_check(prob, s.certificate()):
                    failed.append(prob.name)
    for _, lp, sol in km_runs[0]:
        checked += 1
        if not kkt_check(lp, sol.certificate()):
            failed.append(lp.name)
    for lp, sol, _ in path_runs[0]:
        if sol.status == OPTIMAL:
            checked += 1
            if not kkt_check(lp, sol.certificate()):
                failed.append(lp.name)
    report_line(capsys, 2, not failed, f"{checked} optimal certificates checked, {len(failed)} failed")
    assert not failed, failed


def test_criterion_3_klee_minty(km_runs, capsys):
    runs, elapsed = km_runs
    counts = {D: sol.trace.pivots for D, _, sol in runs}
    ok = all(counts[D] == 2 ** D - 1 for D in counts) and elapsed < 60
    report_line(capsys, 3, ok, f"Dantzig pivots {counts}, {elapsed:.1f}s (limit 60s)")
    assert all(counts[D] == 2 ** D - 1 for D in counts), counts
    assert elapsed < 60


def test_criterion_4_parametric_fixture(capsys):
    pair = fixture_t1_pair()
    checks = {
        "theta_P": theta_interval(pair, PRIMAL) == Interval.closed(F(-1), F(1, 2)),
        "theta_D": theta_interval(pair, DUAL) == Interval(-INF, INF),
        "phi(-1/3)": phi(pair, F(-1, 3)) == Interval.closed(F(-1), F(1, 2)),
        "phi(-1)": phi(pair, F(-1)) == Interval.closed(F(1, 2), F(1, 2)),
        "phi(1)": phi(pair, F(1)) == Interval.closed(F(-1), F(-1)),
        "psi(0)": psi(pair, F(0)) == Interval.closed(F(-1, 3), F(-1, 3)),
        "psi(1/2)": psi(pair, F(1, 2)) == Interval(-INF, F(-1, 3)),
        "psi(-1)": psi(pair, F(-1)) == Interval(F(-1, 3), INF),
        "primal sweep": sweep(pair, PRIMAL).transition_points == (F(-1), F(1, 2)),
        "dual sweep": sweep(pair, DUAL).transition_points == (F(-1, 3),),
        "dual intervals": sweep(pair, DUAL).intervals
        == (Interval.open(-INF, F(-1, 3)), Interval.open(F(-1, 3), INF)),
    }
    failed = [k for k, v in checks.items() if not v]
    report_line(capsys, 4, not failed, f"{len(checks) - len(failed)}/{len(checks)} tabulated values exact"
                + (f", failed {failed}" if failed else ""))
    assert not failed


def _biconditional_violations(pair, primal, dual):
    us = list(dual.transition_points) + [_interior(i) for i in dual.intervals]
    vs = set(primal.transition_points) | {_interior(i) for i in primal.intervals}
    phis = {u: phi(pair, u) for u in us}
    for image in phis.values():
        vs.update(x for x in (image.lo, image.hi) if x not in (-INF, INF))
    psis = {v: psi(pair, v) for v in vs}
    bad = []
    for u in us:
        for v in vs:
            if phis[u].contains(v) != psis[v].contains(u):
                bad.append((u, v))
    return bad, len(us) * len(vs)


def _covers(primal):
    pieces = [i.closure() for i in primal.intervals]
    theta = primal.theta
    if not pieces:
        return theta.is_point and list(primal.transition_points) == [theta.lo]
    ok = pieces[0].lo == theta.lo and pieces[-1].hi == theta.hi
    return ok and all(a.hi == b.lo for a, b in zip(pieces, pieces[1:]))


def _phi_images_cover(pair, primal, dual):
    """Union of phi over dual transition points and interval interiors is theta_P."""
    images = [phi(pair, u) for u in dual.transition_points]
    images += [phi(pair, _interior(i)) for i in dual.intervals]
    merged = []
    for lo, hi in sorted((i.lo, i.hi) for i in images):
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged == [(primal.theta.lo, primal.theta.hi)]


def test_criterion_5_biconditional_and_covering(pair_runs, capsys):
    samples, bicond_bad, cover_bad, count_over, inconsistent = 0, [], [], [], []
    for n, seed, pair, primal, dual, oracle in pair_runs:
        bad, checked = _biconditional_violations(pair, primal, dual)
        samples += checked
        if bad:
            bicond_bad.append((n, seed, bad))
        if not _covers(primal) or not _phi_images_cover(pair, primal, dual):
            cover_bad.append((n, seed))
        if len(primal.transition_points) > n or len(primal.intervals) > n:
            count_over.append((n, seed, primal))
            if not points_agree(primal.transition_points, oracle.transition_points):
                inconsistent.append((n, seed))
    ARTIFACTS.mkdir(exist_ok=True)
    path = ARTIFACTS / "count_bound_counterexamples.json"
    path.write_text(json.dumps([
        {"n": n, "seed": seed, "decomposition": dec.to_json()} for n, seed, dec in count_over
    ], indent=2))
    ok = not bicond_bad and not cover_bad and not inconsistent
    report_line(capsys, 5, ok, f"{len(pair_runs)} pairs, {samples} sampled (u, v) points, "
                               f"biconditional failures {len(bicond_bad)}, covering failures {len(cover_bad)}, "
                               f"count-bound violations {len(count_over)} (recorded), "
                               f"oracle-inconsistent among them {len(inconsistent)}")
    assert not bicond_bad, bicond_bad
    assert not cover_bad, cover_bad
    assert not inconsistent, inconsistent


def test_criterion_6_grid_oracle(pair_runs, capsys):
    # D = |M|^2 is large, so t-values are small; also report the error in the
    # distance coordinate t sqrt(D), where the oracle actually searches
    bad, worst, worst_scaled = [], 0.0, 0.0
    for n, seed, pair, primal, _, oracle in pair_runs:
        root = float(pair.D[0]) ** 0.5
        exact, approx = primal.transition_points, oracle.transition_points
        if not points_agree(exact, approx, 1e-6):
            bad.append((n, seed, [format_scalar(t) for t in exact], approx))
            continue
        for e, a in zip(exact, approx):
            worst = max(worst, abs(float(e) - a))
            worst_scaled = max(worst_scaled, abs(float(e) - a) * root)
    report_line(capsys, 6, not bad, f"{len(pair_runs)} pairs, disagreements {len(bad)}, "
                                    f"max |exact - grid| = {worst:.2e} (tolerance 1e-6), "
                                    f"in distance units {worst_scaled:.2e}")
    assert not bad, bad


def test_criterion_7_pivot_bound_evaluation(path_runs, capsys):
    runs, elapsed = path_runs
    reports = [rep for _, _, rep in runs]
    unverified = [rep.instance for rep in reports if not rep.optimal_verified]
    summary = None
    if not unverified:
        summary = bound_report(reports)
        ARTIFACTS.mkdir(exist_ok=True)
        out = dict(summary, max_ratio=format_scalar(summary["max_ratio"]),
                   reports=[rep.to_json() for rep in reports], runtime=elapsed)
        (ARTIFACTS / "bound_report.json").write_text(json.dumps(out, indent=2))
    ok = not unverified and elapsed < 300
    detail = f"{len(reports)} path solves, unverified {len(unverified)}, {elapsed:.1f}s (limit 300s)"
    if summary:
        detail += (f"; bound holds {summary['holds']}, fails {summary['fails']}, "
                   f"max pivots/n = {format_scalar(summary['max_ratio'])}")
    report_line(capsys, 7, ok, detail)
    assert not unverified, unverified
    assert elapsed < 300
