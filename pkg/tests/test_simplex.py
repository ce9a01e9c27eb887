from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paramlp import linalg
from paramlp.errors import SingularBasisError, SizeGuardError
from paramlp.harness.generators import corpus_instance, fixture_t1, gen_klee_minty, gen_random_bounded
from paramlp.model import kkt_check, validate_standard_form
from paramlp.scalar import FLOAT_ARITH
from paramlp.simplex import (
    BLAND,
    DANTZIG,
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    Basis,
    bland_iteration_bound,
    brute_force_optimum,
    phase1,
    reduced_costs,
    solve,
)

F = Fraction


def _ray_ok(lp, sol):
    r = sol.ray
    return (all(v >= 0 for v in r) and all(v == 0 for v in linalg.matvec(lp.A, r))
            and linalg.dot(lp.c, r) < 0)


class TestPhase1:
    def test_t1(self):
        lp = fixture_t1()
        basis = phase1(lp)
        x = basis.primal(lp)
        assert linalg.matvec(lp.A, x) == [3]
        assert all(v >= 0 for v in x)

    def test_infeasible(self):
        lp = validate_standard_form({"A": [[1, 1]], "b": [-1], "c": [0, 0]})
        assert phase1(lp) is None

    def test_identity(self):
        lp = validate_standard_form({"A": [[1, 0], [0, 1]], "b": [1, 1], "c": [0, 0]})
        basis = phase1(lp)
        assert sorted(basis.basic) == [0, 1]
        assert basis.primal(lp) == [1, 1]


class TestSolve:
    def test_t1_from_start(self):
        sol = solve(fixture_t1(), BLAND, start=Basis((0,)))
        assert sol.status == OPTIMAL
        assert sol.x == (0, 0, 3)
        assert sol.objective == 0

    def test_zero_cost(self):
        lp = fixture_t1().with_cost([0, 0, 0])
        sol = solve(lp)
        assert sol.status == OPTIMAL
        assert sol.objective == 0
        assert sol.trace.pivots == 0

    def test_unbounded(self):
        lp = validate_standard_form({"A": [[1, -1]], "b": [0], "c": [-1, 0]})
        sol = solve(lp)
        assert sol.status == UNBOUNDED
        assert sol.ray == (1, 1)
        assert _ray_ok(lp, sol)

    def test_infeasible(self):
        lp = validate_standard_form({"A": [[1, 1]], "b": [-1], "c": [1, 0]})
        assert solve(lp).status == INFEASIBLE

    def test_singular_start(self):
        lp = validate_standard_form({"A": [[1, 1, 0], [2, 2, 1]], "b": [1, 3], "c": [0, 0, 0]})
        with pytest.raises(SingularBasisError):
            solve(lp, start=Basis((0, 1)))

    def test_trace_monotone(self):
        lp = gen_klee_minty(4)
        sol = solve(lp, DANTZIG, start=Basis(tuple(lp.meta["start"])))
        objs = [s.objective for s in sol.trace.steps]
        assert all(b <= a for a, b in zip(objs, objs[1:]))
        trace = sol.trace.to_json()
        assert trace["rule"] == DANTZIG and len(trace["steps"]) == sol.trace.pivots

    def test_degenerate_cycling_example(self):
        # Beale's example cycles under the textbook rule; Bland must terminate
        A = [[F(1, 4), -8, -1, 9, 1, 0, 0],
             [F(1, 2), -12, F(-1, 2), 3, 0, 1, 0],
             [0, 0, 1, 0, 0, 0, 1]]
        c = [F(-3, 4), 20, F(-1, 2), 6, 0, 0, 0]
        lp = validate_standard_form({"A": A, "b": [0, 0, 1], "c": c})
        sol = solve(lp, BLAND, start=Basis((4, 5, 6)))
        assert sol.status == OPTIMAL
        assert sol.objective == F(-5, 4)
        assert sol.trace.pivots <= bland_iteration_bound(lp)


class TestReducedCosts:
    def test_slack_basis(self):
        w, y = reduced_costs(fixture_t1(), Basis((2,)))
        assert w == (0,) and y == (2, 1, 0)

    def test_first_column(self):
        w, y = reduced_costs(fixture_t1(), Basis((0,)))
        assert w == (2,) and y == (0, -1, -2)

    def test_square(self):
        lp = validate_standard_form({"A": [[1, 0], [0, 1]], "b": [1, 1], "c": [5, 7]})
        w, y = reduced_costs(lp, Basis((0, 1)))
        assert w == (5, 7) and y == (0, 0)


class TestBruteForce:
    def test_t1(self):
        ref = brute_force_optimum(fixture_t1())
        assert ref.status == OPTIMAL and ref.value == 0
        assert ref.vertices == [(0, 0, 3)]

    def test_zero_cost(self):
        ref = brute_force_optimum(fixture_t1().with_cost([0, 0, 0]))
        assert sorted(ref.vertices) == [(0, 0, 3), (0, 3, 0), (3, 0, 0)]

    def test_unbounded(self):
        lp = validate_standard_form({"A": [[1, -1]], "b": [0], "c": [-1, 0]})
        assert brute_force_optimum(lp).status == UNBOUNDED

    def test_size_guard(self):
        lp = validate_standard_form({"A": [[1] * 30], "b": [1], "c": [0] * 30})
        with pytest.raises(SizeGuardError):
            brute_force_optimum(lp)

    def test_small_random(self):
        assert brute_force_optimum(gen_random_bounded(1, 3, 7)).status == OPTIMAL


@pytest.mark.parametrize("D", range(3, 9))
def test_klee_minty_dantzig(D):
    lp = gen_klee_minty(D)
    sol = solve(lp, DANTZIG, start=Basis(tuple(lp.meta["start"])))
    assert sol.trace.pivots == 2 ** D - 1
    assert sol.objective == -(100 ** (D - 1))


@pytest.mark.parametrize("rule", [BLAND, DANTZIG])
@pytest.mark.parametrize("seed", range(1, 41))
def test_matches_enumeration(seed, rule):
    lp = corpus_instance(seed)
    sol = solve(lp, rule)
    ref = brute_force_optimum(lp)
    assert sol.status == ref.status == OPTIMAL
    assert sol.objective == ref.value
    assert kkt_check(lp, sol.certificate())
    assert sol.trace.pivots <= bland_iteration_bound(lp)


@pytest.mark.parametrize("seed", range(1, 21))
def test_float_matches_exact(seed):
    exact = brute_force_optimum(corpus_instance(seed))
    lp = corpus_instance(seed, FLOAT_ARITH)
    sol = solve(lp)
    assert sol.status == OPTIMAL
    assert abs(sol.objective - float(exact.value)) <= 1e-8 * max(1.0, abs(float(exact.value)))
    assert kkt_check(lp, sol.certificate())


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(0, 3), st.integers(0, 10**6),
       st.lists(st.integers(-3, 3), min_size=7, max_size=7))
def test_arbitrary_costs_agree(m, extra, seed, cost):
    # arbitrary costs may make the problem unbounded; verdicts must still agree
    n = m + 1 + extra
    lp = gen_random_bounded(m, n, seed).with_cost([F(v) for v in cost[:n]])
    sol = solve(lp)
    ref = brute_force_optimum(lp)
    assert sol.status == ref.status
    if sol.status == OPTIMAL:
        assert sol.objective == ref.value
        assert kkt_check(lp, sol.certificate())
    else:
        assert _ray_ok(lp, sol)
