import json
from fractions import Fraction

import pytest

from paramlp import linalg
from paramlp.errors import ScalarModeError, SchemaError
from paramlp.harness import io
from paramlp.harness.bench import BenchAbort, run_bench, run_one
from paramlp.harness.generators import (
    InstanceSpec,
    corpus_dims,
    fixture_t1,
    fixture_t1_pair,
    gen_klee_minty,
    gen_random_bounded,
    gen_random_pair,
)
from paramlp.harness.oracle import grid_transition_points, points_agree
from paramlp.harness.rng import SplitMix64
from paramlp.parametric import DUAL, PRIMAL, sweep
from paramlp.pivotpath import parametric_path_solve
from paramlp.simplex import BLAND, DANTZIG, OPTIMAL, PARAMETRIC, Basis, solve

F = Fraction


class TestRng:
    def test_reference_stream(self):
        rng = SplitMix64(0)
        assert rng.next_u64() == 0xE220A8397B1DCDAF
        assert rng.next_u64() == 0x6E789E6AA1B965F4

    def test_range(self):
        rng = SplitMix64(5)
        draws = [rng.randint(-9, 9) for _ in range(500)]
        assert min(draws) == -9 and max(draws) == 9


class TestGenerators:
    def test_klee_minty_d1(self):
        lp = gen_klee_minty(1)
        sol = solve(lp, DANTZIG, start=Basis(tuple(lp.meta["start"])))
        assert sol.trace.pivots == 1 and sol.objective == -1

    def test_klee_minty_d2(self):
        lp = gen_klee_minty(2)
        assert lp.A == ((1, 0, 1, 0), (20, 1, 0, 1))
        assert lp.b == (1, 100)
        assert lp.c == (-10, -1, 0, 0)

    def test_klee_minty_range(self):
        with pytest.raises(ValueError):
            gen_klee_minty(13)

    def test_deterministic(self):
        assert gen_random_bounded(2, 5, 42) == gen_random_bounded(2, 5, 42)
        assert gen_random_bounded(2, 5, 42).A != gen_random_bounded(2, 5, 43).A

    def test_bounds(self):
        with pytest.raises(ValueError):
            gen_random_bounded(5, 5, 1)

    @pytest.mark.parametrize("seed", range(1, 21))
    def test_certificates(self, seed):
        m, n = corpus_dims(seed)
        assert 3 <= n <= 10 and 1 <= m <= min(8, n - 2)
        lp = gen_random_bounded(m, n, seed)
        meta = lp.meta
        assert list(linalg.matvec(lp.A, meta["x0"])) == list(lp.b)
        assert all(v >= 0 for v in meta["x0"]) and all(v >= 0 for v in meta["y"])
        assert solve(lp).status == OPTIMAL

    def test_random_pair(self):
        pair = gen_random_pair(6, 3)
        assert (pair.m, pair.l, pair.r) == (4, 1, 1)
        assert pair.assumption_clean
        assert gen_random_pair(6, 3) == pair

    def test_spec_names(self):
        lp = InstanceSpec("klee-minty", {"D": 3}).build()
        assert lp.name == "klee_minty_D3"
        assert InstanceSpec("fixture", {"name": "T1"}).build() == fixture_t1()
        assert InstanceSpec("random_bounded", {"m": 2, "n": 5, "seed": 42}, "mine").build().name == "mine"
        with pytest.raises(ValueError):
            InstanceSpec("nope").build()


class TestIo:
    def test_lp_round_trip(self, tmp_path):
        lp = fixture_t1()
        io.save_lp(lp, tmp_path / "t1.json")
        assert io.load_lp(tmp_path / "t1.json") == lp

    def test_rational_strings(self, tmp_path):
        path = tmp_path / "q.json"
        path.write_text(json.dumps({"A": [[1, "1/3"]], "b": ["2/3"], "c": [0, 1]}))
        lp = io.load_lp(path)
        assert lp.A[0][1] == F(1, 3) and lp.b == (F(2, 3),)

    def test_decimal_rejected(self, tmp_path):
        path = tmp_path / "d.json"
        path.write_text(json.dumps({"A": [[1, "0.333"]], "b": [1], "c": [0, 1]}))
        with pytest.raises(ScalarModeError):
            io.load_lp(path)
        assert io.load_lp(path, "float").A[0][1] == 0.333

    def test_missing_key(self, tmp_path):
        path = tmp_path / "m.json"
        path.write_text(json.dumps({"A": [[1, 1]], "b": [1]}))
        with pytest.raises(SchemaError):
            io.load_lp(path)

    def test_malformed(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(SchemaError):
            io.load_lp(path)

    def test_pair_round_trip(self, tmp_path):
        pair = fixture_t1_pair()
        io.save_pair(pair, tmp_path / "p.json")
        assert io.load_pair(tmp_path / "p.json") == pair
        (tmp_path / "block.json").write_text(json.dumps({"d": [1, 1, 1], "B": [[1, -1, 0]]}))
        assert io.load_pair(tmp_path / "block.json", lp=fixture_t1()) == pair

    @pytest.mark.parametrize("side", [PRIMAL, DUAL])
    def test_decomposition_round_trip(self, tmp_path, side):
        dec = sweep(fixture_t1_pair(), side)
        io.save_decomposition(dec, tmp_path / "dec.json")
        back = io.load_decomposition(tmp_path / "dec.json")
        assert back.transition_points == dec.transition_points
        assert back.intervals == dec.intervals
        assert back.to_json() == dec.to_json()

    def test_report_round_trip(self, tmp_path):
        _, rep = parametric_path_solve(gen_random_bounded(3, 7, 11))
        io.save_report(rep, tmp_path / "r.json")
        assert io.load_report(tmp_path / "r.json").to_json() == rep.to_json()


class TestBench:
    def test_t1_suite(self):
        suite = {"instances": [{"kind": "fixture", "params": {"name": "T1"}}], "rules": [BLAND, PARAMETRIC]}
        report = run_bench(suite)
        assert len(report.records) == 2
        assert all(r.optimal_value == 0 and r.optimal_verified for r in report.records)

    def test_klee_minty_suite(self):
        suite = {"instances": [{"kind": "klee_minty", "params": {"D": D}} for D in (5, 3, 4)],
                 "rules": [DANTZIG]}
        report = run_bench(suite)
        assert [r.instance for r in report.records] == ["klee_minty_D3", "klee_minty_D4", "klee_minty_D5"]
        assert [r.pivots for r in report.records] == [7, 15, 31]
        assert report.aggregate()["total_pivots"] == 7 + 15 + 31

    def test_empty(self):
        report = run_bench({"instances": []})
        assert report.records == [] and report.aggregate()["runs"] == 0

    def test_unknown_rule(self):
        with pytest.raises(SchemaError):
            run_bench({"instances": [], "rules": ["steepest"]})

    def test_parallel_matches_serial(self):
        suite = {"instances": [{"kind": "random", "params": {"seed": s}} for s in range(1, 6)],
                 "rules": [BLAND, PARAMETRIC]}
        serial = run_bench(suite)
        parallel = run_bench(suite, jobs=2)
        strip = lambda rep: [(r.instance, r.rule, r.pivots, r.optimal_value) for r in rep.records]  # noqa: E731
        assert strip(serial) == strip(parallel)

    def test_abort_dumps_trace(self, tmp_path, monkeypatch):
        import paramlp.harness.bench as bench

        def broken(lp, cert):
            return False

        monkeypatch.setattr(bench, "kkt_check", broken)
        dump = tmp_path / "trace.json"
        with pytest.raises(BenchAbort):
            run_bench({"instances": [{"kind": "fixture", "params": {"name": "T1"}}]}, trace_dump=str(dump))
        assert json.loads(dump.read_text())["rule"] == BLAND

    def test_record_json(self):
        rec = run_one(InstanceSpec("fixture", {"name": "T1"}), DANTZIG)
        data = rec.to_json()
        assert data["bound_holds"] and data["n"] == 3


class TestOracle:
    def test_t1(self):
        pair = fixture_t1_pair()
        primal = grid_transition_points(pair, PRIMAL, grid=200)
        assert points_agree([F(-1), F(1, 2)], primal.transition_points)
        dual = grid_transition_points(pair, DUAL, grid=200)
        assert points_agree([F(-1, 3)], dual.transition_points)

    def test_agreement_needs_equal_counts(self):
        assert not points_agree([F(0)], [0.0, 1.0])
        assert not points_agree([F(0)], [1e-3])
