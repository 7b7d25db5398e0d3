import json
import random
from collections import Counter

import pytest

from negabent.bitstring import TruthTableEncoding
from negabent.boolfunc import TruthTable, is_bent, is_negabent_direct
from negabent.engine import EaConfig, RunRecord, run, run_batch, select_loser
from negabent.fitness import fitness, fitness_optimum


class RecordingEncoding(TruthTableEncoding):
    """TT encoding that counts engine calls and tracks population ids."""

    def __init__(self, n):
        super().__init__(n)
        self.inits = 0
        self.varies = 0

    def random(self, rng):
        self.inits += 1
        return super().random(rng)

    def vary(self, a, b, rng):
        self.varies += 1
        return super().vary(a, b, rng)


def small(n=6, encoding="tt", **kw):
    kw.setdefault("population_size", 30)
    kw.setdefault("budget", 2000)
    return EaConfig(n=n, encoding=encoding, **kw)


class TestTournament:
    def test_worst_of_three_eliminated(self):
        scores = [1, 2, 3]
        assert select_loser([0, 1, 2], scores, random.Random(0)) == 0
        assert select_loser([2, 0, 1], scores, random.Random(0)) == 0

    def test_ties_broken_uniformly(self):
        scores = [5, 5, 5, 9]
        rng = random.Random(1)
        counts = Counter(select_loser([0, 1, 3], scores, rng) for _ in range(6000))
        assert set(counts) == {0, 1}
        assert abs(counts[0] - 3000) < 250


class TestConfig:
    @pytest.mark.parametrize(
        "kw",
        [
            {"n": 1},
            {"n": 6, "encoding": "cgp"},
            {"n": 6, "population_size": 2},
            {"n": 6, "population_size": 100, "budget": 50},
            {"n": 6, "p_mut": 1.5},
            {"n": 6, "max_depth": 0},
            {"n": 6, "seed": -1},
            {"n": 6, "odd_denominator": "x"},
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            EaConfig(**kw)

    def test_defaults(self):
        c = EaConfig(n=6)
        assert (c.population_size, c.p_mut, c.budget, c.max_depth) == (500, 0.5, 1_000_000, 8)


class TestRun:
    def test_budget_accounting(self):
        enc = RecordingEncoding(8)
        rec = run(small(n=8, early_stop=False, budget=1500), encoding=enc)
        assert rec.evaluations_used == 1500
        assert enc.inits == 30
        assert enc.varies == 1500 - 30

    def test_history_monotone(self):
        for encoding in ("tt", "gp"):
            rec = run(small(n=8, encoding=encoding, budget=3000, early_stop=False))
            fits = [f for _, f in rec.history]
            evals = [e for e, _ in rec.history]
            assert fits == sorted(fits)
            assert evals == sorted(evals)
            assert rec.history[-1] == (rec.evaluations_used, rec.best_fitness)
            assert rec.evaluations_used <= 3000

    def test_best_fitness_matches_table(self):
        rec = run(small(n=8, encoding="gp", budget=2000))
        assert fitness(rec.table()) == rec.best_fitness

    def test_seed_determinism(self):
        a = run(small(encoding="gp", seed=42))
        b = run(small(encoding="gp", seed=42))
        assert a.to_json(timing=False) == b.to_json(timing=False)
        c = run(small(encoding="gp", seed=43))
        assert c.to_json(timing=False) != a.to_json(timing=False)

    def test_early_stop_at_optimum(self):
        rec = run(EaConfig(n=6, encoding="gp", seed=1, budget=200_000))
        assert rec.success
        assert rec.best_fitness == fitness_optimum(6) == 56
        assert rec.evaluations_used < 200_000
        tt = rec.table()
        assert is_bent(tt) and is_negabent_direct(tt)
        assert rec.best_expression is not None

    def test_both_encodings_through_same_loop(self):
        for encoding in ("tt", "gp"):
            rec = run(small(n=5, encoding=encoding, budget=1000))
            assert rec.config.encoding == encoding
            assert rec.best_fitness <= fitness_optimum(5)

    def test_odd_literal_mode_success_is_bentness(self):
        rec = run(small(n=5, encoding="gp", odd_denominator="literal", budget=5000))
        assert rec.success
        assert rec.best_fitness == fitness_optimum(5) - 1

    def test_record_round_trip(self):
        rec = run(small(encoding="gp", budget=500))
        data = json.loads(rec.to_json())
        back = RunRecord.from_dict(data)
        assert back.to_json() == rec.to_json()
        assert set(data) >= {
            "config", "best_fitness", "best_truth_table", "best_expression",
            "evaluations_used", "history", "wall_time", "success",
        }
        assert TruthTable.from_hex(data["best_truth_table"]).n == 6

    def test_normalized(self):
        rec = run(small(n=8, budget=500, early_stop=False))
        assert rec.normalized == pytest.approx(float(rec.best_fitness) / 240)
        assert rec.normalized <= 1


class TestBatch:
    def test_seeds_and_order(self):
        recs = run_batch(small(budget=300), 4, base_seed=10)
        assert [r.config.seed for r in recs] == [10, 11, 12, 13]

    def test_reproducible(self):
        a = [r.to_json(timing=False) for r in run_batch(small(budget=300), 3, base_seed=5)]
        b = [r.to_json(timing=False) for r in run_batch(small(budget=300), 3, base_seed=5)]
        assert a == b

    def test_parallel_matches_serial(self):
        serial = [r.to_json(timing=False) for r in run_batch(small(budget=300), 3, 7, jobs=1)]
        parallel = [r.to_json(timing=False) for r in run_batch(small(budget=300), 3, 7, jobs=2)]
        assert serial == parallel

    def test_rejects_zero_reps(self):
        with pytest.raises(ValueError):
            run_batch(small(), 0)
