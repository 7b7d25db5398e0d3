"""Steady-state evolutionary loop with 3-tournament elimination.

Each iteration samples three distinct individuals, removes the worst
(ties broken at random), breeds the other two, and puts the child in the
freed slot unconditionally. Encodings are reached only through
``random``, ``vary``, ``decode`` and ``describe``.
"""
from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

from .bitstring import TruthTableEncoding
from .boolfunc import MAX_VARS, TruthTable, int_to_bits
from .fitness import EXTENDED, LITERAL, evaluator
from .gp import TreeEncoding

ENCODINGS = ("tt", "gp")


@dataclass(frozen=True)
class EaConfig:
    n: int
    encoding: str = "gp"
    population_size: int = 500
    p_mut: float = 0.5
    budget: int = 1_000_000
    seed: int = 0
    max_depth: int = 8
    early_stop: bool = True
    odd_denominator: str = EXTENDED

    def __post_init__(self):
        if not 2 <= self.n <= MAX_VARS:
            raise ValueError(f"n must be in [2, {MAX_VARS}], got {self.n}")
        if self.encoding not in ENCODINGS:
            raise ValueError(f"encoding must be one of {ENCODINGS}, got {self.encoding!r}")
        if self.population_size < 3:
            raise ValueError("population_size must be >= 3 for a 3-tournament")
        if self.budget < self.population_size:
            raise ValueError("budget must cover the initial population")
        if not 0.0 <= self.p_mut <= 1.0:
            raise ValueError("p_mut must be a probability")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.odd_denominator not in (EXTENDED, LITERAL):
            raise ValueError(f"unknown odd_denominator {self.odd_denominator!r}")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def make_encoding(config: EaConfig):
    if config.encoding == "tt":
        return TruthTableEncoding(config.n, p_mut=config.p_mut)
    return TreeEncoding(config.n, max_depth=config.max_depth, p_mut=config.p_mut)


@dataclass
class RunRecord:
    config: EaConfig
    best_fitness: Fraction
    best_truth_table: str
    best_expression: Optional[str]
    evaluations_used: int
    history: list[tuple[int, Fraction]]
    wall_time: float
    success: bool
    optimum: Fraction = field(default=Fraction(0))

    @property
    def normalized(self) -> float:
        return float(self.best_fitness / self.optimum)

    def table(self) -> TruthTable:
        return TruthTable.from_hex(self.best_truth_table)

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "config": asdict(self.config),
            "best_fitness": float(self.best_fitness),
            "best_fitness_exact": str(self.best_fitness),
            "optimum": float(self.optimum),
            "normalized": self.normalized,
            "success": self.success,
            "best_truth_table": self.best_truth_table,
            "best_expression": self.best_expression,
            "evaluations_used": self.evaluations_used,
            "history": [[e, float(f)] for e, f in self.history],
            "wall_time": round(self.wall_time, 6) if timing else 0.0,
        }

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "RunRecord":
        return cls(
            config=EaConfig(**d["config"]),
            best_fitness=Fraction(d["best_fitness_exact"]),
            best_truth_table=d["best_truth_table"],
            best_expression=d["best_expression"],
            evaluations_used=d["evaluations_used"],
            history=[(e, Fraction(f)) for e, f in d["history"]],
            wall_time=d["wall_time"],
            success=d["success"],
            optimum=Fraction(d["optimum"]),
        )


def select_loser(members: Sequence[int], scores: Sequence[int], rng: random.Random) -> int:
    """Index (into ``members``' population) of the worst; ties at random."""
    worst = min(scores[m] for m in members)
    tied = [m for m in members if scores[m] == worst]
    return tied[0] if len(tied) == 1 else rng.choice(tied)


def run(config: EaConfig, encoding=None) -> RunRecord:
    """One seeded run. ``encoding`` overrides the one named in ``config``."""
    rng = random.Random(config.seed)
    enc = encoding if encoding is not None else make_encoding(config)
    ev = evaluator(config.n, config.odd_denominator)
    n, size = config.n, config.population_size
    start = time.perf_counter()

    population = []
    scores = []
    best_score = None
    best_genome = None
    best_table = 0
    history: list[tuple[int, int]] = []
    evals = 0
    done = False

    def consider(genome, table: int, score: int, bits) -> bool:
        nonlocal best_score, best_genome, best_table
        if best_score is None or score > best_score:
            best_score, best_genome, best_table = score, genome, table
            history.append((evals, score))
        return config.early_stop and score == ev.optimum_scaled and ev.is_optimal(score, bits)

    for _ in range(size):
        genome = enc.random(rng)
        table = enc.decode(genome)
        bits = int_to_bits(table, n)
        score = ev.scaled(bits)
        evals += 1
        population.append(genome)
        scores.append(score)
        if consider(genome, table, score, bits):
            done = True
            break

    members = range(size)
    while not done and evals < config.budget:
        trio = rng.sample(members, 3)
        loser = select_loser(trio, scores, rng)
        a, b = (population[m] for m in trio if m != loser)
        child = enc.vary(a, b, rng)
        table = enc.decode(child)
        bits = int_to_bits(table, n)
        score = ev.scaled(bits)
        evals += 1
        population[loser] = child
        scores[loser] = score
        done = consider(child, table, score, bits)

    if history[-1][0] != evals:
        history.append((evals, best_score))
    best_bits = int_to_bits(best_table, n)
    return RunRecord(
        config=config,
        best_fitness=ev.to_fraction(best_score),
        best_truth_table=TruthTable(n, best_bits).to_hex(),
        best_expression=enc.describe(best_genome),
        evaluations_used=evals,
        history=[(e, ev.to_fraction(s)) for e, s in history],
        wall_time=time.perf_counter() - start,
        success=ev.is_optimal(best_score, best_bits),
        optimum=ev.optimum,
    )


def run_batch(
    config: EaConfig, repetitions: int, base_seed: int = 0, jobs: int = 1
) -> list[RunRecord]:
    """Independent runs seeded base_seed, base_seed+1, ...; returned in seed order."""
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    configs = [replace(config, seed=base_seed + k) for k in range(repetitions)]
    if jobs <= 1 or repetitions == 1:
        return [run(c) for c in configs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run, configs))
