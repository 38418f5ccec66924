"""Long-running checks of the whole pipeline; run with `pytest -m slow`."""
import time

import numpy as np
import pytest

from rcpsp_ga.config import config
from rcpsp_ga.experiment import GeneratorSpec, SweepSpec, best_settings, generate_instance, run_sweep
from rcpsp_ga.ga.engine import GAConfig, evolve
from rcpsp_ga.oracle import brute_force_optimum
from tests.factories import random_instance

pytestmark = pytest.mark.slow


def test_ga_matches_the_oracle_on_small_instances():
    started = time.perf_counter()
    rng = np.random.default_rng(2024)
    hits, runs = 0, 0
    for k in range(25):
        instance = random_instance(1000 + k, n=int(rng.integers(5, 9)), groups=2,
                                   density=float(rng.choice([0.1, 0.3, 0.5])), capacity_range=(1, 3))
        optimum = brute_force_optimum(instance).optimal_makespan
        for seed in range(5):
            result = evolve(instance, GAConfig(population_size=20, crossover="pmx", crossover_probability=0.8,
                                               mutation="swap", mutation_probability=0.1,
                                               max_generations=300, seed=seed), timing=False)
            assert result.best_makespan >= optimum
            hits += result.best_makespan == optimum
            runs += 1
    assert runs == 125
    assert hits >= 0.95 * runs
    assert time.perf_counter() - started < 60


def test_ga_improves_on_the_rules_for_a_case_sized_instance():
    instance = generate_instance(GeneratorSpec(activities=317, workgroups=5, groups=12, seed=42))
    improved = 0
    for seed in range(3):
        result = evolve(instance, GAConfig(max_generations=None, time_limit_ms=60_000, seed=seed,
                                           workers=config.threads))
        curve = result.log.best_curve()
        assert all(b <= a for a, b in zip(curve, curve[1:]))
        assert result.best_makespan <= result.initial_best.fitness
        improved += result.best_makespan < result.initial_best.fitness
    assert improved >= 2


def test_full_factorial_sweep():
    instance = generate_instance(GeneratorSpec(activities=30, workgroups=5, groups=4, seed=42))
    started = time.perf_counter()
    result = run_sweep(instance, SweepSpec(time_limit_ms=2000), workers=config.threads)
    assert time.perf_counter() - started < 15 * 60
    assert len(result.rows) == 360
    assert not any(r.error for r in result.rows)
    best = best_settings(result)
    assert set(best["policy"]) == {"est", "west"}
    for policy, rows in best.groupby("policy"):
        frame = result.to_frame()
        assert rows["best_makespan_ticks"].iloc[0] == frame[frame["policy"] == policy]["best_makespan_ticks"].min()
