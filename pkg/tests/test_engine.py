import numpy as np
import pytest

from rcpsp_ga.errors import ConfigError, DegenerateInstanceError
from rcpsp_ga.ga.announcer import ConvergenceLog, GenerationRecord, format_progress
from rcpsp_ga.ga.chromosome import ActivityList, Member, Population
from rcpsp_ga.ga.engine import GAConfig, breed, crossover_gate, evolve, mutation_gate
from rcpsp_ga.model import critical_path
from rcpsp_ga.oracle import brute_force_optimum
from tests.factories import independent_instance, random_instance


class ScriptedRng:
    """Real generator for index draws, scripted values for `random()`."""

    def __init__(self, draws, seed=0):
        self.draws = list(draws)
        self.rng = np.random.default_rng(seed)

    def random(self, size=None):
        if size is not None:
            return self.rng.random(size)
        return self.draws.pop(0)

    def __getattr__(self, name):
        return getattr(self.rng, name)


def test_crossover_gate():
    assert not crossover_gate(0.95, 0.9)
    assert crossover_gate(0.3, 0.9)


def test_mutation_gate_per_offspring():
    assert [mutation_gate(d, 0.01) for d in (0.5, 0.004)] == [False, True]


def test_breed_follows_the_draws():
    instance = independent_instance([1, 2, 3, 4, 5])
    parent = ActivityList([1, 2, 3, 4, 5])
    pop = Population([Member(parent, 10), Member(ActivityList([5, 4, 3, 2, 1]), 1000)])
    config = GAConfig(crossover_probability=0.9, mutation_probability=0.01, mutation="swap")
    # both roulette draws pick member 1, crossover skipped, only the second child mutates
    rng = ScriptedRng([0.1, 0.2, 0.95, 0.5, 0.004])
    first, second = breed(pop, instance, config, rng)
    assert first.genes == parent.genes
    assert sorted(second.genes) == [1, 2, 3, 4, 5]
    assert sum(1 for x, y in zip(second.genes, parent.genes) if x != y) == 2
    assert rng.draws == []


def test_t1_reaches_six(t1):
    result = evolve(t1, GAConfig(max_generations=5, seed=3))
    assert result.best_makespan == 6
    assert result.best_makespan_days == 6 / 8
    assert result.best_schedule.makespan == 6
    assert result.generations == 5
    assert len(result.log) == 5


def test_evaluations_count_decoded_schedules(t1):
    config = GAConfig(population_size=6, elite_count=1, max_generations=7, seed=2)
    bound = config.population_size + 7 * (config.population_size - 1)
    for instance in (t1, random_instance(11, n=9)):
        result = evolve(instance, config)
        assert 1 <= result.evaluations <= bound
        assert evolve(instance, config).evaluations == result.evaluations


def test_run_is_monotone_and_beats_the_rules():
    instance = random_instance(21, n=14, groups=3, density=0.2)
    result = evolve(instance, GAConfig(population_size=12, max_generations=40, seed=8))
    curve = result.log.best_curve()
    assert all(b <= a for a, b in zip(curve, curve[1:]))
    assert result.best_makespan <= result.log.initial_best
    assert result.best_makespan <= result.initial_best.fitness
    assert result.best_makespan == min(curve + [result.initial_best.fitness])
    assert result.best_makespan >= critical_path(instance).cp_length
    assert 0 <= result.generation_of_best <= result.generations


def test_same_seed_same_run():
    instance = random_instance(22, n=12, density=0.25)
    config = GAConfig(population_size=10, max_generations=25, crossover="pbx", mutation="insert", seed=99)
    a = evolve(instance, config, timing=False)
    b = evolve(instance, config, timing=False)
    assert a.best_list == b.best_list
    assert a.log.records == b.log.records
    assert all(r.elapsed_ms is None for r in a.log)


def test_worker_count_does_not_change_results():
    instance = random_instance(23, n=10, density=0.25)
    single = evolve(instance, GAConfig(max_generations=10, seed=4), timing=False)
    pooled = evolve(instance, GAConfig(max_generations=10, seed=4, workers=2), timing=False)
    assert single.best_list == pooled.best_list
    assert single.log.records == pooled.log.records


def test_never_beats_the_oracle():
    for seed in range(5):
        instance = random_instance(seed, n=6, density=0.3)
        result = evolve(instance, GAConfig(max_generations=20, seed=seed, policy="west"))
        assert result.best_makespan >= brute_force_optimum(instance).optimal_makespan


def test_time_limit_stops_the_run(t1):
    result = evolve(t1, GAConfig(max_generations=None, time_limit_ms=50))
    assert result.generations >= 1
    assert result.wall_ms >= 50


@pytest.mark.parametrize("settings", [
    dict(population_size=1),
    dict(population_size=4, elite_count=4),
    dict(elite_count=0),
    dict(crossover="ox"),
    dict(mutation="scramble"),
    dict(policy="fifo"),
    dict(crossover_probability=1.5),
    dict(mutation_probability=-0.1),
    dict(max_generations=None, time_limit_ms=None),
    dict(max_generations=0),
    dict(seed=-1),
])
def test_config_validation(settings):
    with pytest.raises(ConfigError):
        GAConfig(**settings).validate()


def test_zero_durations_are_degenerate():
    with pytest.raises(DegenerateInstanceError):
        evolve(independent_instance([0, 0, 0]), GAConfig(max_generations=3))


def test_failing_listener_is_dropped(t1):
    seen = []
    log = ConvergenceLog(t1.ticks_per_day)

    def broken(record):
        raise RuntimeError("listener gone")

    log.listen(broken)
    log.listen(seen.append)
    result = evolve(t1, GAConfig(max_generations=4), log_sink=log)
    assert len(seen) == 4
    assert log.announcer.listeners == [seen.append]
    assert result.log is log


def test_format_progress():
    assert format_progress(GenerationRecord(3, 40, 42.5, 120), 8) == 'gen 3: best 40 ticks (5.000 d), mean 42.50, 120 ms'
    assert format_progress(GenerationRecord(1, 7, 7.0)) == 'gen 1: best 7 ticks (7.000 d), mean 7.00'


if __name__ == '__main__':
    pytest.main()
