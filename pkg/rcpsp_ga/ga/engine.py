"""
    The evolution loop

        initial population from the dispatching rules
        repeat until the generation cap or wall-clock limit:
            carry over the elite
            draw parent pairs by roulette wheel, cross them with probability Pc
            mutate each offspring with probability Pm, repair, evaluate
            next population = elite + offspring, truncated to Ps
        return the best member ever seen and its schedule

    All random draws of a generation happen on this loop before the offspring are
    evaluated, so a seed fixes the whole run.
"""
from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from rcpsp_ga.config import config as defaults
from rcpsp_ga.errors import ConfigError, DegenerateInstanceError
from rcpsp_ga.ga.announcer import ConvergenceLog, GenerationRecord
from rcpsp_ga.ga.chromosome import Member, Population
from rcpsp_ga.ga.evaluation import FitnessEvaluator
from rcpsp_ga.ga.operators import CROSSOVERS, MUTATIONS, random_crossover, random_mutation, repair
from rcpsp_ga.ga.population import generate_initial_population
from rcpsp_ga.ga.selection import elite, roulette_select
from rcpsp_ga.model import Instance, ensure_valid
from rcpsp_ga.schedule import POLICIES, Schedule, serial_sgs
from rcpsp_ga.utils import elapsed_ms

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GAConfig:
    population_size: int = defaults.population_size
    crossover: str = defaults.crossover
    crossover_probability: float = defaults.crossover_probability
    mutation: str = defaults.mutation
    mutation_probability: float = defaults.mutation_probability
    policy: str = defaults.policy
    elite_count: int = defaults.elite_count
    max_generations: int = defaults.max_generations
    time_limit_ms: int = defaults.time_limit_ms
    seed: int = defaults.seed
    # evaluation processes; never changes results
    workers: int = field(default=1, compare=False)

    def validate(self) -> "GAConfig":
        if self.population_size < 2:
            raise ConfigError(f"population size must be at least 2, got {self.population_size}")
        if not 1 <= self.elite_count < self.population_size:
            raise ConfigError(f"elite count must be in 1..{self.population_size - 1}, got {self.elite_count}")
        if self.crossover not in CROSSOVERS:
            raise ConfigError(f"unknown crossover '{self.crossover}', expected one of {CROSSOVERS}")
        if self.mutation not in MUTATIONS:
            raise ConfigError(f"unknown mutation '{self.mutation}', expected one of {MUTATIONS}")
        if self.policy not in POLICIES:
            raise ConfigError(f"unknown allocation policy '{self.policy}', expected one of {POLICIES}")
        for name in ("crossover_probability", "mutation_probability"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {value}")
        if self.max_generations is None and self.time_limit_ms is None:
            raise ConfigError("set a generation cap, a wall-clock limit, or both")
        if self.max_generations is not None and self.max_generations < 1:
            raise ConfigError(f"max generations must be positive, got {self.max_generations}")
        if self.time_limit_ms is not None and self.time_limit_ms <= 0:
            raise ConfigError(f"time limit must be positive, got {self.time_limit_ms} ms")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        return self

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("workers")
        return d


@dataclass
class GAResult:
    best_list: object
    best_makespan: int
    best_makespan_days: Fraction
    best_schedule: Schedule
    generations: int
    wall_ms: int
    log: ConvergenceLog
    initial_best: Member
    generation_of_best: int
    time_to_best_ms: int
    evaluations: int  # schedules decoded, cache hits excluded


def crossover_gate(draw, probability) -> bool:
    return draw < probability


def mutation_gate(draw, probability) -> bool:
    return draw < probability


def breed(population: Population, instance: Instance, config: GAConfig, rng) -> list:
    """Two repaired offspring from one roulette-drawn parent pair."""
    p1 = roulette_select(population, rng)
    p2 = roulette_select(population, rng)
    if crossover_gate(rng.random(), config.crossover_probability):
        children = random_crossover(config.crossover, p1, p2, rng)
    else:
        children = (p1, p2)
    offspring = []
    for child in children:
        if mutation_gate(rng.random(), config.mutation_probability):
            child = random_mutation(config.mutation, child, rng)
        offspring.append(repair(child, instance))
    return offspring


def next_generation(population: Population, instance: Instance, config: GAConfig, rng, evaluate) -> Population:
    elites = elite(population, config.elite_count)
    need = config.population_size - len(elites)
    offspring = []
    while len(offspring) < need:
        offspring.extend(breed(population, instance, config, rng))
    offspring = offspring[:need]
    fitnesses = evaluate.evaluate_many(offspring)
    members = elites + [Member(al, f, "offspring") for al, f in zip(offspring, fitnesses)]
    return Population(members=members, generation=population.generation + 1)


def _should_stop(config: GAConfig, generation, started) -> bool:
    if config.max_generations is not None and generation >= config.max_generations:
        return True
    return config.time_limit_ms is not None and elapsed_ms(started) >= config.time_limit_ms


def evolve(instance: Instance, config: GAConfig, rng=None, log_sink=None, timing=True) -> GAResult:
    """Run the GA. With timing off the log carries no wall-clock values, keeping it reproducible."""
    config.validate()
    ensure_valid(instance)
    if int(instance.durations.sum()) == 0:
        raise DegenerateInstanceError("degenerate zero-makespan instance")
    rng = np.random.default_rng(config.seed) if rng is None else rng
    log = ConvergenceLog(instance.ticks_per_day) if log_sink is None else log_sink

    logger.info(f"GA start on '{instance.name}' ({len(instance.ids)} activities): {config.as_dict()}")
    started = time.perf_counter()
    with FitnessEvaluator(instance, config.policy, config.workers) as evaluate:
        population = generate_initial_population(instance, config, rng, evaluate)
        best = initial_best = population.best()
        log.initial_best = initial_best.fitness
        generation_of_best, time_to_best = 0, elapsed_ms(started)
        generation = 0
        while not _should_stop(config, generation, started):
            evaluate.new_generation()
            population = next_generation(population, instance, config, rng, evaluate)
            generation = population.generation
            current = population.best()
            if current.fitness < best.fitness:
                best = current
                generation_of_best, time_to_best = generation, elapsed_ms(started)
            log.append(GenerationRecord(
                generation=generation,
                best_makespan=best.fitness,
                mean_makespan=population.mean_fitness(),
                elapsed_ms=elapsed_ms(started) if timing else None,
            ))
        evaluations = evaluate.decodes

    wall = elapsed_ms(started)
    schedule = serial_sgs(instance, best.activity_list, config.policy)
    logger.info(f"GA done: best {best.fitness} ticks after {generation} generations, "
                f"initial best {initial_best.fitness} ({initial_best.origin}), {wall} ms")
    return GAResult(
        best_list=best.activity_list,
        best_makespan=best.fitness,
        best_makespan_days=instance.days(best.fitness),
        best_schedule=schedule,
        generations=generation,
        wall_ms=wall,
        log=log,
        initial_best=initial_best,
        generation_of_best=generation_of_best,
        time_to_best_ms=time_to_best,
        evaluations=evaluations,
    )
