"""
    Parent selection: elitism keeps the best members unchanged, the roulette wheel draws
    parents with probability proportional to the reciprocal of their makespan

        R_h = 1 / F_h            P_h = R_h / sum(R)
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from rcpsp_ga.errors import DegenerateInstanceError, OperatorError


def reciprocal_fitness(makespan) -> Fraction:
    if makespan <= 0:
        raise DegenerateInstanceError("degenerate zero-makespan instance")
    return Fraction(1, int(makespan))


def selection_probabilities(fitnesses) -> list:
    reciprocals = [reciprocal_fitness(f) for f in fitnesses]
    total = sum(reciprocals)
    # exact rationals until the last step, the floats then sum to 1 within rounding
    return [float(r / total) for r in reciprocals]


def roulette_index(probabilities, draw) -> int:
    """0-based index whose cumulative probability interval contains the uniform draw."""
    cumulative = np.cumsum(probabilities)
    index = int(np.searchsorted(cumulative, draw, side="right"))
    return min(index, len(probabilities) - 1)


def roulette_select(population, rng):
    """One parent activity list, drawn with a single uniform number."""
    member = population.members[roulette_index(population.probabilities, rng.random())]
    return member.activity_list


def elite(population, k) -> list:
    """The k lowest-makespan members, earlier population index first on ties."""
    if not 0 <= k < len(population.members):
        raise OperatorError(f"elite count {k} must be below the population size {len(population.members)}")
    ranked = sorted(range(len(population.members)), key=lambda i: (population.members[i].fitness, i))
    return [population.members[i] for i in ranked[:k]]
