"""
    Chromosome encoding: an activity list is a permutation of the activity ids. Population
    members carry the makespan of their list and the rule or operator that produced them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from rcpsp_ga.ga.selection import selection_probabilities
from rcpsp_ga.model import Instance


@dataclass(frozen=True)
class ActivityList:
    genes: tuple
    # set by the dispatching rules and by repair, never by the raw operators
    feasible: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "genes", tuple(int(g) for g in self.genes))

    def __len__(self):
        return len(self.genes)

    def __iter__(self):
        return iter(self.genes)

    def __getitem__(self, item):
        return self.genes[item]

    def is_permutation_of(self, ids) -> bool:
        return len(self.genes) == len(ids) and set(self.genes) == set(ids)

    def is_feasible_for(self, instance: Instance) -> bool:
        if not self.is_permutation_of(instance.ids):
            return False
        position = {a: i for i, a in enumerate(self.genes)}
        return all(position[p] < position[s] for p, s in instance.precedence)


@dataclass(frozen=True)
class Member:
    activity_list: ActivityList
    fitness: int
    origin: str = "offspring"


@dataclass
class Population:
    members: list
    generation: int = 0

    def __len__(self):
        return len(self.members)

    @property
    def fitnesses(self) -> list:
        return [m.fitness for m in self.members]

    @cached_property
    def probabilities(self) -> list:
        return selection_probabilities(self.fitnesses)

    def best(self) -> Member:
        # earliest member wins ties
        return min(self.members, key=lambda m: m.fitness)

    def mean_fitness(self) -> float:
        return sum(self.fitnesses) / len(self.members)
