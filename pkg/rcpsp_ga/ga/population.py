"""
    Initial population from five dispatching rules. Each rule builds a feasible list by
    repeatedly taking one activity from the eligible set (all predecessors placed):

        SPT      shortest duration
        LPT      longest duration
        CP_SPT   longest tail (critical path to completion), then shortest duration
        CP_LPT   longest tail, then longest duration
        RANDOM   uniform over the eligible set

    Remaining ties go to the lowest activity id, or to a uniform draw when perturbed.
"""
from __future__ import annotations

import logging

from rcpsp_ga.ga.chromosome import ActivityList, Member, Population
from rcpsp_ga.ga.evaluation import FitnessEvaluator
from rcpsp_ga.model import Instance, critical_path, ensure_valid

logger = logging.getLogger(__name__)

SPT = "SPT"
LPT = "LPT"
CP_SPT = "CP_SPT"
CP_LPT = "CP_LPT"
RANDOM = "RANDOM"
RULES = (SPT, LPT, CP_SPT, CP_LPT, RANDOM)


def _priority(rule, instance, tails):
    duration = {a: instance.activity(a).duration for a in instance.ids}
    if rule == SPT:
        return lambda a: (duration[a],)
    if rule == LPT:
        return lambda a: (-duration[a],)
    if rule == CP_SPT:
        return lambda a: (-tails[a], duration[a])
    if rule == CP_LPT:
        return lambda a: (-tails[a], -duration[a])
    raise ValueError(f"unknown dispatching rule '{rule}', expected one of {RULES}")


def dispatch_list(instance: Instance, rule, rng=None, perturb=False) -> ActivityList:
    ensure_valid(instance)
    if (rule == RANDOM or perturb) and rng is None:
        raise ValueError(f"rule {rule} with perturb={perturb} needs a random generator")
    key = None
    if rule != RANDOM:
        tails = critical_path(instance).tails if rule in (CP_SPT, CP_LPT) else None
        key = _priority(rule, instance, tails)

    missing = {a: len(instance.predecessors[a]) for a in instance.ids}
    eligible = sorted(a for a, m in missing.items() if m == 0)
    placed = []
    while eligible:
        if key is None:
            chosen = eligible[int(rng.integers(len(eligible)))]
        else:
            best = min(key(a) for a in eligible)
            ties = [a for a in eligible if key(a) == best]
            if perturb and len(ties) > 1:
                chosen = ties[int(rng.integers(len(ties)))]
            else:
                chosen = ties[0]
        eligible.remove(chosen)
        placed.append(chosen)
        for s in instance.successors[chosen]:
            missing[s] -= 1
            if missing[s] == 0:
                eligible.append(s)
        eligible.sort()
    return ActivityList(placed, feasible=True)


def rule_allocation(population_size) -> list:
    """Rule of each member, round-robin in rule order."""
    return [RULES[i % len(RULES)] for i in range(population_size)]


def generate_initial_population(instance: Instance, config, rng, evaluate=None) -> Population:
    """
    Ps lists allotted round-robin over the rules; the first list of each deterministic rule
    is unperturbed, later copies break ties at random to diversify the duplicates.
    `evaluate` is a FitnessEvaluator, a fresh one for the configured policy by default.
    """
    if evaluate is None:
        evaluate = FitnessEvaluator(instance, config.policy)
    lists, origins = [], []
    seen_rules = set()
    for rule in rule_allocation(config.population_size):
        perturb = rule in seen_rules
        seen_rules.add(rule)
        lists.append(dispatch_list(instance, rule, rng, perturb=perturb))
        origins.append(rule)
    fitnesses = evaluate.evaluate_many(lists)
    members = [Member(al, f, origin) for al, f, origin in zip(lists, fitnesses, origins)]
    logger.debug(f"initial population: {[(m.origin, m.fitness) for m in members]}")
    return Population(members=members, generation=0)
