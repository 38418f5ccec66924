"""
    Genetic operators on activity lists. Gene positions are 1-based;
    PMX cut points are "after position k", k in 0..length.

    Crossover and mutation may break precedence feasibility, `repair` restores it.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import chain

from rcpsp_ga.errors import InfeasibleListError, OperatorError
from rcpsp_ga.ga.chromosome import ActivityList
from rcpsp_ga.model import Instance, ensure_valid

logger = logging.getLogger(__name__)

PMX = "pmx"
PBX = "pbx"
SWAP = "swap"
INSERT = "insert"
CROSSOVERS = (PMX, PBX)
MUTATIONS = (SWAP, INSERT)


def _genes(activity_list) -> tuple:
    return tuple(getattr(activity_list, "genes", activity_list))


def _check_permutation(genes, name="list"):
    if len(set(genes)) != len(genes):
        raise OperatorError(f"{name} {list(genes)} contains duplicate genes")


def _check_parents(p1, p2):
    _check_permutation(p1, "parent 1")
    _check_permutation(p2, "parent 2")
    if set(p1) != set(p2):
        raise OperatorError("parents are not permutations of the same activity ids")


def _check_position(position, length, name):
    if not 1 <= position <= length:
        raise OperatorError(f"{name} {position} is outside 1..{length}")


# ---------------------------------------------------------------------------------------------------- PMX

@dataclass(frozen=True)
class PmxTrace:
    # duplicated genes of proto-offspring 1 and 2, in position order
    duplicates: tuple
    # (gene received from parent 2, gene of parent 1) at each substring position where they differ
    mapping: tuple


def _check_cuts(length, cut1, cut2):
    if not 0 <= cut1 < cut2 <= length:
        raise OperatorError(f"cut points must satisfy 0 <= cut1 < cut2 <= {length}, got {cut1}, {cut2}")


def _pmx_child(keep, give, cut1, cut2):
    child = list(keep)
    received = give[cut1:cut2]
    child[cut1:cut2] = received
    mapping = dict(zip(received, keep[cut1:cut2]))
    for i in chain(range(cut1), range(cut2, len(keep))):
        gene = child[i]
        while gene in mapping:
            gene = mapping[gene]
        child[i] = gene
    return ActivityList(child)


def pmx(p1, p2, cut1, cut2):
    """Partially mapped crossover: exchange the substring between the cuts, legalise the rest by the mapping."""
    p1, p2 = _genes(p1), _genes(p2)
    _check_parents(p1, p2)
    _check_cuts(len(p1), cut1, cut2)
    return _pmx_child(p1, p2, cut1, cut2), _pmx_child(p2, p1, cut1, cut2)


def pmx_trace(p1, p2, cut1, cut2) -> PmxTrace:
    p1, p2 = _genes(p1), _genes(p2)
    _check_parents(p1, p2)
    _check_cuts(len(p1), cut1, cut2)
    outside = list(chain(range(cut1), range(cut2, len(p1))))
    sub1, sub2 = set(p1[cut1:cut2]), set(p2[cut1:cut2])
    duplicates = (tuple(p1[i] for i in outside if p1[i] in sub2),
                  tuple(p2[i] for i in outside if p2[i] in sub1))
    mapping = tuple((b, a) for a, b in zip(p1[cut1:cut2], p2[cut1:cut2]) if a != b)
    return PmxTrace(duplicates=duplicates, mapping=mapping)


# ---------------------------------------------------------------------------------------------------- PBX

def _pbx_child(keep, fill, positions):
    child = [None] * len(keep)
    for pos in positions:
        child[pos - 1] = keep[pos - 1]
    present = set(g for g in child if g is not None)
    donors = iter(g for g in fill if g not in present)
    return ActivityList(g if g is not None else next(donors) for g in child)


def pbx(p1, p2, positions):
    """Position-based crossover: keep one parent at the selected positions, fill the rest in the other parent's order."""
    p1, p2 = _genes(p1), _genes(p2)
    _check_parents(p1, p2)
    positions = sorted(set(positions))
    if not positions:
        raise OperatorError("position-based crossover needs at least one position")
    for pos in positions:
        _check_position(pos, len(p1), "position")
    return _pbx_child(p1, p2, positions), _pbx_child(p2, p1, positions)


# ---------------------------------------------------------------------------------------------------- mutation

def swap_mutate(activity_list, i, j) -> ActivityList:
    genes = list(_genes(activity_list))
    _check_position(i, len(genes), "index")
    _check_position(j, len(genes), "index")
    if i == j:
        raise OperatorError("swap needs two different positions")
    genes[i - 1], genes[j - 1] = genes[j - 1], genes[i - 1]
    return ActivityList(genes)


def insert_mutate(activity_list, from_, to) -> ActivityList:
    genes = list(_genes(activity_list))
    _check_position(from_, len(genes), "from")
    _check_position(to, len(genes), "to")
    if from_ == to:
        raise OperatorError("insert needs two different positions")
    gene = genes.pop(from_ - 1)
    genes.insert(to - 1, gene)
    return ActivityList(genes)


# ---------------------------------------------------------------------------------------------------- random drivers

def random_crossover(kind, p1, p2, rng):
    """Apply the crossover with uniformly drawn cuts (PMX) or a random position set (PBX)."""
    n = len(_genes(p1))
    if n < 2:
        return ActivityList(_genes(p1)), ActivityList(_genes(p2))
    if kind == PMX:
        cut1, cut2 = sorted(int(c) for c in rng.choice(n + 1, size=2, replace=False))
        return pmx(p1, p2, cut1, cut2)
    if kind == PBX:
        while True:
            mask = rng.random(n) < 0.5
            if 0 < mask.sum() < n:
                break
        return pbx(p1, p2, [i + 1 for i in range(n) if mask[i]])
    raise OperatorError(f"unknown crossover '{kind}', expected one of {CROSSOVERS}")


def random_mutation(kind, activity_list, rng) -> ActivityList:
    n = len(_genes(activity_list))
    if n < 2:
        return ActivityList(_genes(activity_list))
    i, j = (int(x) + 1 for x in rng.choice(n, size=2, replace=False))
    if kind == SWAP:
        return swap_mutate(activity_list, i, j)
    if kind == INSERT:
        return insert_mutate(activity_list, i, j)
    raise OperatorError(f"unknown mutation '{kind}', expected one of {MUTATIONS}")


# ---------------------------------------------------------------------------------------------------- repair

def repair(activity_list, instance: Instance) -> ActivityList:
    """
    Order-preserving greedy topological pass: each output position takes the earliest
    remaining gene of the input whose predecessors are all placed. Feasible lists come
    back unchanged.
    """
    ensure_valid(instance)
    genes = _genes(activity_list)
    if len(genes) != len(instance.ids) or set(genes) != set(instance.ids):
        raise InfeasibleListError(f"activity list {list(genes)} is not a permutation of the activity ids")

    missing = {a: len(instance.predecessors[a]) for a in genes}
    remaining = list(genes)
    placed = []
    while remaining:
        k = next(k for k, a in enumerate(remaining) if missing[a] == 0)
        a = remaining.pop(k)
        placed.append(a)
        for s in instance.successors[a]:
            missing[s] -= 1
    return ActivityList(placed, feasible=True)
