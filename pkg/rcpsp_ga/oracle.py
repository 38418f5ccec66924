"""
    Exhaustive ground truth for small instances: every precedence-feasible activity list is
    decoded with the same serial scheme the GA uses, so the optimum found here is the best
    any GA run can reach on the instance.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass

from rcpsp_ga.config import config
from rcpsp_ga.errors import OracleSizeError
from rcpsp_ga.model import Instance, ensure_valid, lower_bound
from rcpsp_ga.schedule import EST, fitness
from rcpsp_ga.utils import elapsed_ms

logger = logging.getLogger(__name__)

# placed sets one counting layer may hold before giving up
MAX_COUNT_STATES = 1 << 21


@dataclass(frozen=True)
class OracleResult:
    optimal_makespan: int
    optimal_list: tuple
    feasible_lists: int
    elapsed_ms: int
    lower_bound: int


def _predecessor_masks(instance: Instance) -> list:
    bit = {a: i for i, a in enumerate(instance.ids)}
    masks = [0] * len(instance.ids)
    for p, s in instance.precedence:
        masks[bit[s]] |= 1 << bit[p]
    return masks


def count_feasible_lists(instance: Instance) -> int:
    """Number of precedence-feasible permutations, by dynamic programming over placed sets."""
    ensure_valid(instance)
    n = len(instance.ids)
    pred_masks = _predecessor_masks(instance)

    # one layer per list position: placed set -> number of prefixes reaching it
    layer = {0: 1}
    for _ in range(n):
        following = {}
        for placed, ways in layer.items():
            for v in range(n):
                if not placed >> v & 1 and pred_masks[v] & placed == pred_masks[v]:
                    key = placed | (1 << v)
                    following[key] = following.get(key, 0) + ways
        if len(following) > MAX_COUNT_STATES:
            raise OracleSizeError(f"instance with {n} activities is too large to count its activity lists")
        layer = following
    return sum(layer.values())


def enumerate_feasible_lists(instance: Instance, visitor, cap=None) -> int:
    """Visit every feasible list once, eligible activities in ascending id order; returns the count."""
    ensure_valid(instance)
    cap = config.oracle_cap if cap is None else cap
    total = count_feasible_lists(instance)
    if total > cap:
        raise OracleSizeError(f"{total} feasible activity lists exceed the visit cap of {cap}")

    missing = {a: len(instance.predecessors[a]) for a in instance.ids}
    prefix = []
    visits = 0

    def place(a):
        prefix.append(a)
        released = []
        for s in instance.successors[a]:
            missing[s] -= 1
            if missing[s] == 0:
                released.append(s)
        return released

    def retract():
        a = prefix.pop()
        for s in instance.successors[a]:
            missing[s] += 1

    # depth-first with an explicit stack of [eligible, next choice]; the stack depth is len(prefix) + 1
    stack = [[sorted(a for a, m in missing.items() if m == 0), 0]]
    while stack:
        frame = stack[-1]
        eligible, i = frame
        if not eligible:
            visits += 1
            if visits > cap:
                raise OracleSizeError(f"more than {cap} feasible activity lists")
            visitor(tuple(prefix))
        if i >= len(eligible):
            stack.pop()
            if prefix:
                retract()
            continue
        frame[1] = i + 1
        a = eligible[i]
        released = place(a)
        stack.append([sorted([e for e in eligible if e != a] + released), 0])
    return visits


def brute_force_optimum(instance: Instance, policy=EST, cap=None) -> OracleResult:
    started = time.perf_counter()
    best = {"makespan": None, "list": None}

    def visit(genes):
        makespan = fitness(instance, genes, policy)
        if best["makespan"] is None or makespan < best["makespan"]:
            best["makespan"], best["list"] = makespan, genes

    count = enumerate_feasible_lists(instance, visit, cap)
    result = OracleResult(
        optimal_makespan=best["makespan"],
        optimal_list=best["list"],
        feasible_lists=count,
        elapsed_ms=elapsed_ms(started),
        lower_bound=lower_bound(instance),
    )
    logger.info(f"oracle on '{instance.name}': optimum {result.optimal_makespan} over {count} lists")
    return result
