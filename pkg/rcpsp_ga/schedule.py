"""
    Serial schedule generation: decode an activity list into start ticks under precedence
    and capacity constraints, then label the concrete resource units with one of two
    allocation policies

        EST   among the free units of a group take the lowest unit ids
        WEST  first the free units whose most recent assignment was in the workgroup of the
              activity being placed, then the other free units, lowest ids first in each class

    Start ticks depend on free-unit counts only, units of a group being interchangeable,
    so both policies give identical start ticks and makespans; the unit labelling runs
    afterwards in chronological order.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping

import numpy as np

from rcpsp_ga.errors import InfeasibleListError
from rcpsp_ga.model import Instance, ensure_valid

logger = logging.getLogger(__name__)

EST = "est"
WEST = "west"
POLICIES = (EST, WEST)


@dataclass(frozen=True)
class Schedule:
    instance: Instance
    policy: str
    order: tuple
    starts: Mapping[int, int]
    # activity id -> group id -> assigned unit ids (ascending)
    assignments: Mapping[int, Mapping[int, tuple]]

    def start(self, activity_id) -> int:
        return self.starts[activity_id]

    def finish(self, activity_id) -> int:
        return self.starts[activity_id] + self.instance.activity(activity_id).duration

    @property
    def makespan(self) -> int:
        return max((self.finish(a) for a in self.instance.ids), default=0)

    @cached_property
    def profile(self) -> np.ndarray:
        """Units in use, one row per group (instance order), one column per tick."""
        return usage_profile(self.instance, self.starts, self.makespan)


@dataclass(frozen=True)
class ScheduleMetrics:
    makespan: int
    makespan_days: Fraction
    peak_demand: int
    distinct_units: int
    unit_moves: int


def _genes(activity_list) -> tuple:
    return tuple(getattr(activity_list, "genes", activity_list))


def check_feasible_list(instance: Instance, genes) -> None:
    """Raise InfeasibleListError unless genes is a precedence-feasible permutation of the ids."""
    if len(genes) != len(instance.ids) or set(genes) != set(instance.ids):
        raise InfeasibleListError(f"activity list {list(genes)} is not a permutation of the activity ids")
    position = {a: i for i, a in enumerate(genes)}
    for p, s in instance.precedence:
        if position[p] > position[s]:
            raise InfeasibleListError(f"activity {s} is listed before its predecessor {p}; repair the list first")


def usage_profile(instance: Instance, starts, horizon) -> np.ndarray:
    diff = np.zeros((len(instance.groups), horizon + 1), dtype=np.int64)
    matrix = instance.demand_matrix
    for a in instance.ids:
        row = instance.index[a]
        d = instance.activity(a).duration
        if d == 0:
            continue
        diff[:, starts[a]] += matrix[row]
        diff[:, starts[a] + d] -= matrix[row]
    return np.cumsum(diff, axis=1)[:, :horizon]


def decode_starts(instance: Instance, activity_list) -> dict:
    """Start tick of every activity under the serial scheme (no unit labelling)."""
    ensure_valid(instance)
    genes = _genes(activity_list)
    check_feasible_list(instance, genes)

    matrix = instance.demand_matrix
    capacities = instance.capacities
    horizon = int(instance.durations.sum()) + 1
    usage = np.zeros((len(instance.groups), horizon), dtype=np.int64)
    starts, finish = {}, {}
    for a in genes:
        row = instance.index[a]
        d = instance.activity(a).duration
        est = max((finish[p] for p in instance.predecessors[a]), default=0)
        demanded = np.flatnonzero(matrix[row])
        if d == 0 or demanded.size == 0:
            start = est
        else:
            need = matrix[row, demanded][:, None]
            ok = ((capacities[demanded, None] - usage[demanded, est:]) >= need).all(axis=0)
            # bad ticks inside each window [t, t+d), first empty window wins
            bad = np.concatenate(([0], np.cumsum(~ok)))
            window = bad[d:] - bad[:-d]
            start = est + int(np.flatnonzero(window == 0)[0])
            usage[demanded, start:start + d] += need
        starts[a] = start
        finish[a] = start + d
    return starts


def _assign_units(instance: Instance, genes, starts, policy) -> dict:
    position = {a: i for i, a in enumerate(genes)}
    busy_until = {g.id: {u: 0 for u in g.unit_ids} for g in instance.groups}
    last_finish = {g.id: {u: -1 for u in g.unit_ids} for g in instance.groups}
    last_workgroup = {g.id: {u: None for u in g.unit_ids} for g in instance.groups}

    assignments = {a: {} for a in genes}
    for a in sorted(genes, key=lambda x: (starts[x], position[x])):
        activity = instance.activity(a)
        s, f = starts[a], starts[a] + activity.duration
        for gid, need in activity.demands.items():
            units = busy_until[gid]
            free = [u for u in units if units[u] <= s]
            if activity.duration == 0 and len(free) < need:
                # a zero-length activity holds nothing, any unit may label it
                free += [u for u in units if units[u] > s]
            if policy == WEST:
                free.sort(key=lambda u: (last_workgroup[gid][u] != activity.workgroup, u))
            chosen = sorted(free[:need])
            if len(chosen) < need:
                raise AssertionError(f"no {need} free units of group {gid} at tick {s} for activity {a}")
            for u in chosen:
                units[u] = max(units[u], f)
                if f >= last_finish[gid][u]:
                    last_finish[gid][u] = f
                    last_workgroup[gid][u] = activity.workgroup
            assignments[a][gid] = tuple(chosen)
    return assignments


def serial_sgs(instance: Instance, activity_list, policy=EST) -> Schedule:
    if policy not in POLICIES:
        raise ValueError(f"unknown allocation policy '{policy}', expected one of {POLICIES}")
    genes = _genes(activity_list)
    starts = decode_starts(instance, genes)
    assignments = _assign_units(instance, genes, starts, policy)
    return Schedule(instance=instance, policy=policy, order=genes, starts=starts, assignments=assignments)


def fitness(instance: Instance, activity_list, policy=EST) -> int:
    """Makespan in ticks; lower is fitter. The policy does not change start ticks."""
    if policy not in POLICIES:
        raise ValueError(f"unknown allocation policy '{policy}', expected one of {POLICIES}")
    starts = decode_starts(instance, activity_list)
    return max(s + instance.activity(a).duration for a, s in starts.items())


def unit_timelines(schedule: Schedule) -> dict:
    """(group id, unit id) -> [(start, finish, activity id)] in chronological order."""
    timelines = {}
    for a, groups in schedule.assignments.items():
        for gid, units in groups.items():
            for u in units:
                timelines.setdefault((gid, u), []).append((schedule.start(a), schedule.finish(a), a))
    for timeline in timelines.values():
        timeline.sort()
    return timelines


def metrics(schedule: Schedule) -> ScheduleMetrics:
    instance = schedule.instance
    profile = schedule.profile
    peak = int(profile.sum(axis=0).max()) if profile.size else 0
    timelines = unit_timelines(schedule)
    moves = 0
    for timeline in timelines.values():
        workgroups = [instance.activity(a).workgroup for _, _, a in timeline]
        moves += sum(1 for x, y in zip(workgroups, workgroups[1:]) if x != y)
    return ScheduleMetrics(
        makespan=schedule.makespan,
        makespan_days=instance.days(schedule.makespan),
        peak_demand=peak,
        distinct_units=len(timelines),
        unit_moves=moves,
    )


def check_schedule(schedule: Schedule) -> list:
    """Replay the schedule and list every broken invariant; empty when the schedule is valid."""
    instance = schedule.instance
    problems = []
    for p, s in sorted(instance.precedence):
        if schedule.start(s) < schedule.finish(p):
            problems.append(f"activity {s} starts at {schedule.start(s)} before predecessor {p} finishes at {schedule.finish(p)}")
    for a in instance.ids:
        demands = instance.activity(a).demands
        held = schedule.assignments.get(a, {})
        for gid in set(demands) | set(held):
            units = held.get(gid, ())
            if len(units) != demands.get(gid, 0):
                problems.append(f"activity {a} holds {len(units)} units of group {gid}, demands {demands.get(gid, 0)}")
            if len(set(units)) != len(units):
                problems.append(f"activity {a} holds a unit of group {gid} twice")
            capacity = instance.group_by_id[gid].capacity
            for u in units:
                if not 1 <= u <= capacity:
                    problems.append(f"activity {a} holds unit {u} outside group {gid} (capacity {capacity})")
    for (gid, u), timeline in unit_timelines(schedule).items():
        busy = [(s, f, a) for s, f, a in timeline if f > s]
        for (s1, f1, a1), (s2, f2, a2) in zip(busy, busy[1:]):
            if s2 < f1:
                problems.append(f"unit {u} of group {gid} is assigned to activities {a1} and {a2} at tick {s2}")
    profile = schedule.profile
    for i, group in enumerate(instance.groups):
        if profile.size and profile[i].max() > group.capacity:
            problems.append(f"group {group.id} exceeds capacity {group.capacity}")
    return problems
