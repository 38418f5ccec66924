"""
    Project network of the scheduling problem: activities with durations and per-group
    demands, resource groups of identical units and precedence arcs. Provides validation
    and the resource-free bounds used by the dispatching rules and as makespan lower bounds.

    Instances are immutable after construction and safe to share between readers; the
    derived lookup tables are computed once on first use.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Mapping

import networkx as nx
import numpy as np

from rcpsp_ga.errors import InvalidInstanceError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Activity:
    id: int
    duration: int
    demands: Mapping[int, int] = field(default_factory=dict)
    workgroup: str = "default"

    def __post_init__(self):
        # zero entries carry no information, dropping them keeps equality field-level
        demands = {int(g): int(u) for g, u in sorted(dict(self.demands).items()) if u != 0}
        object.__setattr__(self, "demands", demands)

    @property
    def total_demand(self) -> int:
        return sum(self.demands.values())


@dataclass(frozen=True)
class ResourceGroup:
    id: int
    name: str
    capacity: int

    @property
    def unit_ids(self) -> range:
        return range(1, self.capacity + 1)


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    ids: tuple = ()


class ValidationReport(list):
    """List of Violation, empty when the instance is valid."""

    @property
    def is_valid(self) -> bool:
        return len(self) == 0

    def of_kind(self, kind):
        return [v for v in self if v.kind == kind]


@dataclass(frozen=True)
class Instance:
    activities: tuple
    precedence: frozenset = frozenset()
    groups: tuple = ()
    ticks_per_day: Fraction = Fraction(1)
    name: str = "instance"

    def __post_init__(self):
        object.__setattr__(self, "activities", tuple(self.activities))
        object.__setattr__(self, "precedence", frozenset((int(p), int(s)) for p, s in self.precedence))
        object.__setattr__(self, "groups", tuple(self.groups))
        tpd = self.ticks_per_day
        # floats go through their repr, Fraction(0.1) would keep the binary expansion
        object.__setattr__(self, "ticks_per_day", Fraction(repr(tpd)) if isinstance(tpd, float) else Fraction(tpd))

    # --- lookups

    @cached_property
    def ids(self) -> tuple:
        return tuple(a.id for a in self.activities)

    @cached_property
    def by_id(self) -> dict:
        return {a.id: a for a in self.activities}

    def activity(self, activity_id) -> Activity:
        return self.by_id[activity_id]

    @cached_property
    def index(self) -> dict:
        """Row of each activity id in the array views."""
        return {a: i for i, a in enumerate(self.ids)}

    @cached_property
    def predecessors(self) -> dict:
        preds = {a: [] for a in self.ids}
        for p, s in sorted(self.precedence):
            if s in preds:
                preds[s].append(p)
        return {a: tuple(ps) for a, ps in preds.items()}

    @cached_property
    def successors(self) -> dict:
        succs = {a: [] for a in self.ids}
        for p, s in sorted(self.precedence):
            if p in succs:
                succs[p].append(s)
        return {a: tuple(ss) for a, ss in succs.items()}

    @cached_property
    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.ids)
        known = set(self.ids)
        g.add_edges_from((p, s) for p, s in self.precedence if p in known and s in known)
        return g

    @cached_property
    def group_index(self) -> dict:
        return {g.id: i for i, g in enumerate(self.groups)}

    @cached_property
    def group_by_id(self) -> dict:
        return {g.id: g for g in self.groups}

    @cached_property
    def capacities(self) -> np.ndarray:
        return np.array([g.capacity for g in self.groups], dtype=np.int64)

    @cached_property
    def durations(self) -> np.ndarray:
        return np.array([a.duration for a in self.activities], dtype=np.int64)

    @cached_property
    def demand_matrix(self) -> np.ndarray:
        """Units demanded, one row per activity (order of `ids`), one column per group."""
        matrix = np.zeros((len(self.activities), len(self.groups)), dtype=np.int64)
        for row, a in enumerate(self.activities):
            for g, units in a.demands.items():
                if g in self.group_index:
                    matrix[row, self.group_index[g]] = units
        return matrix

    @cached_property
    def validation_report(self) -> ValidationReport:
        return validate_instance(self)

    def days(self, ticks) -> Fraction:
        return Fraction(ticks) / self.ticks_per_day


@dataclass(frozen=True)
class CriticalPathInfo:
    cp_length: int
    tails: Mapping[int, int]


def validate_instance(instance: Instance) -> ValidationReport:
    """Check every model invariant; problems are reported, never raised."""
    report = ValidationReport()
    if not instance.activities:
        report.append(Violation("empty", "instance has no activities"))
    if instance.ticks_per_day <= 0:
        report.append(Violation("tick-scale", f"ticks_per_day must be positive, got {instance.ticks_per_day}"))

    seen = set()
    for a in instance.activities:
        if a.id in seen:
            report.append(Violation("duplicate-id", f"activity id {a.id} appears more than once", (a.id,)))
        seen.add(a.id)
        if a.id < 1:
            report.append(Violation("activity-id", f"activity id {a.id} is not positive", (a.id,)))
        if a.duration < 0:
            report.append(Violation("duration", f"activity {a.id} has negative duration {a.duration}", (a.id,)))

    group_ids = set()
    for g in instance.groups:
        if g.id in group_ids:
            report.append(Violation("duplicate-group", f"resource group id {g.id} appears more than once", (g.id,)))
        group_ids.add(g.id)
        if g.capacity < 1:
            report.append(Violation("capacity", f"resource group {g.id} has capacity {g.capacity} < 1", (g.id,)))

    for a in instance.activities:
        for gid, units in a.demands.items():
            group = instance.group_by_id.get(gid)
            if group is None:
                report.append(Violation("unknown-group", f"activity {a.id} demands unknown group {gid}", (a.id, gid)))
            elif units < 0:
                report.append(Violation("demand", f"activity {a.id} demands {units} units of group {gid}", (a.id, gid)))
            elif units > group.capacity:
                report.append(Violation(
                    "capacity-exceeded",
                    f"activity {a.id} demands {units} units of group {gid} with capacity {group.capacity}",
                    (a.id, gid)))

    for p, s in sorted(instance.precedence):
        missing = tuple(x for x in (p, s) if x not in seen)
        if missing:
            report.append(Violation("dangling-arc", f"arc {p}->{s} references unknown activity {missing}", (p, s)))

    # every non-trivial strongly connected component is one cycle violation
    for component in nx.strongly_connected_components(instance.graph):
        if len(component) > 1:
            members = tuple(sorted(component))
            report.append(Violation("cycle", f"precedence cycle through activities {list(members)}", members))
    for p, _ in nx.selfloop_edges(instance.graph):
        report.append(Violation("cycle", f"activity {p} precedes itself", (p,)))

    if report:
        logger.debug(f"instance '{instance.name}' has {len(report)} violations")
    return report


def ensure_valid(instance: Instance) -> Instance:
    report = instance.validation_report
    if not report.is_valid:
        raise InvalidInstanceError(report)
    return instance


def critical_path(instance: Instance) -> CriticalPathInfo:
    """Backward longest-path pass; tail(a) includes the duration of a itself."""
    ensure_valid(instance)
    tails = {}
    for a in reversed(list(nx.topological_sort(instance.graph))):
        succ_tail = max((tails[s] for s in instance.successors[a]), default=0)
        tails[a] = instance.activity(a).duration + succ_tail
    cp_length = max(tails.values())
    return CriticalPathInfo(cp_length=cp_length, tails={a: tails[a] for a in instance.ids})


def resource_lower_bound(instance: Instance) -> int:
    """Max over groups of the work content divided by capacity, rounded up."""
    ensure_valid(instance)
    if not instance.groups:
        return 0
    work = instance.durations @ instance.demand_matrix
    return int(max(math.ceil(int(w) / int(c)) for w, c in zip(work, instance.capacities)))


def lower_bound(instance: Instance) -> int:
    return max(critical_path(instance).cp_length, resource_lower_bound(instance))


def relax_capacities(instance: Instance) -> Instance:
    """Same network with every capacity raised above the total demand on its group."""
    totals = instance.demand_matrix.sum(axis=0) if instance.activities else np.zeros(len(instance.groups))
    groups = tuple(replace(g, capacity=int(totals[i]) + 1) for i, g in enumerate(instance.groups))
    return replace(instance, groups=groups, name=f"{instance.name}-relaxed")
