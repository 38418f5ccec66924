"""
    Experimental pipeline around the GA

        run_sweep          full-factorial parameter sweep, one GA run per cell and seed
        best_settings      per allocation policy, the runs reaching the minimum makespan, fastest first
        compare_plans      makespan and resource improvement of plans over a baseline plan
        generate_instance  synthetic project networks shaped like a heavy-maintenance check
"""
from __future__ import annotations

import itertools
import json
import logging
import math
import multiprocessing
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np
import pandas as pd
from jsonschema import validate
from jsonschema.exceptions import ValidationError

from rcpsp_ga.errors import ConfigError, RcpspError
from rcpsp_ga.ga.engine import GAConfig, evolve
from rcpsp_ga.instance_io import to_csv, write_convergence
from rcpsp_ga.model import Activity, Instance, ResourceGroup, ensure_valid, validate_instance
from rcpsp_ga.schedule import metrics
from rcpsp_ga.schema import generator_spec_schema, sweep_spec_schema
from rcpsp_ga.utils import get_process_metrics

logger = logging.getLogger(__name__)

WORKGROUP_NAMES = ("cockpit", "door", "galley", "interior", "lavatory")


def _load_json(text, schema, what) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{what}: line {e.lineno} column {e.colno}: {e.msg}")
    try:
        validate(doc, schema)
    except ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "document"
        raise ConfigError(f"{what}: {where}: {e.message}")
    return doc


# ---------------------------------------------------------------------------------------------------- sweep

@dataclass(frozen=True)
class SweepSpec:
    # 5x3x3x2x2 cells per policy, 360 runs over both policies
    population_sizes: tuple = (5, 10, 30, 60, 100)
    crossover_probabilities: tuple = (0.7, 0.8, 0.9)
    mutation_probabilities: tuple = (0.01, 0.05, 0.1)
    crossovers: tuple = ("pmx", "pbx")
    mutations: tuple = ("swap", "insert")
    policies: tuple = ("est", "west")
    time_limit_ms: int = 2000
    max_generations: int = None
    seeds_per_cell: int = 1
    master_seed: int = 0
    elite_count: int = 1

    def __post_init__(self):
        for f in fields(self):
            if isinstance(getattr(self, f.name), list):
                object.__setattr__(self, f.name, tuple(getattr(self, f.name)))

    @classmethod
    def from_json(cls, text) -> "SweepSpec":
        return cls(**_load_json(text, sweep_spec_schema, "sweep spec")).validate()

    def validate(self) -> "SweepSpec":
        levels = ("population_sizes", "crossover_probabilities", "mutation_probabilities",
                  "crossovers", "mutations", "policies")
        for name in levels:
            if not getattr(self, name):
                raise ConfigError(f"sweep level list '{name}' is empty")
        if self.time_limit_ms is None and self.max_generations is None:
            raise ConfigError("sweep needs a per-run time budget or a generation cap")
        if self.time_limit_ms is not None and self.time_limit_ms <= 0:
            raise ConfigError(f"per-run time budget must be positive, got {self.time_limit_ms} ms")
        if self.seeds_per_cell < 1:
            raise ConfigError(f"seeds per cell must be positive, got {self.seeds_per_cell}")
        for config in self.configs():
            config.validate()
        return self

    def cells(self) -> list:
        """Parameter tuples (policy, Ps, Pc, crossover, Pm, mutation) in a fixed order."""
        return list(itertools.product(self.policies, self.population_sizes, self.crossover_probabilities,
                                      self.crossovers, self.mutation_probabilities, self.mutations))

    def run_count(self) -> int:
        return len(self.cells()) * self.seeds_per_cell

    def sub_seed(self, cell_index, seed_index) -> int:
        sequence = np.random.SeedSequence([self.master_seed, cell_index, seed_index])
        return int(sequence.generate_state(1, dtype=np.uint64)[0])

    def configs(self) -> list:
        """GAConfig of every run, cell by cell, seeds innermost."""
        runs = []
        for cell_index, (policy, ps, pc, crossover, pm, mutation) in enumerate(self.cells()):
            for seed_index in range(self.seeds_per_cell):
                runs.append(GAConfig(
                    population_size=ps, crossover=crossover, crossover_probability=pc,
                    mutation=mutation, mutation_probability=pm, policy=policy,
                    elite_count=self.elite_count, max_generations=self.max_generations,
                    time_limit_ms=self.time_limit_ms, seed=self.sub_seed(cell_index, seed_index),
                ))
        return runs


@dataclass
class SweepRow:
    run: int
    policy: str
    population_size: int
    crossover_probability: float
    crossover: str
    mutation_probability: float
    mutation: str
    seed: int
    best_makespan_ticks: int = None
    best_makespan_days: float = None
    time_to_best_ms: int = None
    wall_ms: int = None
    generations: int = None
    evaluations: int = None
    distinct_units: int = None
    peak_demand: int = None
    unit_moves: int = None
    error: str = ""


@dataclass
class SweepResult:
    rows: list = field(default_factory=list)
    # run number -> convergence CSV text
    convergence: dict = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame([asdict(r) for r in self.rows], columns=[f.name for f in fields(SweepRow)])
        for column in ("best_makespan_ticks", "time_to_best_ms", "wall_ms", "generations", "evaluations",
                       "distinct_units", "peak_demand", "unit_moves"):
            frame[column] = frame[column].astype("Int64")
        frame["seed"] = frame["seed"].astype("uint64")
        return frame

    def to_csv(self) -> str:
        return to_csv(self.to_frame())


def run_cell(instance: Instance, run: int, config: GAConfig) -> tuple:
    """One sweep run; failures end up in the row, never in the caller."""
    row = SweepRow(run=run, policy=config.policy, population_size=config.population_size,
                   crossover_probability=config.crossover_probability, crossover=config.crossover,
                   mutation_probability=config.mutation_probability, mutation=config.mutation, seed=config.seed)
    convergence = None
    try:
        result = evolve(instance, config)
        m = metrics(result.best_schedule)
        row.best_makespan_ticks = result.best_makespan
        row.best_makespan_days = float(result.best_makespan_days)
        row.time_to_best_ms = result.time_to_best_ms
        row.wall_ms = result.wall_ms
        row.generations = result.generations
        row.evaluations = result.evaluations
        row.distinct_units = m.distinct_units
        row.peak_demand = m.peak_demand
        row.unit_moves = m.unit_moves
        convergence = write_convergence(result.log)
    except (RcpspError, ValueError) as e:
        logger.error(f"sweep run {run} failed: {e}")
        row.error = str(e)
    return row, convergence


_sweep_instance = None


def _init_sweep_worker(instance):
    global _sweep_instance
    _sweep_instance = instance


def _run_cell_in_worker(job):
    return run_cell(_sweep_instance, *job)


def run_sweep(instance: Instance, spec: SweepSpec, out_dir=None, workers=1) -> SweepResult:
    """Every cell x seed with its own sub-seed; rows come back in cell order whatever the workers do."""
    ensure_valid(instance)
    spec.validate()
    jobs = list(enumerate(spec.configs(), start=1))
    logger.info(f"sweep on '{instance.name}': {len(jobs)} runs, {workers} workers")
    if workers > 1:
        with multiprocessing.Pool(workers, initializer=_init_sweep_worker, initargs=(instance,)) as pool:
            outputs = pool.map(_run_cell_in_worker, jobs)
    else:
        outputs = []
        for run, config in jobs:
            outputs.append(run_cell(instance, run, config))
            logger.debug(f"sweep run {run}/{len(jobs)} done")

    result = SweepResult(rows=[row for row, _ in outputs],
                         convergence={row.run: csv for row, csv in outputs if csv is not None})
    if out_dir is not None:
        write_sweep(result, out_dir)
    logger.info(f"sweep finished, process {get_process_metrics()}")
    return result


def write_sweep(result: SweepResult, out_dir) -> None:
    out_dir = Path(out_dir)
    (out_dir / "convergence").mkdir(parents=True, exist_ok=True)
    (out_dir / "sweep.csv").write_text(result.to_csv(), encoding="utf-8")
    (out_dir / "best_settings.csv").write_text(to_csv(best_settings(result)), encoding="utf-8")
    for run, csv in result.convergence.items():
        (out_dir / "convergence" / f"run_{run:04d}.csv").write_text(csv, encoding="utf-8")


PARAMETER_COLUMNS = ["population_size", "crossover_probability", "crossover", "mutation_probability", "mutation", "seed"]


def best_settings(result) -> pd.DataFrame:
    """
    Per policy, the runs with the minimum makespan ordered by time-to-best; rank 1 is the
    best setting. Ties in time fall back to the parameter values, so the output does not
    depend on the row order of the input.
    """
    frame = result.to_frame() if isinstance(result, SweepResult) else result.copy()
    if "error" in frame:
        frame = frame[frame["error"].fillna("") == ""]
    frame = frame.dropna(subset=["best_makespan_ticks"])
    if frame.empty:
        return frame.assign(rank=pd.Series(dtype="int64"))
    parts = []
    for policy in sorted(frame["policy"].unique()):
        rows = frame[frame["policy"] == policy]
        rows = rows[rows["best_makespan_ticks"] == rows["best_makespan_ticks"].min()]
        order = ["time_to_best_ms"] + [c for c in PARAMETER_COLUMNS if c in rows]
        rows = rows.sort_values(order, kind="mergesort").reset_index(drop=True)
        parts.append(rows.assign(rank=range(1, len(rows) + 1)))
    return pd.concat(parts, ignore_index=True)


# ---------------------------------------------------------------------------------------------------- plan comparison

@dataclass(frozen=True)
class PlanRow:
    name: str
    makespan_days: float
    resource_units: int = None


def plan_row(name, schedule, resource_metric="distinct_units") -> PlanRow:
    m = metrics(schedule)
    return PlanRow(name=name, makespan_days=float(m.makespan_days), resource_units=getattr(m, resource_metric))


def compare_plans(rows, baseline=None) -> pd.DataFrame:
    """Improvement in percent of every plan over the baseline plan (the first one by default)."""
    rows = [r if isinstance(r, PlanRow) else PlanRow(**r) for r in rows]
    if len(rows) < 2:
        raise ValueError("comparison needs at least two plans")
    base = rows[0] if baseline is None else next((r for r in rows if r.name == baseline), None)
    if base is None:
        raise ValueError(f"baseline plan '{baseline}' not among the rows")
    if base.makespan_days == 0:
        raise ValueError(f"baseline plan '{base.name}' has makespan 0")

    def improvement(b, v):
        if b is None or v is None or b == 0:
            return None
        return (b - v) / b * 100.0

    return pd.DataFrame(
        [(r.name, r.makespan_days, r.resource_units,
          improvement(base.makespan_days, r.makespan_days),
          improvement(base.resource_units, r.resource_units)) for r in rows],
        columns=["plan", "makespan_days", "resource_units", "makespan_improvement_pct", "resource_improvement_pct"],
    )


# ---------------------------------------------------------------------------------------------------- generator

@dataclass(frozen=True)
class GeneratorSpec:
    activities: int = 317
    workgroups: int = 5
    groups: int = 12
    capacity_range: tuple = (2, 6)
    duration_range: tuple = (1, 16)
    demand_range: tuple = (1, 2)
    groups_per_activity: int = 2
    precedence_density: float = 0.05
    ticks_per_day: float = 8
    seed: int = 42
    name: str = None

    def __post_init__(self):
        for f in ("capacity_range", "duration_range", "demand_range"):
            object.__setattr__(self, f, tuple(getattr(self, f)))

    @classmethod
    def from_json(cls, text) -> "GeneratorSpec":
        return cls(**_load_json(text, generator_spec_schema, "generator spec")).validate()

    def validate(self) -> "GeneratorSpec":
        if self.activities < 1 or self.workgroups < 1 or self.groups < 1:
            raise ConfigError("activity, workgroup and group counts must be positive")
        for name in ("capacity_range", "duration_range", "demand_range"):
            lo, hi = getattr(self, name)
            if lo > hi or lo < 0:
                raise ConfigError(f"{name} {lo}..{hi} is not a valid range")
        if self.capacity_range[0] < 1:
            raise ConfigError("capacities must be at least 1")
        if self.demand_range[1] > self.capacity_range[0]:
            raise ConfigError(f"demand range {self.demand_range} exceeds capacity range {self.capacity_range}")
        if not 0 <= self.groups_per_activity <= self.groups:
            raise ConfigError(f"groups per activity must lie in 0..{self.groups}")
        if not 0.0 <= self.precedence_density <= 1.0:
            raise ConfigError(f"precedence density must lie in [0, 1], got {self.precedence_density}")
        if self.ticks_per_day <= 0:
            raise ConfigError("ticks per day must be positive")
        return self


def generate_instance(spec: GeneratorSpec) -> Instance:
    """
    Layered DAG: activities fill about sqrt(n) layers in id order, each activity past the
    first layer gets one predecessor from the previous layer plus each earlier activity
    with probability `precedence_density`. Workgroups go round-robin.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    n = spec.activities
    layers = max(1, round(math.sqrt(n)))
    layer_of = [i * layers // n for i in range(n)]
    members = {}
    for i, layer in enumerate(layer_of):
        members.setdefault(layer, []).append(i + 1)

    capacities = rng.integers(spec.capacity_range[0], spec.capacity_range[1] + 1, size=spec.groups)
    groups = [ResourceGroup(k + 1, f"RG{k + 1}", int(c)) for k, c in enumerate(capacities)]
    names = [WORKGROUP_NAMES[k] if k < len(WORKGROUP_NAMES) else f"workgroup-{k + 1}" for k in range(spec.workgroups)]

    activities = []
    for i in range(n):
        duration = int(rng.integers(spec.duration_range[0], spec.duration_range[1] + 1))
        chosen = rng.choice(spec.groups, size=spec.groups_per_activity, replace=False)
        demands = {int(g) + 1: int(rng.integers(spec.demand_range[0], spec.demand_range[1] + 1)) for g in sorted(chosen)}
        activities.append(Activity(i + 1, duration, demands, names[i % spec.workgroups]))

    arcs = set()
    for i, layer in enumerate(layer_of):
        if layer == 0:
            continue
        a = i + 1
        previous = members[layer - 1]
        arcs.add((previous[int(rng.integers(len(previous)))], a))
        earlier = [b for lay in range(layer) for b in members[lay]]
        picks = rng.random(len(earlier)) < spec.precedence_density
        arcs.update((b, a) for b, pick in zip(earlier, picks) if pick)

    name = spec.name or f"synthetic-{n}x{spec.workgroups}x{spec.groups}-s{spec.seed}"
    instance = Instance(activities=activities, precedence=arcs, groups=groups,
                        ticks_per_day=spec.ticks_per_day, name=name)
    report = validate_instance(instance)
    if not report.is_valid:
        raise ConfigError(f"generated instance is invalid: {[v.message for v in report]}")
    logger.info(f"generated '{name}': {n} activities, {len(arcs)} arcs")
    return instance
