"""
    Command-line front end

        rcpsp-ga validate  --input FILE
        rcpsp-ga solve     --input FILE --out-dir DIR [GA flags]
        rcpsp-ga oracle    --input FILE
        rcpsp-ga sweep     --input FILE --out-dir DIR [--sweep-spec FILE]
        rcpsp-ga generate  [--gen-spec FILE] [--out-dir DIR]
        rcpsp-ga convert   --input FILE.sm [--out-dir DIR]

    Exit codes: 0 ok, 1 I/O, 2 invalid or unreadable instance, 3 configuration or usage,
    4 oracle size cap. Progress and diagnostics go to stderr, data to files or stdout.
"""
from __future__ import annotations

import dataclasses
import json
import logging
from pathlib import Path

import click

from rcpsp_ga.config import config
from rcpsp_ga.errors import ConfigError, InvalidInstanceError, OperatorError, OracleSizeError, RcpspError
from rcpsp_ga.experiment import GeneratorSpec, SweepSpec, best_settings, compare_plans, generate_instance, plan_row, run_sweep
from rcpsp_ga.ga.announcer import ConvergenceLog, format_progress
from rcpsp_ga.ga.engine import GAConfig, evolve
from rcpsp_ga.ga.operators import CROSSOVERS, MUTATIONS
from rcpsp_ga.instance_io import (
    FORMATS, NATIVE, load_instance, serialize_native, to_csv, write_convergence, write_resource_profile, write_schedule,
)
from rcpsp_ga.log_config import setup_logging
from rcpsp_ga.model import critical_path, lower_bound
from rcpsp_ga.oracle import brute_force_optimum
from rcpsp_ga.schedule import POLICIES, serial_sgs

logger = logging.getLogger(__name__)

EXIT_IO = 1
EXIT_INVALID = 2
EXIT_CONFIG = 3
EXIT_ORACLE_CAP = 4

# generations between two progress lines when the best does not move
PROGRESS_EVERY = 50


def _input_option(f):
    return click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False),
                        help="Instance file, native JSON or PSPLIB .sm")(f)


def _format_option(f):
    return click.option("--format", "fmt", type=click.Choice(FORMATS), default=None,
                        help="Instance format; guessed from the file suffix when omitted")(f)


def _out_dir_option(required=False, help="Directory for the written artifacts"):
    def decorate(f):
        return click.option("--out-dir", type=click.Path(file_okay=False), required=required, help=help)(f)
    return decorate


def _write(out_dir, name, text):
    path = Path(out_dir) / name
    path.write_text(text, encoding="utf-8")
    logger.info(f"wrote {path}")


class ProgressPrinter:
    """Listener printing a line whenever the best improves, and every PROGRESS_EVERY generations."""

    def __init__(self, ticks_per_day):
        self.ticks_per_day = ticks_per_day
        self.best = None

    def __call__(self, record):
        if self.best is None or record.best_makespan < self.best or record.generation % PROGRESS_EVERY == 0:
            click.echo(format_progress(record, self.ticks_per_day), err=True)
        self.best = record.best_makespan


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Genetic algorithm for resource-constrained project scheduling."""


@cli.command()
@_input_option
@_format_option
def validate(input_path, fmt):
    """Check an instance and list every violation."""
    try:
        instance = load_instance(input_path, fmt)
    except InvalidInstanceError as e:
        for v in e.report:
            click.echo(f"{v.kind}: {v.message}")
        raise click.exceptions.Exit(EXIT_INVALID)
    click.echo(f"valid: '{instance.name}', {len(instance.ids)} activities, {len(instance.precedence)} arcs, "
               f"{len(instance.groups)} resource groups, critical path {critical_path(instance).cp_length} ticks, "
               f"lower bound {lower_bound(instance)} ticks")


@cli.command()
@_input_option
@_format_option
@_out_dir_option()
@click.option("--policy", type=click.Choice(POLICIES), default=config.policy, show_default=True)
@click.option("--pop", "population_size", type=int, default=config.population_size, show_default=True,
              help="Population size Ps")
@click.option("--pc", "crossover_probability", type=float, default=config.crossover_probability,
              show_default=True, help="Crossover probability Pc")
@click.option("--pm", "mutation_probability", type=float, default=config.mutation_probability,
              show_default=True, help="Mutation probability Pm")
@click.option("--crossover", type=click.Choice(CROSSOVERS), default=config.crossover, show_default=True)
@click.option("--mutation", type=click.Choice(MUTATIONS), default=config.mutation, show_default=True)
@click.option("--elite", "elite_count", type=int, default=config.elite_count, show_default=True)
@click.option("--seed", type=int, default=config.seed, show_default=True)
@click.option("--time-limit-ms", type=int, default=config.time_limit_ms, help="Wall-clock limit per run")
@click.option("--max-generations", type=int, default=config.max_generations, show_default=True)
@click.option("--timing/--no-timing", default=False, show_default=True,
              help="Write wall-clock fields; artifacts are then no longer byte-identical across reruns")
def solve(input_path, fmt, out_dir, timing, **settings):
    """Run the GA and write schedule, convergence, comparison and summary files."""
    instance = load_instance(input_path, fmt)
    ga_config = GAConfig(workers=config.threads, **settings).validate()
    out_dir = Path(out_dir or ".")
    out_dir.mkdir(parents=True, exist_ok=True)

    log = ConvergenceLog(instance.ticks_per_day)
    log.listen(ProgressPrinter(instance.ticks_per_day))
    result = evolve(instance, ga_config, log_sink=log, timing=timing)

    baseline = serial_sgs(instance, result.initial_best.activity_list, ga_config.policy)
    comparison = compare_plans([plan_row(f"rule {result.initial_best.origin}", baseline),
                                plan_row("ga", result.best_schedule)])
    summary = {
        "instance": instance.name,
        "best_makespan_ticks": result.best_makespan,
        "best_makespan_days": float(result.best_makespan_days),
        "best_list": list(result.best_list),
        "lower_bound_ticks": lower_bound(instance),
        "initial_best_ticks": result.initial_best.fitness,
        "initial_best_rule": result.initial_best.origin,
        "generations": result.generations,
        "generation_of_best": result.generation_of_best,
        "evaluations": result.evaluations,
        "seed": ga_config.seed,
        "config": ga_config.as_dict(),
        "wall_ms": result.wall_ms if timing else None,
        "time_to_best_ms": result.time_to_best_ms if timing else None,
    }
    _write(out_dir, "schedule.csv", write_schedule(result.best_schedule))
    _write(out_dir, "resource_profile.csv", write_resource_profile(result.best_schedule))
    _write(out_dir, "convergence.csv", write_convergence(result.log))
    _write(out_dir, "comparison.csv", to_csv(comparison))
    _write(out_dir, "summary.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    click.echo(f"best makespan {result.best_makespan} ticks ({float(result.best_makespan_days):.3f} d)")


@cli.command()
@_input_option
@_format_option
@click.option("--policy", type=click.Choice(POLICIES), default=config.policy, show_default=True)
def oracle(input_path, fmt, policy):
    """Enumerate every feasible activity list and report the optimum."""
    instance = load_instance(input_path, fmt)
    result = brute_force_optimum(instance, policy)
    noun = "list" if result.feasible_lists == 1 else "lists"
    click.echo(f"optimum {result.optimal_makespan} ticks, {result.feasible_lists} feasible {noun}")
    click.echo(f"optimal list: {' '.join(str(a) for a in result.optimal_list)}")
    click.echo(f"lower bound: {result.lower_bound} ticks")


@cli.command()
@_input_option
@_format_option
@_out_dir_option(required=True)
@click.option("--sweep-spec", type=click.Path(dir_okay=False), help="JSON sweep levels; the full factorial default otherwise")
@click.option("--seed", type=int, default=None, help="Master seed, overrides the sweep spec")
@click.option("--time-limit-ms", type=int, default=None, help="Per-run wall-clock budget, overrides the sweep spec")
@click.option("--max-generations", type=int, default=None, help="Per-run generation cap; without --time-limit-ms it replaces the time budget")
def sweep(input_path, fmt, out_dir, sweep_spec, seed, time_limit_ms, max_generations):
    """Full-factorial parameter sweep; writes sweep.csv, best_settings.csv and per-run convergence."""
    instance = load_instance(input_path, fmt)
    spec = SweepSpec.from_json(Path(sweep_spec).read_text(encoding="utf-8")) if sweep_spec else SweepSpec()
    overrides = {k: v for k, v in (("master_seed", seed), ("time_limit_ms", time_limit_ms),
                                   ("max_generations", max_generations)) if v is not None}
    if max_generations is not None and time_limit_ms is None:
        overrides["time_limit_ms"] = None
    spec = dataclasses.replace(spec, **overrides).validate()
    result = run_sweep(instance, spec, out_dir=out_dir, workers=config.threads)
    failed = sum(1 for r in result.rows if r.error)
    click.echo(to_csv(best_settings(result)), nl=False)
    click.echo(f"{len(result.rows)} runs, {failed} failed", err=True)


@cli.command()
@click.option("--gen-spec", type=click.Path(dir_okay=False), help="JSON generator settings")
@click.option("--seed", type=int, default=None, help="Generator seed, overrides the generator spec")
@_out_dir_option(help="Write <name>.json here instead of stdout")
def generate(gen_spec, seed, out_dir):
    """Generate a synthetic instance in native JSON."""
    spec = GeneratorSpec.from_json(Path(gen_spec).read_text(encoding="utf-8")) if gen_spec else GeneratorSpec()
    if seed is not None:
        spec = dataclasses.replace(spec, seed=seed)
    instance = generate_instance(spec)
    _emit_native(instance, out_dir)


@cli.command()
@_input_option
@_format_option
@_out_dir_option(help="Write <name>.json here instead of stdout")
def convert(input_path, fmt, out_dir):
    """Convert a PSPLIB .sm file to native JSON."""
    if fmt == NATIVE:
        raise click.UsageError("convert reads PSPLIB input; --format native is not accepted")
    instance = load_instance(input_path, "psplib")
    _emit_native(instance, out_dir)


def _emit_native(instance, out_dir):
    text = serialize_native(instance)
    if out_dir is None:
        click.echo(text, nl=False)
        return
    Path(out_dir).mkdir(parents=True, exist_ok=True)
    _write(out_dir, f"{instance.name}.json", text)


def _fail(error, code) -> int:
    click.echo(f"rcpsp-ga: error: {error}", err=True)
    return code


def main(argv=None) -> int:
    try:
        setup_logging(config.log_level)
    except ConfigError as e:
        return _fail(e, EXIT_CONFIG)
    try:
        code = cli.main(args=argv, prog_name="rcpsp-ga", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.UsageError as e:
        e.show()
        return EXIT_CONFIG
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        return _fail("aborted", EXIT_IO)
    except OracleSizeError as e:
        return _fail(e, EXIT_ORACLE_CAP)
    except (ConfigError, OperatorError) as e:
        return _fail(e, EXIT_CONFIG)
    except RcpspError as e:
        return _fail(e, EXIT_INVALID)
    except OSError as e:
        return _fail(e, EXIT_IO)
    return code if isinstance(code, int) else 0
