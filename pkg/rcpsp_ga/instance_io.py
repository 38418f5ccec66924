"""
    Reading and writing instances and results

        native JSON     the full model, workgroups and tick scale included
        PSPLIB .sm      single-mode benchmark files; renewable resources only, one workgroup
        CSV             schedules, resource profiles and convergence logs

    CSV output is byte-deterministic: ASCII commas, LF line endings, '.' decimals.
"""
from __future__ import annotations

import json
import logging
import re
from fractions import Fraction
from pathlib import Path

import pandas as pd
from jsonschema import validate
from jsonschema.exceptions import ValidationError

from rcpsp_ga.errors import InstanceFormatError, InvalidInstanceError, PsplibFormatError
from rcpsp_ga.model import Activity, Instance, ResourceGroup, validate_instance
from rcpsp_ga.schema import native_instance_schema

logger = logging.getLogger(__name__)

NATIVE = "native"
PSPLIB = "psplib"
FORMATS = (NATIVE, PSPLIB)

SCHEDULE_COLUMNS = ["activity_id", "workgroup", "start_tick", "finish_tick", "group_id", "unit_id"]
CONVERGENCE_COLUMNS = ["generation", "best_makespan_ticks", "best_makespan_days", "mean_makespan_ticks", "elapsed_ms"]
PROFILE_COLUMNS = ["group_id", "tick", "units_in_use"]


def to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator="\n", float_format="%.6f")


def _checked(instance: Instance) -> Instance:
    report = validate_instance(instance)
    if not report.is_valid:
        raise InvalidInstanceError(report)
    return instance


# ---------------------------------------------------------------------------------------------------- native JSON

def _json_path(doc, path) -> str:
    where = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in path).lstrip(".") or "document"
    # name the activity when the problem sits inside one
    if len(path) >= 2 and path[0] == "activities" and isinstance(path[1], int):
        try:
            where += f" (activity {doc['activities'][path[1]]['id']})"
        except (KeyError, IndexError, TypeError):
            pass
    return where


def parse_native(text) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(e.msg, where=f"line {e.lineno} column {e.colno}")
    try:
        validate(doc, native_instance_schema)
    except ValidationError as e:
        logger.error(f"Validation error: {e.message}")
        raise InstanceFormatError(e.message, where=_json_path(doc, list(e.absolute_path)))

    groups = [ResourceGroup(g["id"], g["name"], g["capacity"]) for g in doc["groups"]]
    activities, arcs = [], set()
    for a in doc["activities"]:
        demands = {int(g): units for g, units in a["demands"].items()}
        activities.append(Activity(a["id"], a["duration"], demands, a["workgroup"]))
        arcs.update((a["id"], s) for s in a["successors"])
    instance = Instance(
        activities=activities,
        precedence=arcs,
        groups=groups,
        ticks_per_day=doc["ticks_per_day"],
        name=doc["name"],
    )
    return _checked(instance)


def serialize_native(instance: Instance) -> str:
    tpd = instance.ticks_per_day
    doc = {
        "name": instance.name,
        "ticks_per_day": tpd.numerator if tpd.denominator == 1 else f"{tpd.numerator}/{tpd.denominator}",
        "groups": [{"id": g.id, "name": g.name, "capacity": g.capacity} for g in instance.groups],
        "activities": [
            {
                "id": a.id,
                "duration": a.duration,
                "workgroup": a.workgroup,
                "demands": {str(g): units for g, units in a.demands.items()},
                "successors": list(instance.successors[a.id]),
            }
            for a in instance.activities
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------------------------------- PSPLIB

_SECTION_END = re.compile(r"^\s*\*{3,}")


def _int(token, line_no, what):
    try:
        return int(token)
    except ValueError:
        raise PsplibFormatError(f"{what} '{token}' is not an integer", "non-numeric", line_no)


def _header_value(lines, pattern, required=True, default=0):
    regex = re.compile(pattern, re.I)
    for i, line in enumerate(lines):
        m = regex.search(line)
        if m:
            return _int(m.group(1), i + 1, m.group(0).split(":")[0].strip())
    if required:
        raise PsplibFormatError(f"header matching '{pattern}' not found", "missing-section")
    return default


def _section(lines, title):
    """(header line number, [(line number, text)]) of the section body, separators and column titles skipped."""
    regex = re.compile(rf"^\s*{title}\s*:", re.I)
    for i, line in enumerate(lines):
        if regex.search(line):
            body = []
            for j in range(i + 1, len(lines)):
                text = lines[j].strip()
                if _SECTION_END.match(lines[j]):
                    break
                if not text or set(text) <= set("-") or re.match(r"^[A-Za-z]", text):
                    continue
                body.append((j + 1, text))
            return i + 1, body
    raise PsplibFormatError(f"section '{title}' not found", "missing-section")


def parse_psplib(text, name="psplib") -> Instance:
    lines = text.splitlines()
    jobs = _header_value(lines, r"jobs\s*\(incl\.\s*supersource/sink\s*\)\s*:\s*(\S+)")
    renewable = _header_value(lines, r"-\s*renewable\s*:\s*(\S+)")

    prec_line, prec_rows = _section(lines, r"PRECEDENCE\s+RELATIONS")
    if len(prec_rows) != jobs:
        raise PsplibFormatError(f"{jobs} jobs declared, {len(prec_rows)} precedence rows found",
                                "count-mismatch", prec_line)
    arcs = set()
    for line_no, row in prec_rows:
        values = [_int(t, line_no, "precedence field") for t in row.split()]
        if len(values) < 3 or len(values) != 3 + values[2]:
            raise PsplibFormatError(f"job row declares {values[2] if len(values) > 2 else '?'} successors, "
                                    f"lists {max(len(values) - 3, 0)}", "count-mismatch", line_no)
        arcs.update((values[0], s) for s in values[3:])

    req_line, req_rows = _section(lines, r"REQUESTS/DURATIONS")
    if len(req_rows) != jobs:
        raise PsplibFormatError(f"{jobs} jobs declared, {len(req_rows)} request rows found",
                                "count-mismatch", req_line)
    activities = []
    for line_no, row in req_rows:
        values = [_int(t, line_no, "request field") for t in row.split()]
        if len(values) < 3 + renewable:
            raise PsplibFormatError(f"request row has {len(values)} fields, expected {3 + renewable}",
                                    "count-mismatch", line_no)
        job, _, duration = values[:3]
        demands = {k + 1: units for k, units in enumerate(values[3:3 + renewable])}
        activities.append(Activity(job, duration, demands, "default"))

    avail_line, avail_rows = _section(lines, r"RESOURCEAVAILABILITIES")
    header = lines[avail_line] if avail_line < len(lines) else ""
    names = [f"{kind}{number}" for kind, number in re.findall(r"([RND])\s*(\d+)", header)]
    if not avail_rows:
        raise PsplibFormatError("no availability values", "count-mismatch", avail_line)
    line_no, row = avail_rows[0]
    capacities = [_int(t, line_no, "availability") for t in row.split()]
    if len(capacities) < renewable:
        raise PsplibFormatError(f"{renewable} renewable resources declared, {len(capacities)} availabilities found",
                                "count-mismatch", line_no)
    groups = [ResourceGroup(k + 1, names[k] if k < len(names) else f"R{k + 1}", capacities[k])
              for k in range(renewable)]

    logger.info(f"parsed PSPLIB '{name}': {jobs} jobs, {renewable} renewable resources")
    return _checked(Instance(activities=activities, precedence=arcs, groups=groups, ticks_per_day=1, name=name))


def load_instance(path, fmt=None) -> Instance:
    path = Path(path)
    if fmt is None:
        fmt = PSPLIB if path.suffix.lower() == ".sm" else NATIVE
    text = path.read_text(encoding="utf-8")
    if fmt == PSPLIB:
        return parse_psplib(text, name=path.stem)
    if fmt == NATIVE:
        return parse_native(text)
    raise ValueError(f"unknown instance format '{fmt}', expected one of {FORMATS}")


# ---------------------------------------------------------------------------------------------------- CSV output

def write_schedule(schedule) -> str:
    """One row per (activity, group, unit) assignment, by start tick then activity id."""
    instance = schedule.instance
    rows = []
    for a in instance.ids:
        activity = instance.activity(a)
        for gid, units in sorted(schedule.assignments.get(a, {}).items()):
            for u in units:
                rows.append((a, activity.workgroup, schedule.start(a), schedule.finish(a), gid, u))
    rows.sort(key=lambda r: (r[2], r[0], r[4], r[5]))
    return to_csv(pd.DataFrame(rows, columns=SCHEDULE_COLUMNS))


def write_resource_profile(schedule) -> str:
    """Units in use per group at every tick where the usage changes, ending at the makespan."""
    instance = schedule.instance
    profile = schedule.profile
    rows = []
    for i, group in enumerate(instance.groups):
        previous = None
        for t in range(profile.shape[1]):
            units = int(profile[i, t])
            if units != previous:
                rows.append((group.id, t, units))
                previous = units
        rows.append((group.id, schedule.makespan, 0))
    return to_csv(pd.DataFrame(rows, columns=PROFILE_COLUMNS))


def convergence_frame(log) -> pd.DataFrame:
    tpd = Fraction(log.ticks_per_day)
    frame = pd.DataFrame(
        [(r.generation, r.best_makespan, float(Fraction(r.best_makespan) / tpd), float(r.mean_makespan), r.elapsed_ms)
         for r in log.records],
        columns=CONVERGENCE_COLUMNS,
    )
    frame["elapsed_ms"] = frame["elapsed_ms"].astype("Int64")
    return frame


def write_convergence(log) -> str:
    return to_csv(convergence_frame(log))
