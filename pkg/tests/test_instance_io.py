import json
from dataclasses import replace
from fractions import Fraction
from os.path import join
from pathlib import Path

import pytest

from rcpsp_ga.errors import InstanceFormatError, InvalidInstanceError, PsplibFormatError
from rcpsp_ga.ga.announcer import ConvergenceLog, GenerationRecord
from rcpsp_ga.instance_io import (
    load_instance, parse_native, parse_psplib, serialize_native, write_convergence, write_resource_profile,
    write_schedule,
)
from rcpsp_ga.model import Instance, critical_path, validate_instance
from rcpsp_ga.schedule import EST, WEST, Schedule, serial_sgs
from tests.factories import random_instance


@pytest.fixture
def t1_text(data_dir):
    return Path(join(data_dir, "t1.json")).read_text(encoding="utf-8")


@pytest.fixture
def mini_text(data_dir):
    return Path(join(data_dir, "mini.sm")).read_text(encoding="utf-8")


def test_parse_native_t1(t1_text, t1):
    instance = parse_native(t1_text)
    assert len(instance.activities) == 4
    assert critical_path(instance).cp_length == 6
    assert instance == t1


def test_native_round_trip(t1):
    assert parse_native(serialize_native(t1)) == t1
    for seed in range(10):
        instance = random_instance(seed, n=8)
        assert parse_native(serialize_native(instance)) == instance


@pytest.mark.parametrize("scale", [Fraction(1, 3), Fraction(7, 2), Fraction(22, 7)])
def test_native_round_trip_keeps_rational_scale(t1, scale):
    instance = replace(t1, ticks_per_day=scale)
    text = serialize_native(instance)
    assert json.loads(text)["ticks_per_day"] == f"{scale.numerator}/{scale.denominator}"
    assert parse_native(text) == instance
    assert parse_native(text).ticks_per_day == scale


@pytest.mark.parametrize("scale", ["0/3", "1/0", "-1/3", "1.5/2"])
def test_bad_fraction_scale(t1_text, scale):
    doc = json.loads(t1_text)
    doc["ticks_per_day"] = scale
    with pytest.raises(InstanceFormatError):
        parse_native(json.dumps(doc))


def test_negative_duration_names_the_activity(t1_text):
    doc = json.loads(t1_text)
    doc["activities"][2]["duration"] = -1
    with pytest.raises(InstanceFormatError) as e:
        parse_native(json.dumps(doc))
    assert "activities[2].duration" in str(e.value)
    assert "activity 3" in str(e.value)


def test_cycle_lists_its_members(data_dir):
    with pytest.raises(InvalidInstanceError) as e:
        load_instance(join(data_dir, "t1_cyclic.json"))
    cycles = e.value.report.of_kind("cycle")
    assert [v.ids for v in cycles] == [(1, 3, 4)]


def test_syntax_error_has_line_and_column():
    with pytest.raises(InstanceFormatError, match="line 2 column"):
        parse_native('{\n  "name": }')


def test_unknown_fields_are_rejected(t1_text):
    doc = json.loads(t1_text)
    doc["activities"][0]["priority"] = 3
    with pytest.raises(InstanceFormatError, match="activity 1"):
        parse_native(json.dumps(doc))


def test_unknown_group_is_semantic(t1_text):
    doc = json.loads(t1_text)
    doc["activities"][1]["demands"] = {"5": 1}
    with pytest.raises(InvalidInstanceError) as e:
        parse_native(json.dumps(doc))
    assert e.value.report.of_kind("unknown-group")[0].ids == (2, 5)


def test_parse_psplib(mini_text):
    instance = parse_psplib(mini_text, "mini")
    assert len(instance.activities) == 6
    assert [a.id for a in instance.activities if a.duration == 0] == [1, 6]
    assert instance.activity(1).demands == {}
    assert [(g.id, g.name, g.capacity) for g in instance.groups] == [(1, "R1", 4)]
    assert {a.workgroup for a in instance.activities} == {"default"}
    assert instance.precedence == {(1, 2), (1, 3), (2, 4), (3, 4), (3, 5), (4, 6), (5, 6)}
    assert validate_instance(instance) == []
    assert critical_path(instance).cp_length == 7


def test_psplib_truncated(mini_text):
    truncated = mini_text[:mini_text.index("  5      1     1       1")]
    with pytest.raises(PsplibFormatError) as e:
        parse_psplib(truncated)
    assert e.value.kind == "count-mismatch"


def test_psplib_non_numeric(mini_text):
    broken = mini_text.replace("  2      1     3       2", "  2      1     x       2")
    with pytest.raises(PsplibFormatError) as e:
        parse_psplib(broken)
    assert e.value.kind == "non-numeric"
    assert e.value.line == 30


def test_psplib_missing_section(mini_text):
    with pytest.raises(PsplibFormatError) as e:
        parse_psplib(mini_text.replace("PRECEDENCE RELATIONS:", "PRECEDENCES:"))
    assert e.value.kind == "missing-section"


def test_psplib_successor_count(mini_text):
    with pytest.raises(PsplibFormatError) as e:
        parse_psplib(mini_text.replace("   3        1          2           4   5", "   3        1          3           4   5"))
    assert (e.value.kind, e.value.line) == ("count-mismatch", 21)


def test_load_instance_by_suffix(data_dir):
    assert load_instance(join(data_dir, "mini.sm")).name == "mini"
    assert load_instance(join(data_dir, "t1.json")).name == "t1"


def test_schedule_golden(t1, data_dir):
    expected = Path(join(data_dir, "t1_est_schedule.csv")).read_text(encoding="utf-8")
    assert write_schedule(serial_sgs(t1, [1, 2, 3, 4], EST)) == expected


def test_t2_policies_differ_in_one_unit(t2):
    est = write_schedule(serial_sgs(t2, [1, 2, 3], EST)).splitlines()
    west = write_schedule(serial_sgs(t2, [1, 2, 3], WEST)).splitlines()
    assert len(est) == len(west) == 4
    differ = [(a, b) for a, b in zip(est, west) if a != b]
    assert differ == [("3,W-A,2,4,1,1", "3,W-A,2,4,1,2")]


def test_empty_schedule_is_header_only():
    schedule = Schedule(instance=Instance(activities=[]), policy=EST, order=(), starts={}, assignments={})
    assert write_schedule(schedule) == "activity_id,workgroup,start_tick,finish_tick,group_id,unit_id\n"


def test_resource_profile(t1):
    text = write_resource_profile(serial_sgs(t1, [1, 2, 3, 4]))
    assert text == "group_id,tick,units_in_use\n1,0,2\n1,2,1\n1,3,2\n1,5,1\n1,6,0\n"


def test_convergence_csv():
    log = ConvergenceLog(ticks_per_day=8)
    for record in (GenerationRecord(1, 44, 46.5), GenerationRecord(2, 40, 43.0), GenerationRecord(3, 40, 41.25)):
        log.append(record)
    lines = write_convergence(log).splitlines()
    assert lines[0] == "generation,best_makespan_ticks,best_makespan_days,mean_makespan_ticks,elapsed_ms"
    assert lines[1:] == ["1,44,5.500000,46.500000,", "2,40,5.000000,43.000000,", "3,40,5.000000,41.250000,"]


def test_convergence_csv_with_timing():
    log = ConvergenceLog()
    log.append(GenerationRecord(1, 7, 7.0, 12))
    assert write_convergence(log).splitlines()[1] == "1,7,7.000000,7.000000,12"


if __name__ == '__main__':
    pytest.main()
