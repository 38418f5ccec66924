import json
from os.path import join

import pandas as pd
import pytest

from rcpsp_ga.cli import main
from rcpsp_ga.instance_io import parse_native, serialize_native
from tests.factories import chain_instance, independent_instance


@pytest.fixture
def t1_path(data_dir):
    return join(data_dir, "t1.json")


def write_instance(tmp_path, instance):
    path = tmp_path / f"{instance.name}.json"
    path.write_text(serialize_native(instance), encoding="utf-8")
    return str(path)


def test_validate_ok(t1_path, capsys):
    assert main(["validate", "--input", t1_path]) == 0
    out = capsys.readouterr().out
    assert out.startswith("valid: 't1', 4 activities")
    assert "critical path 6 ticks" in out


def test_validate_lists_cycles(data_dir, capsys):
    assert main(["validate", "--input", join(data_dir, "t1_cyclic.json")]) == 2
    assert "cycle: precedence cycle through activities [1, 3, 4]" in capsys.readouterr().out


def test_solve_writes_artifacts(t1_path, tmp_path, capsys):
    assert main(["solve", "--input", t1_path, "--out-dir", str(tmp_path), "--max-generations", "20"]) == 0
    summary = json.loads((tmp_path / "summary.json").read_text(encoding="utf-8"))
    assert summary["best_makespan_ticks"] == 6
    assert summary["best_makespan_days"] == 0.75
    assert summary["config"]["population_size"] == 10
    assert summary["config"]["crossover"] == "pmx"
    assert summary["seed"] == 0
    assert summary["wall_ms"] is None
    assert 1 <= summary["evaluations"] <= 10 + 20 * 9
    schedule = pd.read_csv(tmp_path / "schedule.csv")
    assert len(schedule) == 5
    assert len(pd.read_csv(tmp_path / "convergence.csv")) == 20
    comparison = pd.read_csv(tmp_path / "comparison.csv")
    assert list(comparison["plan"])[1] == "ga"
    assert (tmp_path / "resource_profile.csv").exists()
    captured = capsys.readouterr()
    assert "best makespan 6 ticks" in captured.out
    assert "gen 1: best 6 ticks" in captured.err


def test_solve_is_byte_deterministic(data_dir, tmp_path):
    instance = join(data_dir, "mini.sm")
    for run in ("a", "b"):
        assert main(["solve", "--input", instance, "--out-dir", str(tmp_path / run), "--seed", "17",
                     "--max-generations", "15", "--crossover", "pbx", "--mutation", "insert"]) == 0
    for name in ("schedule.csv", "convergence.csv", "summary.json", "comparison.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_policies_give_equal_makespans(t1_path, tmp_path):
    makespans = []
    for policy in ("est", "west"):
        out = tmp_path / policy
        assert main(["solve", "--input", t1_path, "--out-dir", str(out), "--policy", policy, "--seed", "3",
                     "--max-generations", "10"]) == 0
        makespans.append(json.loads((out / "summary.json").read_text())["best_makespan_ticks"])
    assert makespans[0] == makespans[1]


def test_missing_file(tmp_path, capsys):
    assert main(["solve", "--input", str(tmp_path / "nope.json")]) == 1
    assert "error" in capsys.readouterr().err


def test_unknown_flag(t1_path):
    assert main(["solve", "--input", t1_path, "--generations", "3"]) == 3


@pytest.mark.parametrize("flags", [["--pop", "1"], ["--pc", "2"], ["--policy", "fifo"], ["--elite", "10"]])
def test_bad_settings(t1_path, tmp_path, flags):
    assert main(["solve", "--input", t1_path, "--out-dir", str(tmp_path)] + flags) == 3


def test_bad_thread_setting(t1_path, tmp_path, monkeypatch):
    monkeypatch.setenv("RCPSP_GA_THREADS", "zero")
    assert main(["solve", "--input", t1_path, "--out-dir", str(tmp_path)]) == 3


def test_oracle(t1_path, tmp_path, capsys):
    assert main(["oracle", "--input", t1_path]) == 0
    assert "optimum 6 ticks, 2 feasible lists" in capsys.readouterr().out
    assert main(["oracle", "--input", write_instance(tmp_path, chain_instance(3))]) == 0
    assert "1 feasible list\n" in capsys.readouterr().out


def test_oracle_long_chain(tmp_path, capsys):
    assert main(["oracle", "--input", write_instance(tmp_path, chain_instance(600))]) == 0
    assert "optimum 600 ticks, 1 feasible list\n" in capsys.readouterr().out


def test_oracle_size_cap(tmp_path, capsys):
    path = write_instance(tmp_path, independent_instance([1] * 12))
    assert main(["oracle", "--input", path]) == 4
    assert "exceed" in capsys.readouterr().err


def test_convert(data_dir, tmp_path, capsys):
    assert main(["convert", "--input", join(data_dir, "mini.sm")]) == 0
    instance = parse_native(capsys.readouterr().out)
    assert len(instance.activities) == 6
    assert main(["convert", "--input", join(data_dir, "mini.sm"), "--out-dir", str(tmp_path)]) == 0
    assert parse_native((tmp_path / "mini.json").read_text()) == instance
    assert main(["convert", "--input", join(data_dir, "mini.sm"), "--format", "native"]) == 3


def test_generate(tmp_path, capsys):
    spec = tmp_path / "gen.json"
    spec.write_text(json.dumps({"activities": 12, "groups": 3, "seed": 1}))
    assert main(["generate", "--gen-spec", str(spec)]) == 0
    instance = parse_native(capsys.readouterr().out)
    assert len(instance.activities) == 12
    assert main(["generate", "--gen-spec", str(spec), "--seed", "2", "--out-dir", str(tmp_path)]) == 0
    assert (tmp_path / "synthetic-12x5x3-s2.json").exists()


def test_generate_rejects_bad_spec(tmp_path):
    spec = tmp_path / "gen.json"
    spec.write_text(json.dumps({"capacity_range": [1, 2], "demand_range": [1, 2]}))
    assert main(["generate", "--gen-spec", str(spec)]) == 3


def test_sweep(t1_path, tmp_path, capsys):
    spec = tmp_path / "sweep.json"
    spec.write_text(json.dumps({
        "population_sizes": [4], "crossover_probabilities": [0.8], "mutation_probabilities": [0.1],
        "crossovers": ["pmx"], "mutations": ["swap"], "policies": ["est", "west"],
        "time_limit_ms": None, "max_generations": 3,
    }))
    out = tmp_path / "sweep"
    assert main(["sweep", "--input", t1_path, "--out-dir", str(out), "--sweep-spec", str(spec)]) == 0
    assert len(pd.read_csv(out / "sweep.csv")) == 2
    captured = capsys.readouterr()
    assert captured.out.startswith("run,policy")
    assert "2 runs, 0 failed" in captured.err


def test_help_lists_every_flag(capsys):
    assert main(["solve", "--help"]) == 0
    out = capsys.readouterr().out
    for flag in ("--input", "--out-dir", "--format", "--policy", "--pop", "--pc", "--pm", "--crossover",
                 "--mutation", "--elite", "--seed", "--time-limit-ms", "--max-generations", "--timing"):
        assert flag in out
    assert main(["sweep", "--help"]) == 0
    assert "--sweep-spec" in capsys.readouterr().out
    assert main(["generate", "--help"]) == 0
    assert "--gen-spec" in capsys.readouterr().out


if __name__ == '__main__':
    pytest.main()
