import csv
import io
import json
import subprocess
import sys

import pytest

from fgmagic import cli


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ipr_table_row(capsys):
    code, out, _ = run(["ipr-table", "--L", "4", "--N", "2", "--alpha", "2"], capsys)
    assert code == 0
    (row,) = list(csv.DictReader(io.StringIO(out)))
    assert float(row["ipr_exact"]) == 0.3


def test_kitaev_vacuum_row(capsys):
    argv = "kitaev2d --ell 4 --t 1 --delta 0 --mu -1 --alpha 1 --samples 2000 --seed 1".split()
    code, out, _ = run(argv, capsys)
    assert code == 0
    (row,) = list(csv.DictReader(io.StringIO(out)))
    assert float(row["m_filtered_mean"]) == 0.0
    assert float(row["m_filtered_stderr"]) == 0.0
    assert row["seed"] == "1" and row["samples"] == "2000"


def test_validate_passes(capsys):
    code, out, _ = run(["validate", "--max-modes", "3", "--seed", "7"], capsys)
    assert code == 0
    assert "FAIL" not in out and out.count("PASS") >= 12


def test_seed_required(capsys):
    code, _, err = run(["random-sre", "--L", "4", "--alpha", "2"], capsys)
    assert code == 2
    assert "--seed" in err


def test_bad_values_are_usage_errors(capsys):
    assert run(["random-sre", "--L", "4", "--alpha", "2", "--seed", "1", "--samples", "0"], capsys)[0] == 2
    assert run(["fixed-n", "--L", "4", "--N", "5", "--alpha", "2", "--seed", "1"], capsys)[0] == 2
    assert run(["kitaev2d", "--ell", "4", "--alpha", "1", "--seed", "1"], capsys)[0] == 2
    assert run(["bogus"], capsys)[0] == 2


def test_output_identical_across_workers(tmp_path, capsys):
    paths = []
    for w in ("1", "3"):
        path = tmp_path / f"out{w}.csv"
        argv = ["random-sre", "--L", "4", "--L", "5", "--alpha", "1", "--alpha", "2", "--realizations", "2",
                "--samples", "300", "--seed", "11", "--workers", w, "--output", str(path)]
        assert run(argv, capsys)[0] == 0
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_fixed_n_json_columns(capsys):
    argv = ["fixed-n", "--L", "6", "--N", "0.5", "--alpha", "2", "--realizations", "2", "--samples", "200",
            "--seed", "3", "--format", "json"]
    code, out, _ = run(argv, capsys)
    assert code == 0
    (rec,) = json.loads(out)
    assert rec["N_or_blank"] == 3 and rec["model"] == "random_fixed_n"
    # C(6,3) * (3!3! / 6!) * (4!4! / 7!) = 4/35
    assert rec["ipr_exact"] == pytest.approx(4 / 35)
    assert rec["pre_annealed"] > 0


def test_numerical_failure_exit_code(monkeypatch, capsys):
    from fgmagic.errors import NumericalFailure

    def boom(*a, **k):
        raise NumericalFailure("bad pair", step=3, index=5, module="sampler", seed=42)

    monkeypatch.setattr(cli.models, "sweep_random", boom)
    code, _, err = run(["random-sre", "--L", "4", "--alpha", "2", "--seed", "1"], capsys)
    assert code == 1
    assert "module=sampler" in err and "seed=42" in err and "step=3" in err


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "fgmagic.cli", "ipr-table", "--L", "2", "--N", "1", "--alpha", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "2,1,2," in res.stdout
