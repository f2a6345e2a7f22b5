import os
import subprocess
import sys

import pytest

from dorext.cli import run_command

from golden_cases import CASES, GOLDEN, ROOT, run_case


@pytest.fixture(autouse=True)
def in_root(monkeypatch):
    monkeypatch.chdir(ROOT)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_output(name, tmp_path):
    out = tmp_path / "out.txt"
    run_case(CASES[name], out)
    assert out.read_bytes() == (GOLDEN / f"{name}.txt").read_bytes()


def test_exit_codes():
    assert run_command(["check-extension", "fixtures/h_lambda.spec"]) == 0
    assert run_command(["check-dcv", "fixtures/h_lambda.spec"]) == 0
    assert run_command(["check-extension", "fixtures/h_corrupted.spec"]) == 1
    assert run_command(["to-iterated", "fixtures/subcase411.spec", "--max-degree", "2"]) == 0


def test_corrupted_report_names_constant_relation(capsys):
    run_command(["check-extension", "fixtures/h_corrupted.spec"])
    out = capsys.readouterr().out
    assert "coefficient of 1: fail" in out
    assert "associativity [B]: FAIL" in out


def test_to_iterated_emits_y1_first(capsys):
    run_command(["to-iterated", "fixtures/subcase411.spec", "--max-degree", "1"])
    out = capsys.readouterr().out
    assert "y1-then-y2:" in out and "relation: y2*y1 = y1^2 + y1*y2" in out


def test_spec_errors_exit_two(tmp_path, capsys):
    assert run_command(["check-extension", "missing.spec"]) == 2
    bad = tmp_path / "bad.spec"
    bad.write_text("field Q\nring R gens x1\nmap sigma11 x1 = x3\n")
    assert run_command(["check-extension", str(bad)]) == 2
    assert "x3" in capsys.readouterr().err


def test_unknown_flag_exit_two():
    assert run_command(["check-extension", "fixtures/h_lambda.spec", "--bogus"]) == 2
    assert run_command(["frobnicate"]) == 2


def test_cap_exit_three():
    argv = ["search-dcv", "fixtures/h_lambda.spec", "--degree", "2", "--pool", "0,1,2", "--cap", "5"]
    assert run_command(argv) == 3
    assert run_command(argv[:3] + ["--degree", "3", "--pool", "0,1"]) == 2
    assert run_command(argv[:3] + ["--degree", "1", "--pool", "0,a"]) == 2


def test_catalog_list_and_show(capsys):
    assert run_command(["catalog", "list"]) == 0
    assert "table1-row-4-odd" in capsys.readouterr().out
    assert run_command(["catalog", "show", "dcv-DtoE"]) == 0
    assert run_command(["catalog", "show", "nope"]) == 2


def test_catalog_inject_reports_mismatch():
    assert run_command(["catalog", "verify", "--inject", "H-corrupted"]) == 1


def test_module_entry_point():
    env = dict(os.environ)
    proc = subprocess.run(
        [sys.executable, "-m", "dorext", "catalog", "list"], cwd=ROOT, capture_output=True, text=True, env=env
    )
    assert proc.returncode == 0 and "H-f5" in proc.stdout
