import io
import json
import subprocess
import sys

import pytest

from tensorcat.cli import (EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, CliConfig, UsageError,
                           hard_caps, main)


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--format", "json")
    return code, json.loads(text)


def test_info_trivial_group():
    code, rep = run_json("info", "cyclic:1")
    assert code == EXIT_OK
    assert rep["order"] == 1 and rep["class"] == 0


def test_info_text():
    code, text = run("info", "dihedral:4")
    assert code == EXIT_OK and "order: 8" in text and "class: 2" in text


def test_square_dihedral():
    code, rep = run_json("square", "dihedral:4")
    assert code == EXIT_OK
    assert rep["tensor_order"] == 32 and rep["bogomolov"] == [] and rep["schur"] == [2]


def test_tensor_forms(tmp_path):
    code, rep = run_json("tensor", "cyclic:4", "cyclic:6")
    assert code == EXIT_OK and rep["tensor_order"] == 2
    code, rep = run_json("tensor", "dihedral:3")
    assert code == EXIT_OK and rep["tensor_order"] == 6
    code, rep = run_json("tensor", "dihedral:4", "--normal", "5", "3")
    assert code == EXIT_OK and rep["normal"] == [5, 3]
    f = tmp_path / "g.txt"
    f.write_text("presentation:gens: a; rels: a^5")
    code, rep = run_json("tensor", f"@{f}")
    assert code == EXIT_OK and rep["tensor_order"] == 5


def test_verify_b0_trivial_exits_zero():
    code, text = run("verify", "--suite", "b0-trivial", "--max-order", "8", "--format", "json",
                     "--threads", "1")
    assert code == EXIT_OK
    lines = text.strip().splitlines()
    summary = json.loads(lines[-1])
    assert summary["exit"] == 0 and summary["summary"][0]["fail"] == 0
    assert all("seconds" not in json.loads(l) for l in lines[:-1])


def test_verify_text_table():
    code, text = run("verify", "--suite", "metacyclic-M", "--max-order", "8")
    assert code == EXIT_OK and "metacyclic-M" in text


def test_exit_codes():
    assert run("info", "dihedral:")[0] == EXIT_USAGE
    assert run("frobnicate")[0] == EXIT_USAGE
    assert run("square", "cyclic:100")[0] == EXIT_BUDGET
    assert run("verify", "--max-order", "500")[0] == EXIT_USAGE
    assert run("square", "dihedral:4", "--max-cosets", "5")[0] == EXIT_BUDGET
    assert run("tensor", "dihedral:3", "--normal", "0", "99")[0] == EXIT_USAGE


def test_caps_parsing():
    assert hard_caps("")["max_order"] == 64
    assert hard_caps("max_order=128,square_cap=120")["square_cap"] == 120
    assert hard_caps('{"generator_cap": 20000}')["generator_cap"] == 20000
    with pytest.raises(UsageError):
        hard_caps("bogus=1")
    with pytest.raises(UsageError):
        hard_caps("max_order")
    caps = CliConfig("verify").caps(hard_caps(""))
    assert caps.max_order == 32


def test_corpus_listing():
    code, rep = run_json("corpus", "--max-order", "8")
    assert code == EXIT_OK and rep["count"] == 14


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "tensorcat", "info", "cyclic:6", "--format", "json"],
                         capture_output=True, text=True, timeout=300)
    assert res.returncode == 0 and json.loads(res.stdout)["order"] == 6


def test_failed_check_code_is_distinct():
    assert len({EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET}) == 4
