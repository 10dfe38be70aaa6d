"""
Tests for the command-line front door
"""
import json
import os

import pytest

from app.cli import main

ROOT = os.path.dirname(os.path.abspath(__file__))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_trace_text(capsys):
    code, out, _ = run(capsys, "trace", "--poly", "x^31+x+1")
    assert code == 0
    assert "odd_degrees [31, 29, 24, 24, 16, 16, 16, 16, 0]\n" in out
    assert out.startswith("seed 0x80000003 x^31+x+1\n")


def test_trace_json(capsys):
    code, out, _ = run(capsys, "trace", "--poly", "0x7", "--json")
    assert code == 0
    assert json.loads(out)["odd_degrees"] == [2, 0]


def test_trace_of_zero_is_a_domain_error(capsys):
    code, out, err = run(capsys, "trace", "--poly", "0x0")
    assert code == 1
    assert out == ""
    assert err.startswith("error: zero polynomial")


def test_bad_polynomial_text(capsys):
    code, _, err = run(capsys, "trace", "--poly", "x^2+y")
    assert code == 1
    assert "error:" in err


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "search-f", "--n", "9..3")[0] == 2
    assert run(capsys, "search-f", "--n", "3..5", "--checkpoint", "x.ckpt")[0] == 2
    assert run(capsys, "search-f", "--n", "5", "--resume")[0] == 2


def test_log_level_is_validated(capsys):
    code, out, err = run(capsys, "--log-level", "foo", "count", "--degree", "6", "--stratum", "odd")
    assert code == 2
    assert out == ""
    assert "invalid choice" in err
    assert run(capsys, "--log-level", "debug", "count", "--degree", "6", "--stratum", "odd")[:2] == (0, "16\n")


@pytest.mark.parametrize("stratum,expected", [
    ("odd", "16\n"),
    ("all", "64\n"),
    ("quadrants", "p0=0 32\np0=1 32\np1=0 32\np1=1 32\n"),
])
def test_count(capsys, stratum, expected):
    code, out, _ = run(capsys, "count", "--degree", "6", "--stratum", stratum)
    assert code == 0
    assert out == expected


def test_search_f_csv(capsys):
    code, out, _ = run(capsys, "search-f", "--n", "3..6")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,value,witness_hex,convention,seeds_examined,wall_ms,published_value"
    rows = [line.split(",") for line in lines[1:]]
    assert [(r[0], r[1]) for r in rows] == [("3", "2"), ("4", "3"), ("5", "4"), ("6", "8")]
    assert all(r[5] == "" for r in rows)
    assert [r[4] for r in rows] == ["4", "8", "16", "32"]


def test_search_f_output_does_not_depend_on_workers(capsys):
    _, serial, _ = run(capsys, "search-f", "--n", "8..10", "--par", "1")
    _, parallel, _ = run(capsys, "search-f", "--n", "8..10", "--par", "2")
    assert serial == parallel


def test_search_f_json_matches_csv(capsys):
    _, text, _ = run(capsys, "search-f", "--n", "5..7")
    _, payload, _ = run(capsys, "search-f", "--n", "5..7", "--format", "json")
    rows = [line.split(",") for line in text.splitlines()[1:]]
    records = json.loads(payload)
    assert [(int(r[0]), int(r[1]), r[2]) for r in rows] == [(d["n"], d["value"], d["witness"]) for d in records]
    assert all("wall_time" not in d for d in records)


def test_search_f_timing(capsys):
    _, out, _ = run(capsys, "search-f", "--n", "4", "--timing")
    assert out.splitlines()[1].split(",")[5] != ""


def test_search_f_checkpoint(capsys, tmp_path):
    path = str(tmp_path / "f9.ckpt")
    _, first, _ = run(capsys, "search-f", "--n", "9", "--checkpoint", path)
    code, resumed, _ = run(capsys, "search-f", "--n", "9", "--checkpoint", path, "--resume")
    assert code == 0
    assert first == resumed


def test_search_g_census(capsys):
    code, out, _ = run(capsys, "search-g", "--n", "4..5", "--census")
    assert code == 0
    first, second = (json.loads(line) for line in out.splitlines())
    assert first["histogram"] == {"1": 2, "2": 1}
    assert first["witness_chain"] == ["0x15", "0x13"]
    assert second["chain_count"] == 6


def test_search_g_csv(capsys):
    _, out, _ = run(capsys, "search-g", "--n", "6..8")
    assert [line.split(",")[1] for line in out.splitlines()[1:]] == ["3", "3", "4"]


def test_families_c4(capsys):
    code, out, _ = run(capsys, "families", "--check", "c4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "family,n,predicted,observed,verdict"
    assert "T,32,17,9,fails" in lines
    assert "T,31,9,9,holds" in lines


def test_families_tables_text(capsys):
    code, out, _ = run(capsys, "families", "--check", "tables", "--format", "text")
    assert code == 0
    assert "mismatch" not in out
    assert "MPOW" in out


def test_matthews_single_seed(capsys):
    config = os.path.join(ROOT, "data", "matthews_ex1.cfg")
    code, out, _ = run(capsys, "matthews", "--config", config, "--max-degree", "2", "--steps", "100")
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "degree_divergence"
    assert payload["prefix"] == ["0x1", "0x7", "0x16"]


def test_matthews_census(capsys, tmp_path):
    config = tmp_path / "shift.cfg"
    config.write_text("# divide by x\nK=1\nD=x\nR[0]=0\nR[1]=1\n", encoding="utf-8")
    code, out, _ = run(capsys, "matthews", "--config", str(config), "--max-degree", "10",
                       "--steps", "100", "--all-seeds-upto", "2")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 1 + 7
    assert lines[1] == "0x1,cycle,2,0,1"
    assert all(",cycle," in line for line in lines[1:])


def test_matthews_bad_config(capsys, tmp_path):
    config = tmp_path / "bad.cfg"
    config.write_text("K=x\nD=x\nR[0]=0\nR[1]=0\n", encoding="utf-8")
    code, _, err = run(capsys, "matthews", "--config", str(config), "--max-degree", "10", "--steps", "10")
    assert code == 1
    assert "not coprime" in err


def test_missing_config_file(capsys, tmp_path):
    code, _, err = run(capsys, "matthews", "--config", str(tmp_path / "nope.cfg"),
                       "--max-degree", "10", "--steps", "10")
    assert code == 1
    assert err.startswith("error:")


def test_conjugation(capsys):
    code, out, _ = run(capsys, "conjugation", "--poly", "x^8+x^3+1")
    assert code == 0
    payload = json.loads(out)
    assert payload["reciprocal_degrees"] == [8, 6, 6, 0]
    assert payload["bar_equal"] is True


def test_polybound(capsys):
    code, out, _ = run(capsys, "polybound", "--n-max", "6")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 1 + 6
    assert lines[1].split(",")[6] == "yes"
    assert all(line.split(",")[6] == "no" for line in lines[2:])


def test_chain_check(capsys):
    code, out, _ = run(capsys, "chain-check", "--n", "8", "--chain-len", "4", "--target", "0", "--limit", "2")
    assert code == 0
    assert json.loads(out)["candidates"]
