import csv
import io
import json
import subprocess
import sys

import pytest

from modn.cli import COMMANDS, read_config, resolve, run


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_of(text):
    lines = list(csv.reader(io.StringIO(text)))
    assert lines[1][0].startswith("# ")
    return lines[0], lines[2:]


def test_every_command_has_an_owner_module():
    owners = {"exp_sums", "extension", "wave_packets", "kakeya", "congruences", "padic"}
    assert {owner for _, owner in COMMANDS.values()} <= owners
    assert len(COMMANDS) == 15


def test_gauss_sweep(capsys):
    code, out, _ = invoke(capsys, "gauss", "--N-range", "3..25", "--odd-only")
    header, rows = rows_of(out)
    assert code == 0 and header == ["N", "a", "b", "abs_direct", "abs_closed", "abs_diff"]
    assert {int(r[0]) for r in rows} == set(range(3, 26, 2))
    assert max(float(r[-1]) for r in rows) < 1e-9


def test_knapp_row(capsys):
    code, out, _ = invoke(capsys, "knapp", "--N", "9", "--d", "3", "--n", "2", "--s", "2", "--rprime", "4")
    header, rows = rows_of(out)
    row = dict(zip(header, rows[0]))
    assert code == 0
    assert float(row["lhs"]) == pytest.approx(3 ** -0.5, abs=1e-12)
    assert float(row["rhs"]) == pytest.approx(3 ** -0.75, abs=1e-12)


def test_count_solutions_row(capsys):
    code, out, _ = invoke(capsys, "count-solutions", "--n", "2", "--N", "25", "--y", "0,1")
    header, rows = rows_of(out)
    row = dict(zip(header, rows[0]))
    assert code == 0
    assert row["exact"] == "2" and row["hensel_bound"] == "2" and row["regime"] == "applicable"


def test_json_output(capsys):
    code, out, _ = invoke(capsys, "constant-test", "--N", "15", "--rprime", "6", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] is True
    assert doc["config"]["command"] == "constant-test"
    assert doc["rows"][0]["closed_form"] == "319/225"


def test_output_is_deterministic(capsys):
    argv = ("khintchine", "--d", "3", "--trials", "64", "--distribution", "steinhaus", "--seed", "4")
    _, first, _ = invoke(capsys, *argv)
    _, second, _ = invoke(capsys, *argv)
    assert first == second


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("MODN_SEED", "11")
    assert resolve(["padic-check", "--p", "3"]).seed() == 11
    assert resolve(["padic-check", "--p", "3", "--seed", "2"]).seed() == 2


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep settings\nN = 9\nrprime = 4\nformat = json\n")
    assert read_config(str(cfg)) == {"N": "9", "rprime": "4", "format": "json"}
    code, out, _ = invoke(capsys, "constant-test", "--config", str(cfg), "--N", "15")
    doc = json.loads(out)
    assert code == 0 and doc["rows"][0]["N"] == 15


def test_output_file(tmp_path, capsys):
    dest = tmp_path / "dirs.csv"
    code, out, _ = invoke(capsys, "directions", "--N", "6", "--n", "2", "-o", str(dest))
    assert code == 0 and out == ""
    header, rows = rows_of(dest.read_text())
    assert dict(zip(header, rows[0]))["directions"] == "12"


def test_parallel_sweep_matches_serial(capsys):
    _, serial, _ = invoke(capsys, "constant-test", "--N-range", "3..21", "--odd-only", "--rprime", "4,6")
    _, parallel, _ = invoke(capsys, "constant-test", "--N-range", "3..21", "--odd-only", "--rprime", "4,6",
                            "--jobs", "2")
    assert serial == parallel


def test_modulus_filters():
    assert resolve(["gauss", "--N-range", "1..30", "--prime-power"]).moduli() == \
        [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]
    assert resolve(["count-solutions", "--N-range", "2..16", "--factors-above-n", "--n", "2"]).moduli() == \
        [3, 5, 7, 9, 11, 13, 15]


@pytest.mark.parametrize("argv", [["bogus"], ["gauss"], ["gauss", "--N", "8"], ["knapp", "--N", "15", "--d", "3"],
                                  ["count-solutions", "--N", "25", "--y", "0,1", "--method", "fast"],
                                  ["constant-test", "--config", "/nonexistent/run.cfg", "--N", "9"]])
def test_usage_errors_exit_one(capsys, argv):
    code, out, err = invoke(capsys, *argv)
    assert code == 1 and "modn:" in err


def test_cap_violation_exits_one(capsys):
    code, _, err = invoke(capsys, "gauss", "--N", "9", "--cap", "10")
    assert code == 1 and "cap" in err


def test_failed_check_exits_two(capsys):
    code, _, _ = invoke(capsys, "tomas-scan", "--N", "9,25", "--families", "constant", "--max-slope", "-5")
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["wave-packets", "--N", "9", "--n", "2"],
    ["kakeya-maximal", "--N", "9", "--samples", "5"],
    ["cordoba", "--N", "5"],
    ["sawyer", "--p", "2", "--s", "1", "--verify-lines"],
    ["directions", "--N-range", "4..8", "--angle-sweep"],
    ["multilinear", "--N", "7"],
    ["padic-check", "--p", "2,3", "--k", "1", "--l", "1"],
    ["lp-condition-f", "--N", "12", "--rho", "3", "--n", "1"],
    ["moment-sharpness", "--p", "5", "--n", "2", "--L", "1", "--rprime", "3.5,4,6"],
])
def test_commands_pass(capsys, argv):
    code, out, _ = invoke(capsys, *argv)
    header, rows = rows_of(out)
    assert code == 0 and rows


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "modn", "directions", "--N", "5"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("N,n,directions")
