import csv
import json
import subprocess
import sys

import pytest

from rectisearch.cli import main, parse_number
from rectisearch.trace import load_trace, replay_trace


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_parse_number():
    assert parse_number("2^20") == parse_number("2**20") == parse_number("1048576") == 2.0**20
    assert parse_number("1e3") == 1000


def test_run_gcbs(capsys):
    code, out, _ = run_json(capsys, ["run", "--algo", "gcbs", "--dim", "2", "--n", "1048576", "--metric", "linf", "--seed", "7"])
    assert code == 0
    assert out["success"] is True and out["violations"] == []
    assert {"P", "D", "R_max", "D_l1", "D_linf", "delta_min"} <= set(out)


def test_run_domino3d_l1_is_rejected(capsys):
    code, _, err = run_json(capsys, ["run", "--algo", "domino3d", "--dim", "3", "--metric", "l1", "--seed", "1"])
    assert code == 1
    assert "L-infinity" in err


def test_run_trace_replays(tmp_path, capsys):
    path = tmp_path / "t.json"
    code, out, _ = run_json(capsys, ["run", "--algo", "cbs2d", "--pois", "5.3,2.1", "--n", "16", "--seed", "0", "--trace", str(path)])
    assert code == 0
    r = replay_trace(load_trace(path))
    assert (r.P, r.D, r.R_max, r.success, list(r.final_position)) == (
        out["P"], out["D"], out["R_max"], out["success"], out["final_position"],
    )


@pytest.mark.parametrize("algo", ["orthant", "domino2d", "cbs2d", "gcbs", "exp+gcbs"])
@pytest.mark.parametrize("metric", ["linf", "l1"])
def test_run_then_render_for_planar_algos(tmp_path, capsys, algo, metric):
    t, svg = tmp_path / "t.json", tmp_path / "t.svg"
    argv = ["run", "--algo", algo, "--dim", "2", "--n", "2^10", "--metric", metric, "--pois", "3", "--seed", "4", "--trace", str(t)]
    assert main(argv) == 0
    assert main(["render", "--trace", str(t), "--out", str(svg)]) == 0
    assert svg.read_text().startswith("<?xml")
    capsys.readouterr()


def test_run_rounds_n_up(capsys):
    code, out, err = run_json(capsys, ["run", "--algo", "gcbs", "--dim", "2", "--n", "1000", "--seed", "1"])
    assert code == 0 and out["n"] == 512.0  # the centered frame searches half of the 1024 box
    assert "rounding" in err
    code, out, err = run_json(capsys, ["run", "--algo", "gcbs", "--dim", "2", "--n", "1000", "--exact-n", "--seed", "1"])
    assert code == 0 and out["n"] == 500.0 and "rounding" not in err


def test_run_bad_flags(capsys):
    assert main(["run", "--algo", "gcbs", "--n", "banana"]) == 1
    assert main(["run", "--algo", "zigzag"]) == 1
    assert main(["run", "--algo", "gcbs", "--pois", "1,2;3"]) == 1
    assert main(["run", "--algo", "gcbs", "--dim", "3", "--pois", "1,2"]) == 1
    assert main([]) == 1
    capsys.readouterr()


def test_run_explicit_poi_outside_n(capsys):
    assert main(["run", "--algo", "gcbs", "--n", "16", "--pois", "40,0"]) == 1
    assert "no POI" in capsys.readouterr().err


def test_bench_shape(tmp_path, capsys):
    out = tmp_path / "r.csv"
    argv = ["bench", "--algo", "gcbs", "--dim", "2", "--dim", "3", "--trials", "10000", "--n", "1048576", "--seed", "1", "--out", str(out)]
    assert main(argv) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 6
    assert [(r["k"], r["stat"]) for r in rows] == [(k, s) for k in "23" for s in ("mean", "max", "std")]
    capsys.readouterr()


def test_bench_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["bench", "--algo", "cbs2d", "--algo", "orthant", "--dim", "2", "--trials", "500", "--n", "2^16", "--seed", "9", "--pois", "2"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    capsys.readouterr()


def test_bench_orthant_8d_within_table_bound(tmp_path, capsys):
    out = tmp_path / "r.json"
    violations = tmp_path / "v.json"
    argv = ["bench", "--algo", "orthant", "--dim", "8", "--trials", "1000", "--n", "2^20", "--seed", "2",
            "--format", "json", "--out", str(out), "--violations", str(violations)]
    assert main(argv) == 0
    rows = json.loads(out.read_text())
    assert next(r for r in rows if r["stat"] == "max")["P_norm"] <= 255
    assert json.loads(violations.read_text()) == []
    capsys.readouterr()


def test_bench_unwritable_output(tmp_path, capsys):
    argv = ["bench", "--algo", "gcbs", "--trials", "5", "--out", str(tmp_path / "missing" / "r.csv")]
    assert main(argv) == 1
    assert "does not exist" in capsys.readouterr().err


def test_bench_unsupported_combination(capsys):
    assert main(["bench", "--algo", "domino2d", "--dim", "3", "--trials", "5"]) == 1
    capsys.readouterr()


def test_render_errors(tmp_path, capsys):
    t3 = tmp_path / "t3.json"
    assert main(["run", "--algo", "gcbs", "--dim", "3", "--n", "64", "--trace", str(t3)]) == 0
    assert main(["render", "--trace", str(t3), "--out", str(tmp_path / "x.svg")]) == 1
    assert main(["render", "--trace", str(tmp_path / "none.json"), "--out", str(tmp_path / "x.svg")]) == 1
    capsys.readouterr()


def test_verify_quick(capsys):
    assert main(["verify", "--quick"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 4 and "all suites passed" in out


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "rectisearch.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "rectisearch" in res.stdout
