import json
import math
import os

import pytest

from polycc.cli import main, parse_grid, parse_theta

SOLVED = ["--n", "3", "--a", "1", "--b", "1", "--h", "1.4142135623730951", "--theta", "pi-over-n"]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_theta_exact():
    assert parse_theta("pi-over-n", 7) == math.pi / 7
    assert parse_theta("0", 7) == 0.0
    assert parse_theta("0.25", 7) == 0.25


def test_parse_grid():
    g = parse_grid("0.2:5:40")
    assert len(g) == 40 and g[0] == 0.2 and g[-1] == 5.0
    assert parse_grid("0.01:10:4", geometric=True)[1] == pytest.approx(0.1)


def test_build_then_check(tmp_path, capsys):
    out = tmp_path / "cc.json"
    code, _, _ = run(["build", *SOLVED, "--out", str(out)], capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    assert len(doc["bodies"]) == 6
    manifest = json.loads((tmp_path / "cc.json.manifest.json").read_text())
    assert manifest["command"] == "build" and manifest["params"]["N"] == 3

    code, text, _ = run(["check", str(out)], capsys)
    assert code == 0
    rep = json.loads(text)
    assert rep["is_central"] and rep["max_residual"] < 1e-9
    assert max(abs(c) for c in rep["conditions"]["r32"]) < 1e-12


def test_round_trip_bit_identical(tmp_path, capsys):
    from polycc.polygon import BodySystem, TwistedPolygonParams, build_configuration
    out = tmp_path / "cc.json"
    run(["build", "--n", "7", "--a", "0.3", "--b", "0.9", "--h", "0.123456789",
         "--theta", "pi-over-n", "--out", str(out)], capsys)
    back = BodySystem.from_json(out.read_text())
    ref = build_configuration(TwistedPolygonParams(7, 0.3, 0.9, 0.123456789, math.pi / 7))
    assert (back.positions == ref.positions).all()


def test_check_perturbed_and_missing(tmp_path, capsys):
    out = tmp_path / "cc.json"
    run(["build", *SOLVED, "--out", str(out)], capsys)
    doc = json.loads(out.read_text())
    doc["bodies"][0]["position"][0] += 1e-3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert run(["check", str(bad)], capsys)[0] == 1
    assert run(["check", str(tmp_path / "nope.json")], capsys)[0] == 2
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json")
    assert run(["check", str(garbage)], capsys)[0] == 2


@pytest.mark.parametrize("argv", [
    ["build", "--n", "1", "--a", "1", "--b", "1", "--h", "1", "--theta", "0"],
    ["build", "--n", "3", "--a", "1", "--b", "1", "--h", "0", "--theta", "0"],
    ["build", "--n", "3", "--a", "1", "--b", "1", "--h", "1", "--theta", "bogus"],
    ["solve", "--n", "3", "--theta", "0.3"],
])
def test_validation_exit_two(argv, tmp_path, capsys):
    out = tmp_path / "x.json"
    code, _, err = run(argv + ["--out", str(out)], capsys)
    assert code == 2
    assert err
    assert not out.exists()
    assert os.listdir(tmp_path) == []


def test_bad_flag_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["scan", "--n", "3"])
    assert exc.value.code == 2


def test_kernels(capsys):
    code, text, _ = run(["kernels", "--n", "2", "--a", "1", "--h", "1",
                         "--theta", "1.5707963267948966"], capsys)
    assert code == 0
    assert abs(json.loads(text)["y"]) < 1e-16


def test_solve(capsys):
    code, text, _ = run(["solve", "--n", "3", "--theta", "pi-over-n"], capsys)
    res = json.loads(text)
    assert code == 0
    assert res["h_root"] == pytest.approx(1.41421356, abs=1e-8)
    assert res["residual_at_root"] < 1e-12


def test_scan_pass_and_reproducible(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    argv = ["scan", "--n", "3", "--theta", "0", "--a-grid", "1.5:3:4", "--b-grid", "1:1:1",
            "--h-grid", "0.01:10:50", "--workers", "2", "--out", str(out)]
    assert run(argv, capsys)[0] == 0
    first = out.read_bytes()
    assert first.decode().splitlines()[0] == "a,b,min_residual,argmin_h"
    assert len(first.decode().splitlines()) == 5
    assert run(argv, capsys)[0] == 0
    assert out.read_bytes() == first
    assert (tmp_path / "scan.csv.manifest.json").exists()


def test_scan_violation_exit_one(capsys):
    code, text, err = run(["scan", "--n", "4", "--theta", "pi-over-n", "--a-grid", "0.2:5:40",
                           "--b-grid", "0.05:1:20", "--h-grid", "0.01:10:200"], capsys)
    assert code == 1
    assert "a=0.93846153846153846" in err
    # only cells within the exclusion box around (1, 1) are dropped; none fall inside here
    assert len(text.splitlines()) == 1 + 40 * 20


def test_collapse(tmp_path, capsys):
    cc = tmp_path / "cc.json"
    run(["build", *SOLVED, "--out", str(cc)], capsys)
    out = tmp_path / "c.csv"
    assert run(["collapse", str(cc), "--t-end", "0.05", "--out", str(out)], capsys)[0] == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "t,shape_drift,energy_rel_drift"
    assert max(float(r.split(",")[1]) for r in rows[1:]) < 1e-6


def test_suite(tmp_path, capsys):
    out = tmp_path / "suite.json"
    code, _, _ = run(["suite", "--n-max", "4", "--samples", "200", "--seed", "7",
                      "--out", str(out)], capsys)
    assert code == 0
    assert json.loads(out.read_text())["ok"]
    assert json.loads((tmp_path / "suite.json.manifest.json").read_text())["seed"] == 7


def test_module_entry_point():
    import subprocess
    import sys
    r = subprocess.run([sys.executable, "-m", "polycc", "solve", "--n", "2", "--theta", "0"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["h_root"] == 2.0
