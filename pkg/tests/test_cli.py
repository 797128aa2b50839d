import json
import math
from pathlib import Path

import pytest

from ellipsoid_spheres import cli


def run(args):
    return cli.main(args)


def test_spectrum_csv_schema_and_values(tmp_path):
    out = tmp_path / "o"
    assert run(["--out", str(out), "spectrum", "--b", "1", "--d", "1",
                "--a", "1", "--n-max", "0"]) == 0
    text = (out / "spectrum.csv").read_text()
    lines = text.strip().split("\n")
    assert lines[0] == "parity,n,a,lambda,zero_count"
    rows = [ln.split(",") for ln in lines[1:]]
    odd0 = [r for r in rows if r[0] == "odd" and r[1] == "0"][0]
    assert abs(float(odd0[3])) < 1e-9


def test_spectrum_deterministic(tmp_path):
    o1, o2 = tmp_path / "a", tmp_path / "b"
    run(["--out", str(o1), "spectrum", "--b", "1", "--d", "1", "--a", "1.5",
         "--n-max", "1"])
    run(["--out", str(o2), "spectrum", "--b", "1", "--d", "1", "--a", "1.5",
         "--n-max", "1"])
    assert (o1 / "spectrum.csv").read_bytes() == (o2 / "spectrum.csv").read_bytes()


def test_instants_first_is_d(tmp_path):
    out = tmp_path / "o"
    assert run(["--out", str(out), "instants", "--b", "1", "--d", "1",
                "--m-max", "1"]) == 0
    lines = (out / "instants.csv").read_text().strip().split("\n")
    assert lines[0] == "m,parity,n,a_m"
    first = lines[1].split(",")
    assert first[0] == "1" and abs(float(first[3]) - 1.0) < 1e-8


def test_instants_with_heun(tmp_path):
    out = tmp_path / "o"
    assert run(["--out", str(out), "instants", "--b", "1", "--d", "1",
                "--m-max", "3", "--with-heun"]) == 0
    lines = (out / "instants.csv").read_text().strip().split("\n")
    avals = [float(ln.split(",")[3]) for ln in lines[1:]]
    assert all(x < y for x, y in zip(avals, avals[1:]))
    rep = json.loads((out / "heun_crosscheck.json").read_text())
    checked = [p["diff"] for p in rep["pairs"] if p["diff"] is not None]
    assert checked and max(checked) < 1e-6
    diag = json.loads((out / "instants_integer_proximity.json").read_text())
    assert "max_abs_a_m_minus_m" in diag


def test_census_json(tmp_path):
    out = tmp_path / "o"
    assert run(["--out", str(out), "census", "--b", "1", "--d", "1",
                "--a", "2.0"]) == 0
    rep = json.loads((out / "census.json").read_text())
    assert rep["count"] >= 1
    assert all(set(w) >= {"s", "m", "parity"} for w in rep["witnesses"])


def test_census_error_exit(tmp_path, capsys):
    out = tmp_path / "o"
    assert run(["--out", str(out), "census", "--b", "1", "--d", "1",
                "--a", "0.5"]) == 1
    err = capsys.readouterr().err
    assert "census requires a > d" in err


def test_strip_outputs(tmp_path):
    out = tmp_path / "o"
    assert run(["--out", str(out), "strip", "--b", "1", "--d", "1"]) == 0
    lines = (out / "strip_periods.csv").read_text().strip().split("\n")
    assert lines[0] == "c_over_max,w,Delta"
    deltas = [float(ln.split(",")[2]) for ln in lines[1:]]
    assert all(x < y for x, y in zip(deltas, deltas[1:]))
    area = json.loads((out / "area_constants.json").read_text())
    assert not area["agree"]
    assert math.isclose(area["pappus_area"], 4 * math.pi, rel_tol=1e-10)


def test_branch_command_small(tmp_path):
    out = tmp_path / "o"
    assert run(["--out", str(out), "branch", "--b", "1", "--d", "1",
                "--m", "2", "--a-max", "2.5"]) == 0
    lines = (out / "branch_m2.csv").read_text().strip().split("\n")
    assert lines[0] == "m,parity,a,s,z_count,area,residual,turn_count"
    zs = {ln.split(",")[4] for ln in lines[1:]}
    assert zs == {"1"}
    diag = json.loads((out / "branch_m2_asymptotics.json").read_text())
    assert diag["index"] >= 1 and diag["crossings"] == 2
