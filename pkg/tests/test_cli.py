import csv
import json
import subprocess
import sys

import pytest

from clonecap.cli import RunConfig, fmt, main, render, z_grid


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(text):
    return list(csv.DictReader(text.splitlines()))


def test_cloning_capacities_single_rows(capsys):
    code, out, _ = run(["cloning-capacities", "--lmin", "2", "--lmax", "3"], capsys)
    assert code == 0
    rows = read_csv(out)
    assert [r["ell"] for r in rows] == ["2", "3"]
    assert float(rows[0]["c_closed_form"]) == 1.0
    assert abs(float(rows[0]["c_via_moe"]) - 1.0) <= 1e-8
    assert abs(float(rows[1]["c_closed_form"]) - 2 / 3) <= 1e-15


@pytest.mark.parametrize(
    "argv",
    [
        ["cloning-capacities", "--lmin", "1", "--lmax", "3"],
        ["cloning-capacities", "--lmin", "5", "--lmax", "3"],
        ["cloning-capacities", "--lmax", "65"],
        ["certify", "--lmax", "2"],
        ["certify", "--lmax", "25"],
        ["fock-check", "--cutoff", "3"],
        ["fock-check", "--z", "1.0"],
        ["unruh-curve", "--step", "0"],
        ["unruh-curve", "--tail", "-1"],
        ["cloning-capacities", "--jobs", "0"],
        ["cloning-capacities", "--seed", "x"],
        ["no-such-command"],
        [],
    ],
)
def test_usage_errors_exit_two(argv, capsys):
    code, _, _ = run(argv, capsys)
    assert code == 2


def test_unruh_curve_json_round_trip(tmp_path, capsys):
    out = tmp_path / "curve.json"
    dat = tmp_path / "curve.dat"
    code, _, _ = run(
        ["unruh-curve", "--format", "json", "--out", str(out), "--dat", str(dat), "--seed", "3,4"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"config", "rows", "verdict"}
    assert doc["verdict"] == "pass"
    assert doc["config"]["seeds"] == [3, 4]
    caps = [r["capacity_bits"] for r in doc["rows"]]
    assert doc["rows"][0]["z"] == 0.0 and caps[0] == 1.0
    assert len(caps) == 10
    assert all(a > b for a, b in zip(caps, caps[1:]))
    lines = dat.read_text().splitlines()
    assert lines[0].startswith("#")
    assert [float(x) for x in lines[1].split()][:2] == [0.0, 1.0]


def test_csv_round_trip_is_exact(tmp_path, capsys):
    from clonecap.unruh import unruh_capacity

    out = tmp_path / "curve.csv"
    assert run(["unruh-curve", "--zmax", "0.5", "--out", str(out)], capsys)[0] == 0
    rows = read_csv(out.read_text())
    assert list(rows[0]) == ["z", "capacity_bits", "error_bar", "K_used"]
    for r in rows:
        ref = unruh_capacity(float(r["z"]), 1e-9)
        assert float(r["capacity_bits"]) == ref.value
        assert float(r["error_bar"]) == ref.error_bar
        assert int(r["K_used"]) == ref.K


def test_fmt_is_shortest_exact():
    for x in (0.1, 2 / 3, 1e-300, 123456789.123456789):
        assert float(fmt(x)) == x
    assert fmt(True) == "true" and fmt(7) == "7"


def test_render_json_keys():
    cfg = RunConfig("x", {"a": 1}, (0,), None, "json", 1)
    doc = json.loads(render(cfg, [{"v": 0.5}], "pass"))
    assert doc["rows"] == [{"v": 0.5}]


def test_config_requires_seeds():
    with pytest.raises(ValueError):
        RunConfig("x", {}, (), None, "csv", 1)


def test_z_grid_is_capped(capsys):
    grid = z_grid(0.9, 1.0, 0.05)
    assert grid[-1] == 1 - 1e-6
    assert "capped" in capsys.readouterr().err
    assert z_grid(0, 0.9, 0.1) == [round(0.1 * i, 12) for i in range(10)]


def test_certify_passes(capsys):
    code, out, _ = run(["certify", "--lmax", "4", "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert [r["ell"] for r in doc["rows"]] == [3, 4]
    assert all(r["pass"] and r["ppt_verdict"] == "PPT" for r in doc["rows"])
    assert doc["rows"][0]["decomposition"] == "[3]x[2]"


def test_certify_tampered_tolerance_fails(capsys):
    code, _, err = run(["certify", "--lmax", "3", "--tolerance-scale", "-1"], capsys)
    assert code == 1
    assert "l = [3]" in err


def test_fock_check_zero_and_default(capsys):
    code, out, _ = run(["fock-check", "--z", "0", "--cutoff", "6"], capsys)
    assert code == 0
    rows = read_csv(out)
    assert [r["ell"] for r in rows] == ["2"]
    code, out, _ = run(["fock-check", "--z", "0.4", "--cutoff", "12", "--theta", "1.1", "--phi", "0.3"], capsys)
    assert code == 0
    for r in read_csv(out):
        assert float(r["weight_deviation"]) <= 1e-6
        assert float(r["state_deviation"]) <= 1e-6


def test_fock_check_reports_larger_bound(capsys):
    code, out, _ = run(["fock-check", "--z", "0.8", "--cutoff", "8"], capsys)
    assert code == 0
    bound = float(read_csv(out)[0]["truncation_bound"])
    assert bound > 1e-3


def test_parallel_output_matches_serial(capsys):
    args = ["unruh-curve", "--zmax", "0.3"]
    _, serial, _ = run(args + ["--jobs", "1"], capsys)
    _, parallel, _ = run(args + ["--jobs", "2"], capsys)
    assert serial == parallel


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "clonecap", "cloning-capacities", "--lmin", "2", "--lmax", "2"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0
    assert res.stdout.startswith("ell,c_closed_form")
