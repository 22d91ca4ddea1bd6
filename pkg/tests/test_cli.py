"""Command-line interface: exit codes, report formats, determinism."""

import csv
import json
import math

import numpy as np
import pytest

from hypersing.cli import main
from hypersing.kernel_algebra import PhiKernel, phi_eval


def _read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_verify_identities_passes_and_is_deterministic(tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify-identities", "--points", "512", "--tol", "1e-4"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    report = _read_json(out1)
    assert report["pass"] is True
    names = {c["check"] for c in report["checks"]}
    assert {"reflection", "duplication", "beta", "delta(0.25,-0.25)"} <= names


def test_verify_identities_rejects_pole_order(tmp_path):
    assert main(["verify-identities", "--points", "128", "--lambda", "-1.0",
                 "--out", str(tmp_path / "x.json")]) == 2


def test_bad_grid_config_exits_2(tmp_path):
    assert main(["verify-identities", "--T", "-1", "--out", str(tmp_path / "x.json")]) == 2
    assert main(["solve", "--points", "1", "--out", str(tmp_path / "y.csv")]) == 2
    assert main(["solve", "--b0", "nope", "--out", str(tmp_path / "z.csv")]) == 2


def test_solve_emits_route_comparison(tmp_path):
    out = tmp_path / "solve.csv"
    assert main(["solve", "--b0", "exp", "--points", "512", "--out", str(out)]) == 0
    header, rows = _read_csv(out)
    assert header == ["t", "b_picard", "b_laplace", "abs_diff"]
    assert len(rows) == 513
    late = [float(r[3]) for r in rows if float(r[0]) >= 0.1]
    assert max(late) <= 1e-3


def test_solve_from_csv_forcing(tmp_path):
    src = tmp_path / "b0.csv"
    ts = np.linspace(0.0, 3.0, 257)
    with open(src, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,value\n")
        for t in ts:
            fh.write(f"{t},{math.exp(-t)}\n")
    out = tmp_path / "solve.csv"
    assert main(["solve", "--b0-file", str(src), "--out", str(out)]) == 0
    header, rows = _read_csv(out)
    assert len(rows) == 257


def test_invert_power_image(tmp_path):
    out = tmp_path / "inv.csv"
    assert main(["invert", "--lambda", "0.5", "--T", "2", "--points", "10",
                 "--out", str(out)]) == 0
    header, rows = _read_csv(out)
    assert header == ["t", "value"]
    k = PhiKernel(0.5)
    for t_s, v_s in rows:
        t, v = float(t_s), float(v_s)
        assert v == pytest.approx(phi_eval(k, t), rel=1e-5)


def test_invert_requires_valid_order(tmp_path):
    assert main(["invert", "--out", str(tmp_path / "x.csv")]) == 2
    assert main(["invert", "--lambda", "-2.0", "--out", str(tmp_path / "x.csv")]) == 2


def test_nsp_paradox_trivial_run(tmp_path):
    out = tmp_path / "nsp.json"
    assert main(["nsp-paradox", "--amplitude", "0", "--points", "256",
                 "--out", str(out)]) == 0
    report = _read_json(out)
    assert report["trivial"] is True
    assert report["pass"] is True
    assert report["exponent"] is None


def test_nsp_paradox_config_errors(tmp_path):
    assert main(["nsp-paradox", "--amplitude", "-1", "--out", str(tmp_path / "x.json")]) == 2
    assert main(["nsp-paradox", "--nu", "0", "--out", str(tmp_path / "x.json")]) == 2
    assert main(["nsp-paradox", "--c", "-3", "--out", str(tmp_path / "x.json")]) == 2


def test_bench_reports_timings(tmp_path):
    out = tmp_path / "bench.json"
    assert main(["bench", "--points", "256", "--out", str(out)]) == 0
    report = _read_json(out)
    assert set(report["timings"]) == {"conv_positive_s", "solve_picard_s", "talbot_3pts_s"}
    assert all(v >= 0 for v in report["timings"].values())
