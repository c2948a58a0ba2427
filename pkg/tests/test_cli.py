import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from delayadvect import Gaussian, DelayParams, make_evaluator
from delayadvect.cli import EXIT_OVERFLOW, EXIT_USAGE, read_xtu, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    rc = run(list(argv), out, err)
    return rc, out.getvalue(), err.getvalue()


def keyvals(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


@pytest.mark.parametrize(
    "argv,expected",
    [(["--t", "1", "--tau", "0.5"], 1.5), (["--t", "3", "--tau", "1", "--lambda", "-1"], -0.5),
     (["--t", "-1", "--tau", "0.3"], 0.0)],
)
def test_dexp(argv, expected):
    rc, out, _ = call("dexp", *argv)
    assert rc == 0 and float(out) == expected


def test_dexp_complex_lambda():
    rc, out, _ = call("dexp", "--t", "0.5", "--tau", "1", "--lambda", "0,6.283185307179586")
    re, im = (float(v) for v in out.strip().split(","))
    assert rc == 0 and (re, im) == (1.0, 0.0)


def test_delay_ml():
    rc, out, _ = call("delay-ml", "--alpha", "0.5", "--t", "1", "--tau", "0.5")
    assert rc == 0 and abs(float(out) - 0.20212) < 1e-4


@pytest.mark.parametrize(
    "argv",
    [["dexp", "--t", "1", "--tau", "0"], ["dexp", "--t", "1"], ["delay-ml", "--alpha", "1.5", "--t", "1", "--tau", "1"],
     ["solve", "--ic", "bessel", "--a", "1", "--tau", "1", "--x", "0:1:2", "--t", "0:1:2"],
     ["solve", "--ic", "cosh", "--a", "1", "--tau", "1", "--x", "0:1", "--t", "0:1:2"],
     ["verify", "oracle", "--ic", "cosh"], ["dexp", "--t", "1", "--tau", "1e-6"], ["frobnicate"]],
)
def test_usage_errors(argv):
    rc, _, _ = call(*argv)
    assert rc == EXIT_USAGE


def test_overflow_exit_code():
    rc, _, err = call("solve", "--ic", "exp:200", "--a", "1", "--tau", "0.01", "--x", "0:1:2", "--t", "30:31:2")
    assert rc == EXIT_OVERFLOW and "term index" in err


def test_tolerance_failure_exit_code():
    rc, out, _ = call("verify", "residual-integer", "--tol", "1e-12")
    assert rc == 1
    assert keyvals(out)["within_tolerance"] == "false"


def test_residual_integer_report():
    rc, out, _ = call("verify", "residual-integer")
    kv = keyvals(out)
    assert rc == 0 and float(kv["max_abs_residual"]) <= 1e-5
    assert kv["within_tolerance"] == "true" and int(kv["points_checked"]) > 0


def test_negative_range_values():
    rc, out, _ = call("solve", "--ic", "gaussian", "--a", "1", "--tau", "0.3", "--x", "-1:1:3", "--t", "-0.5:0:2")
    assert rc == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["x", "t", "u"] and len(rows) == 7
    assert all(float(r[2]) == 0.0 for r in rows[1:4])  # t < 0


def test_solve_round_trip(tmp_path):
    path = tmp_path / "sol.csv"
    rc, _, _ = call("solve", "--ic", "gaussian", "--a", "1", "--tau", "0.3", "--x", "-2:2:9", "--t", "0:1.5:4",
                    "--out", str(path))
    assert rc == 0
    x, t, u = read_xtu(str(path))
    p = DelayParams(1.0, 0.3)
    np.testing.assert_allclose(u, make_evaluator(Gaussian(), p)(x, t), rtol=1e-15, atol=1e-300)
    plateau = t < 0.3
    np.testing.assert_array_equal(u[plateau], np.exp(-x[plateau] ** 2))


def test_figure3(tmp_path):
    rc, out, _ = call("figure", "fig3", "--out", str(tmp_path))
    assert rc == 0
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    with open(files[0]) as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    assert header[0] == "x" and len(header) == 3
    data = np.array(rows[1:], dtype=float)
    assert data.shape == (4001, 3)
    delayed = data[:, 2]
    assert np.max(np.abs(delayed)) > 1.0  # the delay amplifies the Gaussian
    assert np.max(data[:, 1]) == pytest.approx(1.0)


def test_figures_are_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir()
    b.mkdir()
    assert call("figure", "fig1", "--out", str(a))[0] == 0
    assert call("figure", "fig1", "--out", str(b))[0] == 0
    (fa,), (fb,) = list(a.iterdir()), list(b.iterdir())
    assert fa.read_bytes() == fb.read_bytes()


def test_compare(tmp_path):
    exact = tmp_path / "exact.csv"
    near = tmp_path / "near.csv"
    args = ["solve", "--ic", "gaussian", "--a", "1", "--tau", "0.3", "--x", "-2:2:5", "--t", "0:1:3"]
    call(*args, "--out", str(exact))
    x, t, u = read_xtu(str(exact))
    with open(near, "w") as fh:
        fh.write("x,t,u\n")
        for row in zip(x, t, u + 1e-6):
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    rc, out, _ = call("compare", "--exact", str(exact), "--oracle", str(exact))
    assert rc == 0 and float(keyvals(out)["sup_error"]) == 0.0
    rc, out, _ = call("compare", "--exact", str(exact), "--oracle", str(near), "--tol", "1e-5")
    assert rc == 0 and float(keyvals(out)["sup_error"]) == pytest.approx(1e-6, rel=1e-6)
    rc, out, _ = call("compare", "--exact", str(exact), "--oracle", str(near), "--tol", "1e-7")
    assert rc == 1


def test_compare_rejects_mismatched_grids(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["solve", "--ic", "gaussian", "--a", "1", "--tau", "0.3", "--t", "0:1:3"]
    call(*base, "--x", "-2:2:5", "--out", str(a))
    call(*base, "--x", "-2:2:6", "--out", str(b))
    rc, _, err = call("compare", "--exact", str(a), "--oracle", str(b))
    assert rc == EXIT_USAGE and err


def test_oracle_writes_field(tmp_path):
    path = tmp_path / "oracle.csv"
    rc, out, _ = call("verify", "oracle", "--nx", "512", "--m", "10", "--final-time", "1", "--out", str(path))
    kv = keyvals(out)
    assert float(kv["sup_error"]) < 1e-2
    x, t, u = read_xtu(str(path))
    assert np.all(t == 1.0) and x.size > 0 and rc in (0, 1)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "delayadvect", "dexp", "--t", "1", "--tau", "0.5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and float(proc.stdout) == 1.5
