import csv
import io
import json
import subprocess
import sys

import pytest

from xoplab.cli import main
from xoplab.poly import Polynomial, coeffs_from_json
from xoplab.xop_direct import JACOBI, XopSpec, build


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_hermite11_coeffs(capsys):
    code, out, _ = run(capsys, "eval", "--family", "hermite11", "--n", "3", "--method", "closed_form", "--coeffs")
    assert code == 0 and out.strip() == "128 x^3 + 192 x"


@pytest.mark.parametrize("argv,expected", [
    (["--family", "laguerre", "--n", "0", "--alpha", "1", "--at", "5"], "1"),
    (["--family", "lag1", "--m", "1", "--n", "1", "--alpha", "1", "--at", "1"], "3"),
    (["--family", "laguerre", "--n", "2", "--alpha", "-3/2", "--at", "-1/2"], "1/4"),
])
def test_eval_at_point(capsys, argv, expected):
    code, out, _ = run(capsys, "eval", *argv)
    assert code == 0 and out.strip() == expected


def test_eval_det_method(capsys):
    code, out, _ = run(capsys, "eval", "--family", "lag1", "--n", "1", "--alpha", "1", "--method", "det",
                       "--format", "json", "--coeffs")
    p = coeffs_from_json(json.loads(out))
    assert code == 0 and abs(p.coeff(0) - 2) < 1e-14 and abs(p.coeff(1) - 1) < 1e-14


def test_invalid_spec_names_constraint(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--family", "lag1", "--m", "2", "--n", "1", "--alpha", "1"])
    assert exc.value.code == 2
    assert "type I requires n >= m" in capsys.readouterr().err


def test_missing_parameter(capsys):
    with pytest.raises(SystemExit):
        main(["eval", "--family", "jacobi", "--n", "2", "--alpha", "1"])
    assert "--beta" in capsys.readouterr().err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_zeros_hermite_two(capsys):
    code, out, _ = run(capsys, "zeros", "--family", "hermite", "--n", "2")
    r = rows(out)
    assert code == 0 and r[0] == ["re", "im", "source"]
    assert [x[:2] for x in r[1:]] == [["-0.7071067811865476", "0.0"], ["0.7071067811865476", "0.0"]]


def test_zeros_pair_partition(capsys):
    _, out, _ = run(capsys, "zeros", "--family", "genhermite", "--partition", "1,1")
    pts = [complex(float(a), float(b)) for a, b, _ in rows(out)[1:]]
    assert len(pts) == 2
    assert abs(pts[0] + 0.7071067811865476j) < 1e-15 and abs(pts[1] - 0.7071067811865476j) < 1e-15


@pytest.mark.parametrize("method", [None, "eigen"])
def test_zeros_laguerre(capsys, method):
    argv = ["zeros", "--family", "laguerre", "--n", "2", "--alpha", "0"]
    if method:
        argv += ["--method", method]
    _, out, _ = run(capsys, *argv)
    vals = [float(r[0]) for r in rows(out)[1:]]
    assert abs(vals[0] - (2 - 2 ** 0.5)) < 1e-15 and abs(vals[1] - (2 + 2 ** 0.5)) < 1e-15


def test_zeros_of_constant_refused(capsys):
    with pytest.raises(SystemExit):
        main(["zeros", "--family", "hermite", "--n", "0"])


def test_json_coefficients_round_trip(capsys):
    spec = XopSpec(JACOBI, 4, 2, "13/3", "3/2")
    _, out, _ = run(capsys, "eval", "--family", "jacobi-x", "--m", "2", "--n", "4", "--alpha", "13/3",
                    "--beta", "3/2", "--format", "json", "--coeffs")
    doc = json.loads(out)
    assert all(isinstance(c, str) and "/" in c for c in doc["coeffs"])
    assert coeffs_from_json(doc) == build(spec)


def test_compare_exact_paths(capsys):
    _, out, _ = run(capsys, "compare", "--family", "lag3", "--m", "1", "--n", "4", "--alpha", "-1/2",
                    "--format", "json")
    doc = json.loads(out)
    assert doc["identical"] and doc["methods"] == ["product", "integral"]


def test_compare_with_determinant(capsys):
    _, out, _ = run(capsys, "compare", "--family", "hermite11", "--n", "6", "--method", "wronskian",
                    "--method", "det", "--format", "csv")
    r = rows(out)
    assert r[0] == ["k", "wronskian", "det", "rel_diff"]
    assert max(float(x[3]) for x in r[1:]) < 1e-12


def test_table_skips_missing_degrees(capsys):
    _, out, _ = run(capsys, "table", "--family", "lag3", "--m", "1", "--alpha", "-1/2",
                    "--n-min", "0", "--n-max", "3")
    degrees = sorted({int(r[0]) for r in rows(out)[1:]})
    assert degrees == [0, 2, 3]


def test_table_text(capsys):
    _, out, _ = run(capsys, "table", "--family", "hermite", "--n-max", "2", "--format", "text")
    assert out.splitlines() == ["n=0: 1", "n=1: 2 x", "n=2: 4 x^2 - 2"]


def test_verify_smoke_exit_code_and_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code = main(["verify", "--m-max", "1", "--n-max", "1", "--format", "json", "--out", str(target)])
    doc = json.loads(target.read_text())
    assert code == 0 and doc["totals"]["FAIL"] == 0


def test_verify_json_bytes_stable(tmp_path):
    cmd = [sys.executable, "-m", "xoplab.cli", "verify", "--n-max", "3", "--format", "json", "--seed", "4"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd + ["--jobs", "2"], capture_output=True, check=True).stdout
    assert a == b


def test_verify_failure_exit_code(monkeypatch, capsys):
    from dataclasses import replace

    from xoplab import xop_det

    real = xop_det.assemble
    monkeypatch.setattr(xop_det, "assemble",
                        lambda spec: replace(real(spec), scale=real(spec).scale * 2))
    code = main(["verify", "--n-max", "3", "--suite", "determinantal", "--format", "csv"])
    assert code == 1
    assert "FAIL" in capsys.readouterr().out


def test_degree_cap_env(monkeypatch, capsys):
    monkeypatch.setenv("XOPLAB_MAX_DEGREE", "3")
    code = main(["zeros", "--family", "hermite", "--n", "4"])
    assert code == 3
    assert "cap" in capsys.readouterr().err
