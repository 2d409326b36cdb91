import csv
import io
import json
import subprocess
import sys

import pytest

from plapbounds import cli, oracle
from plapbounds.errors import ConvergenceError


def run(*argv):
    out = io.StringIO()
    code = cli.run(list(argv), stdout=out)
    return code, out.getvalue()


def test_bounds_json_example():
    code, text = run("bounds", "--f", "exp", "--p", "2", "--dim", "10", "--geom", "ball:R=1",
                     "--format", "json")
    assert code == 0
    doc = json.loads(text)
    assert set(doc) == {"config", "results", "version", "timestamp"}
    rep = cli.report_from_json(text)
    assert rep.best_lower().value == pytest.approx(16.0)
    assert rep.best_upper().value == pytest.approx(20.0)
    assert rep.problem["nonlinearity"] == "exp"


def test_reproducible_output_is_byte_identical():
    args = ("bounds", "--f", "gelfand:m=3", "--p", "1.5", "--dim", "3", "--reproducible")
    a, b = run(*args), run(*args)
    assert a == b and "timestamp" not in json.loads(a[1])


@pytest.mark.parametrize("argv", [
    ("bounds", "--f", "gelfand:m=5", "--p", "3", "--dim", "4", "--with-oracle", "--reproducible"),
    ("eigen", "--p", "2", "--dim", "2", "--with-oracle", "--reproducible"),
    ("eigen", "--geom", "measured:diam=1.4142135623730951,cheb=0.5,vol=1,per=4"),
])
def test_json_reparses_into_report(argv):
    code, text = run(*argv)
    assert code == 0
    rep = cli.report_from_json(text)
    doc = json.loads(text)
    assert len(rep.entries) == sum(r["kind"] != "numeric" for r in doc["results"])
    assert rep.is_consistent()


def test_bad_specs_exit_2(capsys):
    assert run("bounds", "--f", "cosh")[0] == 2
    assert "gelfand:m=<real>" in capsys.readouterr().err
    assert run("bounds", "--geom", "cube:a=1")[0] == 2
    assert "ball:R=<real>" in capsys.readouterr().err
    assert run("eigen", "--p", "0.5")[0] == 2
    assert run("pointwise", "--lam", "1", "--weight", "gauss")[0] == 2


def test_convergence_failure_exit_3(monkeypatch):
    def boom(*a, **k):
        raise ConvergenceError("forced")

    monkeypatch.setattr(oracle, "lambda1_numeric", boom)
    assert run("oracle", "lambda1")[0] == 3


def test_mems_with_oracle():
    code, text = run("mems", "--alpha", "0", "--dim", "2", "--radius", "1", "--with-oracle",
                     "--format", "json")
    row = json.loads(text)["results"][0]
    assert code == 0
    assert row["lower"] == pytest.approx(16 / 27) and row["upper"] == pytest.approx(4 / 3)
    assert row["oracle"] == pytest.approx(0.789, abs=1e-3) and row["inside"]
    code, table = run("mems", "--with-oracle")
    assert "5.92592592593e-01" in table and "1.33333333333e+00" in table


def test_pointwise_csv():
    code, text = run("pointwise", "--f", "exp", "--p", "2", "--dim", "2", "--lam", "1", "--points", "3")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 0 and [r["r"] for r in rows] == ["0.0", "0.5", "1.0"]
    assert float(rows[0]["lower"]) == pytest.approx(0.2876820724517809, rel=1e-15)


def test_nonexist_rows():
    code, text = run("nonexist", "--f", "mems:m=2", "--weight", "power:alpha=1")
    names = [r["name"] for r in json.loads(text)["results"]]
    assert code == 0 and names == ["general", "radial_weight"]


def test_oracle_subcommands():
    code, text = run("oracle", "curve", "--f", "mems:m=2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 0 and list(rows[0]) == ["u0", "lambda"] and len(rows) > 40
    code, text = run("oracle", "torsion", "--points", "5", "--format", "csv")
    first = next(csv.DictReader(io.StringIO(text)))
    assert float(first["psi"]) == pytest.approx(0.25, rel=1e-10)
    code, text = run("oracle", "lambda-star", "--f", "exp", "--dim", "2")
    assert json.loads(text)["results"][0]["lambda_star_numeric"] == pytest.approx(2.0, rel=1e-6)


def test_sweep_branches_and_order():
    code, text = run("sweep", "--f", "exp", "--p", "2", "--dim", "1..15")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 0 and [float(r["N"]) for r in rows] == list(range(1, 16))
    branches = [int(r["branch"]) for r in rows]
    # transitions after N = 8/e ~ 2.94 and after N = 4
    assert branches == [1, 1, 2, 2] + [3] * 11
    assert "oracle" not in rows[0]


def test_sweep_parallel_matches_serial():
    args = ("sweep", "--f", "gelfand", "--m", "5,3", "--p", "3,2", "--dim", "2,1")
    serial = run(*args)[1]
    parallel = run(*args, "--jobs", "2")[1]
    assert serial == parallel
    rows = list(csv.DictReader(io.StringIO(serial)))
    keys = [(r["f"], float(r["p"]), float(r["N"])) for r in rows]
    assert keys == sorted(keys)


def test_sweep_records_cell_failures():
    code, text = run("sweep", "--f", "gelfand:m=0.5", "--p", "2", "--dim", "2")
    row = next(csv.DictReader(io.StringIO(text)))
    assert code == 0 and row["torsion_upper"] == "inf"
    code, text = run("sweep", "--f", "gelfand", "--dim", "2")
    assert "SpecError" in text


def test_q_sweep_gap_shrinks():
    code, text = run("sweep", "--p", "2", "--dim", "2", "--q", "1,2,5,20")
    gaps = [float(r["gap"]) for r in csv.DictReader(io.StringIO(text))]
    assert gaps == sorted(gaps, reverse=True) and gaps[-1] < 0.5


def test_verify_quick_passes():
    code, text = run("verify", "--suite", "closed-form", "--grid", "quick", "--format", "csv")
    assert code == 0
    assert all(r["passed"] == "true" for r in csv.DictReader(io.StringIO(text)))


def test_verify_failure_exit_1(monkeypatch):
    monkeypatch.setattr(cli.verify, "run_suite", lambda s, g: [{"case": "x", "passed": False}])
    assert run("verify")[0] == 1


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("PLAP_OUTPUT_DIR", str(tmp_path))
    code, text = run("eigen", "--output", "eig.json", "--reproducible")
    assert code == 0 and text == ""
    doc = json.loads((tmp_path / "eig.json").read_text())
    assert doc["version"] and doc["results"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "plapbounds", "bounds", "--dim", "3", "--format", "csv"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.splitlines()[0] == "name,kind,value,source,certified"


def test_parse_values():
    assert cli.parse_values("1..4") == [1.0, 2.0, 3.0, 4.0]
    assert cli.parse_values("1.5, 2,3") == [1.5, 2.0, 3.0]
    with pytest.raises(cli.SpecError):
        cli.parse_values("a..b")
