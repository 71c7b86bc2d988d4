import csv
import io
import json
import subprocess
import sys

import pytest

from ultrawave.cli import main
from ultrawave.gfq import field_params
from ultrawave.localfield import parse_element


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_tables_lambda_q2(capsys):
    code, out, _ = run(capsys, "tables", "--kind", "lambda", "--count", "4", "--q", "2")
    assert code == 0
    rows = json.loads(out)["rows"]
    params = field_params(2)
    expected = ["0", "t^-1", "t^-2", "t^-1 + t^-2"]
    assert [parse_element(r["lambda"], params) for r in rows] == [parse_element(e, params) for e in expected]


def test_tables_character(capsys):
    _, out, _ = run(capsys, "tables", "--kind", "character", "--count", "2", "--q", "2")
    assert json.loads(out)["rows"][1]["chi"] == {"cyclotomic": ["-1"]}
    _, out, _ = run(capsys, "tables", "--kind", "character", "--count", "2", "--q", "3")
    assert json.loads(out)["rows"][1]["chi"] == {"cyclotomic": ["0", "1"]}


def test_tables_size_error(capsys):
    code, _, err = run(capsys, "tables", "--kind", "lambda", "--count", str(2**6 + 1), "--q", "2")
    assert code == 2 and "q^6" in err


def test_tables_csv_is_deterministic(capsys):
    args = ("tables", "--kind", "character", "--count", "27", "--q", "3", "--format", "csv")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    assert a.splitlines()[0] == "n,lambda,chi"


def test_ft_round_trip(tmp_path, capsys):
    src = tmp_path / "f.json"
    src.write_text(json.dumps({"params": {"p": 3, "c": 1}, "pieces": [
        {"center": "t^-1", "level": 0, "coeff": {"cyclotomic": ["1", "0"]}},
        {"center": "0", "level": 1, "coeff": {"cyclotomic": ["0", "1/2"]}}]}))
    mid, back = tmp_path / "F.json", tmp_path / "f2.json"
    assert main(["ft", "-i", str(src), "-o", str(mid)]) == 0
    assert main(["ft", "-i", str(mid), "--inverse", "-o", str(back)]) == 0
    from ultrawave.io import read_function_file

    assert read_function_file(str(back)) == read_function_file(str(src))


def test_radial_ft_example1(capsys):
    code, out, _ = run(capsys, "radial-ft", "--example", "1", "--theta", "1", "--q", "2", "--shells", "0:2")
    d = json.loads(out)
    assert code == 0
    assert d["shell_values"]["0"] == "2/3"
    assert d["threshold"]["s_star"] == "3/2"


def test_membership_example7(capsys):
    _, out, _ = run(capsys, "membership", "--example", "7", "--theta", "1/2", "--q", "3")
    d = json.loads(out)
    assert d["s_star"] == "-3/2"
    assert [v["converges"] for v in d["verdicts"]] == [True, False]


def test_membership_example3_all_s(capsys):
    _, out, _ = run(capsys, "membership", "--example", "3", "--k", "2")
    assert json.loads(out)["s_star"] == "inf"


def test_filters(capsys):
    assert run(capsys, "filters", "check", "--bank", "haar", "--q", "4")[0] == 0
    assert run(capsys, "filters", "check", "--bank", "random", "--q", "3", "--seed", "5")[0] == 0
    code, out, _ = run(capsys, "filters", "check", "--bank", "perturbed", "--q", "2")
    assert code == 1 and json.loads(out)["report"]["passed"] is False


def test_packets_gen_then_norm(tmp_path, capsys):
    path = tmp_path / "w.json"
    assert main(["packets", "gen", "--n", "5", "--j", "1", "--k", "3", "--s", "1/2", "-o", str(path)]) == 0
    code, out, _ = run(capsys, "norm", "-i", str(path), "--s", "1/2")
    assert code == 0 and json.loads(out)["norm2"] == "1"


def test_packets_gram(capsys):
    code, out, _ = run(capsys, "packets", "gram", "--N", "4", "--K", "2", "--j", "-1")
    d = json.loads(out)
    assert code == 0 and d["identity"] and d["residual"] == 0


def test_fractal_csv(tmp_path, capsys):
    path = tmp_path / "ft.csv"
    code, out, _ = run(capsys, "fractal", "--kind", "weierstrass", "--depth", "4", "--emit", str(path))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    assert list(rows[0]) == ["m", "center", "level", "re", "im"]
    assert float(rows[0]["re"]) == pytest.approx(15 / 64)
    assert json.loads(out)["report"]["status"] == "informational"


def test_examples_command(capsys):
    code, out, _ = run(capsys, "examples", "--ids", "1,3", "--theta", "1")
    d = json.loads(out)
    assert code == 0
    status = {r["name"]: r["status"] for r in d["reports"]}
    assert status["example-1-head"] == "pass"
    assert status["example-1-tail"] == "informational"
    assert status["example-3-q2"] == "pass"


def test_examples_fractal_is_informational(capsys):
    code, out, _ = run(capsys, "examples", "--ids", "5", "--depth", "10")
    assert code == 0
    assert {r["status"] for r in json.loads(out)["reports"]} <= {"pass", "informational"}


@pytest.mark.parametrize("argv", [
    ["examples", "--ids", "11"],
    ["tables", "--kind", "lambda", "--count", "3", "--q", "6"],
    ["radial-ft"],
    ["verify-all", "--backend", "float", "--eps", "1e-3"],
    ["bogus"],
    ["membership", "--example", "1", "--theta", "-3"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert main(argv) == 2


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"q": 3, "format": "csv"}))
    code, out, _ = run(capsys, "--config", str(cfg), "tables", "--kind", "lambda", "--count", "3")
    assert code == 0 and out.splitlines()[-1] == "2,2*t^-1"


def test_verify_subset_and_injected_failure(capsys):
    code, out, _ = run(capsys, "verify-all", "--checks", "filter-bank,example-3")
    assert code == 0 and json.loads(out)["summary"]["ok"]
    code, out, _ = run(capsys, "verify-all", "--checks", "filter-bank", "--bank", "perturbed")
    assert code == 1 and "prop-3.3-i" in json.loads(out)["summary"]["failing"]


def test_console_script_runs():
    r = subprocess.run([sys.executable, "-m", "ultrawave.cli", "tables", "--kind", "lambda", "--count", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and '"lambda": "1*t^-1"' in r.stdout
