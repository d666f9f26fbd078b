import csv
import io
import json
import subprocess
import sys

import pytest

from qsmoments import cli


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv)
    assert code == 0, err
    return json.loads(out)


def test_dist_examples():
    r = run_json("dist", "--n", "3")["results"]
    assert (r["counts"], r["min_cost"], r["total"]) == (["2", "4"], 8, "6")
    r = run_json("dist", "--n", "0")["results"]
    assert (r["counts"], r["min_cost"]) == (["1"], 0)
    r = run_json("dist", "--n", "3", "--statistic", "bst-path")["results"]
    assert (r["counts"], r["min_cost"]) == (["2", "4"], 2)


def test_dist_total_is_factorial_string():
    r = run_json("dist", "--n", "25")["results"]
    assert r["total"] == "15511210043330985984000000"
    assert sum(int(c) for c in r["counts"]) == int(r["total"])


def test_dist_exit_codes():
    assert run("dist", "--n", "65")[0] == cli.EXIT_RESOURCE
    assert run("dist", "--n", "65", "--max-n", "65")[0] == cli.EXIT_OK
    assert run("dist", "--n", "abc")[0] == cli.EXIT_USAGE
    assert run("dist")[0] == cli.EXIT_USAGE
    assert run("dist", "--n", "3", "--statistic", "depth")[0] == cli.EXIT_USAGE
    assert run("frobnicate")[0] == cli.EXIT_USAGE
    code, _, err = run("dist", "--n", "-1")
    assert code == cli.EXIT_USAGE and err


def test_env_fallbacks(monkeypatch):
    monkeypatch.setenv("QM_MAX_N", "3")
    assert run("dist", "--n", "4")[0] == cli.EXIT_RESOURCE
    monkeypatch.setenv("QM_N", "3")
    monkeypatch.setenv("QM_FORMAT", "csv")
    code, out, _ = run("dist")
    assert code == 0 and out.startswith("n,cost,count")
    monkeypatch.setenv("QM_FORMAT", "xml")
    assert run("dist")[0] == cli.EXIT_USAGE


def test_dist_csv_matches_json():
    j = run_json("dist", "--n", "12")["results"]
    _, out, _ = run("dist", "--n", "12", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    from_csv = {int(r["cost"]): r["count"] for r in rows}
    from_json = {j["min_cost"] + i: c for i, c in enumerate(j["counts"]) if c != "0"}
    assert from_csv == from_json


def test_moments_routes_agree():
    closed = run_json("moments", "--n", "3", "--order", "2", "--source", "closed")["results"]
    exact = run_json("moments", "--n", "3", "--order", "2", "--source", "exact")["results"]
    assert (closed["mean"], closed["variance"]) == ("26/3", "2/9")
    assert (exact["mean"], exact["variance"], exact["betas"]) == (closed["mean"], closed["variance"], closed["betas"])
    assert closed["approx"]["variance"] == "2.2222222222222222222e-1"


def test_moments_exit_codes():
    assert run("moments", "--n", "3", "--order", "3", "--source", "closed")[0] == cli.EXIT_UNSUPPORTED
    assert run("moments", "--n", "3", "--order", "1")[0] == cli.EXIT_USAGE
    assert run("moments", "--n", "99")[0] == cli.EXIT_RESOURCE
    r = run_json("moments", "--n", "5", "--order", "4")["results"]
    assert len(r["betas"]) == 4


def test_moments_csv_matches_json():
    j = run_json("moments", "--n", "9", "--order", "3")["results"]
    _, out, _ = run("moments", "--n", "9", "--order", "3", "--format", "csv")
    rows = {r["quantity"]: r for r in csv.DictReader(io.StringIO(out))}
    assert [rows[f"beta{s}"]["exact"] for s in (1, 2, 3)] == j["betas"]
    assert rows["mean"]["exact"] == j["mean"] and rows["variance"]["exact"] == j["variance"]
    assert {k: v["approx"] for k, v in rows.items()} == j["approx"]


def test_approx_has_twenty_significant_digits():
    from fractions import Fraction

    for x in (Fraction(2, 9), Fraction(5), Fraction(-7, 3), Fraction(10**30, 7), Fraction(0)):
        mantissa = cli.approx_str(x).split("e")[0].lstrip("-").replace(".", "")
        assert len(mantissa) == 20


def test_verify_passes():
    code, out, err = run("verify", "--max-n-brute", "8", "--max-n-exact", "30", "--series-order", "60")
    assert code == 0, err
    report = json.loads(out)["results"]
    assert report["passed"] and all(c["passed"] for c in report["checks"])


def test_verify_degenerate_brute_range():
    code, out, _ = run("verify", "--max-n-brute", "0", "--max-n-exact", "5", "--series-order", "6")
    assert code == 0
    checks = {c["name"]: c for c in json.loads(out)["results"]["checks"]}
    assert checks["brute_quicksort_equals_recurrence"]["cases"] == 1


def test_verify_detects_off_by_one_cost(monkeypatch):
    import qsmoments.brute_oracle as bo

    monkeypatch.setattr(bo, "partition_cost", lambda m: m)
    code, out, _ = run("verify", "--max-n-brute", "5", "--max-n-exact", "5", "--series-order", "6")
    assert code == cli.EXIT_VERIFY_FAILED
    checks = {c["name"]: c for c in json.loads(out)["results"]["checks"]}
    first = checks["brute_quicksort_equals_recurrence"]
    assert not first["passed"] and first["first_counterexample"]["n"] == 1


def test_verify_limits():
    assert run("verify", "--max-n-brute", "11")[0] == cli.EXIT_RESOURCE
    assert run("verify", "--max-n-exact", "65")[0] == cli.EXIT_RESOURCE
    assert run("verify", "--series-order", "3")[0] == cli.EXIT_USAGE


def test_verify_csv():
    code, out, _ = run("verify", "--max-n-brute", "3", "--max-n-exact", "5", "--series-order", "8", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows and all(r["status"] == "pass" for r in rows)


def test_simulate_examples():
    r = run_json("simulate", "--n", "2", "--trials", "100", "--seed", "1")
    assert (r["results"]["sample_mean"], r["results"]["sample_variance"]) == (5.0, 0.0)
    assert r["metadata"]["prng"] == "splitmix64"
    assert run("simulate", "--n", "0", "--trials", "10", "--seed", "1")[0] == cli.EXIT_USAGE
    assert run("simulate", "--n", "5", "--trials", "1", "--seed", "1")[0] == cli.EXIT_USAGE
    assert run("simulate", "--n", "5", "--seed", str(2**64))[0] == cli.EXIT_USAGE


def test_simulate_csv_matches_json():
    j = run_json("simulate", "--n", "20", "--trials", "200", "--seed", "3")["results"]
    _, out, _ = run("simulate", "--n", "20", "--trials", "200", "--seed", "3", "--format", "csv")
    rows = {r["quantity"]: r["value"] for r in csv.DictReader(io.StringIO(out))}
    assert float(rows["sample_mean"]) == j["sample_mean"]
    assert float(rows["sample_variance"]) == j["sample_variance"]
    assert rows["sum_cost"] == j["sum_cost"]
    assert rows["variance_closed"] == j["targets"]["variance_closed"]


@pytest.mark.parametrize("argv", [
    ("dist", "--n", "10"),
    ("moments", "--n", "7", "--order", "3"),
    ("simulate", "--n", "30", "--trials", "300", "--seed", "11"),
    ("verify", "--max-n-brute", "3", "--max-n-exact", "6", "--series-order", "8"),
])
def test_json_round_trip_is_byte_identical(argv):
    _, out, _ = run(*argv)
    assert cli.dump_json(json.loads(out)) == out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qsmoments", "moments", "--n", "3", "--source", "closed"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["variance"] == "2/9"
