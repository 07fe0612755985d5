import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from pplab.cli import SuiteConfig, UsageError, main, run_suite

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_chain_suite_passes(capsys):
    code, out, _ = run(capsys, "run", "--suite", "chain-counterexample")
    assert code == 0
    assert out.strip().endswith("PASS")


def test_json_report_shape(capsys):
    code, out, _ = run(capsys, "run", "--suite", "bsigma", "--upto", "3", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] is True
    assert doc["config"] == {"suite": "bsigma", "engine": None, "seed": "0", "max_cells": None, "n": None, "upto": "3", "count": None}
    verdict = doc["reports"][0]["instances"][0]["verdicts"][2]
    assert verdict["witnesses"]["table"] == ["Z", "Z/2", "0", "Z/2"]


def test_reports_are_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        code, _, _ = run(capsys, "run", "--suite", "projective-cofib", "--seed", "5", "--count", "5", "--out", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_integers_are_strings_in_json(capsys):
    _, out, _ = run(capsys, "run", "--suite", "strict-vs-hopushout", "--json")
    doc = json.loads(out)
    assert doc["config"]["seed"] == "0"
    assert not any(isinstance(x, int) and not isinstance(x, bool) for x in _walk(doc))


def _walk(x):
    if isinstance(x, dict):
        for v in x.values():
            yield from _walk(v)
    elif isinstance(x, list):
        for v in x:
            yield from _walk(v)
    else:
        yield x


def test_failing_suite_exits_one(capsys):
    # the swap-points instances are reproduced failures
    code, out, _ = run(capsys, "run", "--suite", "symmetroidal")
    assert code == 1
    assert "swap-points" in out and out.strip().endswith("FAIL")


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--suite", "no-such-suite"],
        ["run", "--suite", "bsigma", "--engine", "finset"],
        ["run", "--suite", "bsigma", "--n", "2,1"],
        ["run", "--suite", "pp-laws", "--n", "x"],
        ["compute", "homology", "simplex:x"],
        ["compute", "homology", "/no/such/file"],
        ["compute", "pp-power", "boundary-inclusion:1", "--n", "2,1"],
        ["compute", "certificate"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_parse_error_exits_three(capsys, tmp_path):
    bad = tmp_path / "bad.sset"
    bad.write_text("sset\ndim 0 count 1\ndim 1 count 1\n  0: [;1] [;0]\nend\n")
    code, _, err = run(capsys, "compute", "homology", str(bad))
    assert code == 3
    assert err.startswith("pplab: parse error: line 4")


def test_structural_error_exits_one(capsys):
    # there is no horn Λ^2_5
    code, _, err = run(capsys, "compute", "homology", "horn:2:5")
    assert code == 1 and err.startswith("pplab: ")


def test_compute_homology_of_sample_file(capsys):
    code, out, _ = run(capsys, "compute", "homology", str(DATA / "boundary2.sset"))
    assert code == 0
    assert json.loads(out)["homology"] == ["Z", "Z"]


def test_compute_chain_homology(capsys):
    code, out, _ = run(capsys, "compute", "homology", str(DATA / "interval.json"))
    assert code == 0
    assert json.loads(out)["homology"] == {"0": "0", "1": "0"}


def test_compute_pp_power_reports_fixed_diagonal(capsys):
    code, out, _ = run(capsys, "compute", "pp-power", str(DATA / "boundary1_in_simplex1.arrow"), "--n", "2")
    doc = json.loads(out)
    assert code == 0 and doc["mono"] is True
    [fixed] = doc["fixed_cells_outside_image"]
    assert fixed["cell"] == ["1", "4"] and fixed["vertices"] == ["0", "3"]


def test_compute_finset_pp_power(capsys):
    code, out, _ = run(capsys, "compute", "pp-power", str(DATA / "injection.finset"), "--n", "2")
    doc = json.loads(out)
    # 2 ↪ 3 missing the point 1: only (1, 1) lies outside the domain
    assert code == 0 and doc["mode"] == "mono" and doc["mono"] is True
    assert doc["dom"]["size"] == "8" and doc["cod"]["size"] == "9"
    assert "4" not in doc["table"]


def test_compute_coinv(capsys):
    code, out, _ = run(capsys, "compute", "coinv", "boundary-inclusion:1", "--n", "2")
    doc = json.loads(out)
    assert code == 0 and doc["mono"] is True


def test_compute_certificate_single_arrow(capsys):
    code, out, _ = run(capsys, "compute", "certificate", str(DATA / "horn21_in_simplex2.arrow"), "--n", "2")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"]["pass"] is True


def test_compute_certificate_kappa_pair(capsys):
    code, out, _ = run(capsys, "compute", "certificate", "empty:1", "collapse:1", "--n", "2", "--kappa")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"]["pass"] is True
    assert doc["certificate"]["realization"] == "abstract"


def test_certificate_of_non_composable_pair_exits_one(capsys):
    code, _, err = run(capsys, "compute", "certificate", "empty:0", "collapse:1", "--n", "2")
    assert code == 1 and "not composable" in err


def test_suite_config_validation():
    with pytest.raises(UsageError):
        SuiteConfig("pp-laws", count=0)
    with pytest.raises(UsageError):
        SuiteConfig("unknown")


def test_run_suite_returns_document():
    doc = run_suite(SuiteConfig("strict-vs-hopushout"))
    assert doc["tool"] == "pplab" and doc["pass"] is True
    claims = [v["claim"] for inst in doc["reports"][0]["instances"] for v in inst["verdicts"]]
    assert claims[0] == "strict-vs-homotopy-pushout:expected-fail"


@pytest.mark.skipif(shutil.which("pplab") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["pplab", "compute", "homology", "circle"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["homology"] == ["Z", "Z"]


def test_module_invocation():
    proc = subprocess.run([sys.executable, "-m", "pplab.cli", "compute", "homology", "point"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["homology"] == ["Z"]
