import json
import subprocess
import sys

import pytest

from locproj.cli import main
from locproj.grassmann import WeightList, euler_report
from locproj.models import get_spec, hilbert_grading, jtp_check, spec_to_json, vanishing_lemma_check
from locproj.projection import Cutoffs, check_conditions, verify_projection


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--json")
    return code, json.loads(out.out)


def test_verify_hilbert(capsys):
    code, out = run(capsys, "verify", "--example", "hilbert-plane", "--n", "2", "--m", "2", "--order", "10")
    assert code == 0 and "match" in out.out


def test_verify_affine_default(capsys):
    code, out = run(capsys, "verify", "--example", "affine-sl2", "--order", "6")
    assert code == 0
    assert "rhs: 1, 1, 2, 3, 5, 7, 11" in out.out


def test_verify_bad_spec(tmp_path, capsys):
    data = spec_to_json(get_spec("cusp-curve"))
    data["C"].append({"coeff": "1", "exps": [0]})
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, out = run(capsys, "verify", "--spec", str(path))
    assert code == 2 and "hypotheses fail: c" in out.out


def test_verify_curve_m0_mismatch(capsys):
    code, out = run(capsys, "verify", "--example", "cusp-curve", "--m", "0")
    assert code == 2 and "MISMATCH (first degree 8)" in out.out


def test_verify_no_stabilization(capsys):
    code, rep = run_json(capsys, "verify", "--example", "hilbert-plane", "--budget", "1")
    assert code == 3 and rep["error"] == "no-stabilization" and len(rep["trace"]) == 2


def test_verify_is_thin_adapter(capsys):
    code, rep = run_json(capsys, "verify", "--example", "hilbert-plane", "--n", "2", "--m", "1", "--order", "8")
    lib = verify_projection(
        get_spec("hilbert-plane"), n=2, m=1, order=8, grading=hilbert_grading(8), cutoffs=Cutoffs(8, 8, 8, 8, 40)
    )
    assert rep == json.loads(lib.dumps())
    assert code == lib.exit_code()


def test_json_is_byte_identical(capsys):
    args = ("verify", "--example", "cusp-curve", "--n", "2", "--m", "1", "--json")
    main(list(args))
    a = capsys.readouterr().out
    main(list(args))
    b = capsys.readouterr().out
    assert a == b


def test_euler(capsys):
    code, rep = run_json(capsys, "euler", "--weights", "0,1", "--m", "3", "--cross-check")
    assert code == 0 and rep["chi"] == {"0": "1", "1": "1", "2": "1", "3": "1"} and rep["match"]
    assert rep == euler_report(WeightList([(0,), (1,)]), 1, 3, None, None, 10, True)


def test_euler_structure_sheaf(capsys):
    code, rep = run_json(capsys, "euler", "--weights", "[[0,0],[1,0],[0,1],[2,1]]", "--n", "2", "--grading", "1,5")
    assert code == 0 and rep["chi"] == {"0": "1"}


def test_euler_degenerate_grading(capsys):
    code, out = run(capsys, "euler", "--weights", "[[1,0],[0,1]]", "--grading", "1,1")
    assert code == 64 and "--grading" in out.err


def test_lemma(capsys):
    code, rep = run_json(capsys, "lemma", "--n", "2", "--k", "4")
    assert code == 0 and rep == vanishing_lemma_check(2, 4)
    code, rep = run_json(capsys, "lemma", "--n", "0")
    assert code == 0 and rep["subsets"] == 1


def test_conditions(capsys):
    code, rep = run_json(capsys, "conditions", "--example", "cusp-curve")
    assert code == 0 and rep == check_conditions(get_spec("cusp-curve"), W=40)


def test_jtp(capsys):
    code, rep = run_json(capsys, "jtp", "--order", "8", "--range", "3")
    assert code == 0 and rep == jtp_check(3, 8)
    code, _ = run(capsys, "jtp", "--order", "8", "--range", "0")
    assert code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--example", "nope"],
        ["verify", "--grading", "0,0"],
        ["verify", "--grading", "a,b"],
        ["verify", "--spec", "/nonexistent.json"],
        ["verify", "--example", "cusp-curve", "--spec", "x.json"],
        ["verify", "--f", "not json"],
        ["verify", "--budget", "0"],
        ["euler"],
        ["frobnicate"],
    ],
)
def test_config_errors(capsys, argv):
    code, _ = run(capsys, *argv)
    assert code == 64


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "locproj.cli", "jtp", "--order", "4", "--range", "2"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0 and out.stdout.strip().endswith("match")
