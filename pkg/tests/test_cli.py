import json

import pytest

from asailab.cli import main, parse_complex, parse_hecke_expression
from asailab import heckealg


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_complex():
    assert parse_complex("i") == 1j
    assert parse_complex("2i") == 2j
    assert parse_complex("-i") == -1j
    assert parse_complex("1/2+3/2i") == 0.5 + 1.5j
    assert parse_complex("3") == 3 + 0j
    assert parse_complex("-1/4-2i") == -0.25 - 2j


def test_euler_factor_command(capsys):
    code, out, _ = run_cli(capsys, "euler-factor", "--d", "5", "--ell", "3",
                           "--lambda", "5", "--w", "2")
    assert code == 0
    rep = json.loads(out)
    assert rep["result"]["coefficients"] == ["1", "-5", "0", "45", "-81"]
    assert rep["result"]["agree"] is True
    assert rep["command"] == "euler-factor"
    assert "precision" in rep["provenance"]


def test_kronecker_command_and_exit(capsys):
    code, out, _ = run_cli(capsys, "kronecker-check", "--alpha", "1/5", "--tau", "i")
    assert code == 0
    rep = json.loads(out)
    assert rep["result"]["residual"] < 1e-8


def test_nez_command(capsys):
    code, out, _ = run_cli(capsys, "nez", "--p", "5", "--k", "1", "--kprime", "0",
                           "--alpha-p", "2", "--alpha-q", "3")
    assert code == 0
    assert json.loads(out)["result"]["nez"] is True
    # failing NEZ with --require exits 2
    code, out, _ = run_cli(capsys, "nez", "--p", "5", "--k", "0", "--kprime", "0",
                           "--alpha-p", "2", "--alpha-q", "2", "--require")
    assert code == 2
    assert json.loads(out)["result"]["nez"] is False


def test_usage_errors(capsys):
    code, _, err = run_cli(capsys, "frobulate")
    assert code == 64
    code, _, err = run_cli(capsys, "euler-factor", "--d", "5")
    assert code == 64
    code, _, _ = run_cli(capsys)
    assert code == 64


def test_validation_error_exit(capsys):
    # non-squarefree d is a validation failure
    code, _, err = run_cli(capsys, "field-info", "--d", "12")
    assert code == 1
    assert json.loads(err)["error"] == "validation"


def test_hypothesis_error_exit(capsys):
    # d=3, ell=11 split but not narrowly principal
    code, _, err = run_cli(capsys, "norm-factor", "--d", "3", "--ell", "11",
                           "--m", "7", "--lambda", "1", "--lambda", "1")
    assert code == 2
    assert json.loads(err)["error"] == "hypothesis"
    # pole of the weight-0 Eisenstein series
    code, _, err = run_cli(capsys, "eisenstein", "--k", "0", "--alpha", "1/5",
                           "--tau", "i", "--s", "1")
    assert code == 2


def test_norm_factor_fixture(capsys):
    code, out, _ = run_cli(capsys, "norm-factor", "--d", "5", "--ell", "3",
                           "--j", "0", "--m", "5", "--lambda", "5")
    assert code == 0
    rep = json.loads(out)
    assert rep["result"]["element"] == {"1": "5", "2": "-2", "3": "2", "4": "-5"}


def test_reports_byte_stable(capsys, tmp_path):
    argv = ["constants", "--k", "2", "--kprime", "2", "--j", "1", "--disc", "8"]
    _, out1, _ = run_cli(capsys, *argv)
    _, out2, _ = run_cli(capsys, *argv)
    assert out1 == out2
    # --out writes the same bytes
    path = tmp_path / "r.json"
    run_cli(capsys, "--out", str(path), *argv)
    assert path.read_text() == out1


def test_field_info_command(capsys):
    code, out, _ = run_cli(capsys, "field-info", "--d", "5", "--ell", "11")
    rep = json.loads(out)
    assert code == 0
    assert rep["result"]["discriminant"] == 5
    assert rep["result"]["splitting"]["kind"] == "split"
    assert len(rep["result"]["splitting"]["totally_positive_generators"]) == 2


def test_gauss_sum_command(capsys):
    code, out, _ = run_cli(capsys, "gauss-sum", "--p", "5", "--r", "1", "--eta", "2")
    rep = json.loads(out)
    assert code == 0
    assert rep["result"]["norm_squared"] == "5/1"
    assert abs(rep["result"]["numeric"][0] - 5 ** 0.5) < 1e-10


def test_pr_factor_command(capsys):
    code, out, _ = run_cli(capsys, "pr-factor", "--p", "5", "--j", "0", "--r", "0",
                           "--kprime", "0", "--a-value", "2")
    rep = json.loads(out)
    assert code == 0
    assert rep["result"]["numeric"][0] == pytest.approx(5 / 6)
    assert rep["result"]["tag"] == "log"


def test_hecke_identity_command(capsys):
    labels = json.dumps({"l1": {"norm": 11}, "l1b": {"norm": 11}})
    code, out, _ = run_cli(
        capsys, "hecke-identity",
        "--expr", "T(l1)^2*T(l1b)^2 - T(l1^2*l1b^2) - 11^2*S(l1*l1b)",
        "--expr2", "11*D(l1)*R(l1)*T(l1b)^2 + 11*D(l1b)*R(l1b)*T(l1)^2"
                   " - 2*11^2*D(l1*l1b)*R(l1*l1b)",
        "--labels", labels)
    rep = json.loads(out)
    assert code == 0 and rep["result"]["equal"] is True
    code, out, _ = run_cli(capsys, "hecke-identity", "--expr", "T(l1)",
                           "--expr2", "T(l1b)", "--labels", labels)
    assert code == 2


def test_grammar_parser():
    labels = {"l1": heckealg.PrimeLabel("l1", 11), "l1b": heckealg.PrimeLabel("l1b", 11)}
    expr = parse_hecke_expression("T(l1)^2 - T(l1^2) - 11*D(l1)*R(l1)", labels)
    # T(l1)^2 - (T(l1)^2 - 11 S(l1)) - 11 S(l1) = 0
    assert expr.normalize() == heckealg.HeckePolynomial()
    with pytest.raises(heckealg.HeckeAlgError):
        parse_hecke_expression("T(xx)", labels)
    with pytest.raises(heckealg.HeckeAlgError):
        parse_hecke_expression("T(l1", labels)


def test_mellin_command(capsys):
    code, out, _ = run_cli(capsys, "mellin-check", "--delta", "--d", "5",
                           "--bound", "300", "--sprime", "14", "--n-max", "200")
    rep = json.loads(out)
    assert code == 0
    assert rep["result"]["relative_residual"] < 1e-4


def test_lfun_command(capsys):
    code, out, _ = run_cli(capsys, "lfun", "--delta", "--bound", "600",
                           "--s", "14", "--n-cutoff", "600", "--ell-cutoff", "200")
    rep = json.loads(out)
    assert code == 0
    assert rep["result"]["relative_difference"] < 1e-4


def test_precision_env_override(capsys, monkeypatch):
    monkeypatch.setenv("ASAILAB_PRECISION", "96")
    code, out, _ = run_cli(capsys, "constants", "--k", "0", "--kprime", "0",
                           "--j", "0", "--disc", "5")
    rep = json.loads(out)
    assert rep["provenance"]["precision"] == 96


def test_form_validate_roundtrip(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "base-change", "--d", "5", "--bound", "60",
                           "--save", str(tmp_path / "f.json"))
    assert code == 0
    code, out, _ = run_cli(capsys, "form-validate", "--form", str(tmp_path / "f.json"),
                           "--bound", "50")
    rep = json.loads(out)
    assert code == 0 and rep["result"]["valid"] is True
