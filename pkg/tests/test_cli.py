"""Tests for the command-line interface: determinism of the emitted
artifacts, exit codes, the expansion cache, and the display layouts."""

import json
import os

from fgltransfer.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_pseries_text(capsys):
    code, out = run(capsys, "pseries", "-p", "2", "-s", "1", "-q", "2")
    assert code == 0
    assert out.strip() == "v_1*z^2"


def test_fgl_json_deterministic(capsys):
    argv = ["fgl", "--theory", "morava", "-p", "2", "-s", "1",
            "--order", "6", "--format", "json", "--check-axioms"]
    code1, out1 = run(capsys, *argv)
    code2, out2 = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["theory"] == "morava"
    assert payload["terms"]


def test_fgl_cache_roundtrip(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("FGL_CACHE_DIR", str(tmp_path))
    argv = ["fgl", "--theory", "morava", "-p", "2", "-s", "1",
            "--order", "5", "--format", "json"]
    code1, out1 = run(capsys, *argv)
    assert code1 == 0
    cached = [f for f in os.listdir(tmp_path) if f.endswith(".json")]
    assert len(cached) == 1
    code2, out2 = run(capsys, *argv)
    assert code2 == 0
    assert out1 == out2


def test_lambda_paper_layout(capsys):
    code, out = run(capsys, "lambda", "-p", "3", "-s", "2", "-k", "1",
                    "--format", "paper-layout")
    assert code == 0
    assert out.strip() == "sigma_1 = v_2*y^3*sigma_3 + v_2*y^4*x"


def test_lambda_json(capsys):
    code, out = run(capsys, "lambda", "-p", "3", "-s", "2", "-k", "1")
    assert code == 0
    payload = json.loads(out)
    assert payload["rows"] == [
        {"i": 1, "terms": [{"vars": {"z": 6},
                            "coeff": [{"mod_p": 2, "v_exp": 1}]}]}]


def test_euler_trivial_group(capsys):
    code, out = run(capsys, "euler", "cyclic", "-q", "1", "-s", "1")
    assert code == 0
    assert out.strip() == "1"


def test_euler_sigma_p(capsys):
    code, out = run(capsys, "euler", "sigma-p", "-p", "3", "-s", "2")
    assert code == 0
    assert out.strip() == "2*v_2*y^4"


def test_transfer_output(capsys):
    code, out = run(capsys, "transfer", "-p", "3", "-s", "2", "-k", "1")
    assert code == 0
    assert out.startswith("Tr*(omega_1) = c1")


def test_basis_rank(capsys):
    code, out = run(capsys, "basis", "-p", "2", "-s", "1", "-n", "2",
                    "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["rank"] == 14
    assert len(payload["basis"]) == 14


def test_validation_exit_code(capsys):
    code, _ = run(capsys, "lambda", "-p", "3", "-s", "2", "-k", "5")
    assert code == 2
    code, _ = run(capsys, "euler", "semidirect", "-p", "3", "-n", "3",
                  "-s", "1")
    assert code == 2


def test_oracle_failure_exit_code(capsys):
    code, _ = run(capsys, "compare-oracle", "--oracle-cmd", "false",
                  "--only", "pseries-bp-2")
    assert code == 3
