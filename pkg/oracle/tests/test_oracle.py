"""Oracle self-tests plus the differential run against the engine."""

import json
import subprocess
import sys

import pytest

fgl_oracle = pytest.importorskip("fgl_oracle")


def test_fgl_unit_and_symmetry():
    F = fgl_oracle.morava_fgl_dict(3, 2, order=20)
    assert {m: c for m, c in F.items() if m[1] == 0} == {(1, 0, 0): 1}
    assert {m: c for m, c in F.items() if m[0] == 0} == {(0, 1, 0): 1}
    for (ex, ey, ev), c in F.items():
        assert F[(ey, ex, ev)] == c


def test_fgl_grading():
    # with |v| = -2(p^s - 1) every coefficient of F sits in degree 2
    for (p, s, order) in [(2, 2, 16), (3, 1, 12)]:
        terms = fgl_oracle.morava_fgl_json(p, s, order)
        for term in terms:
            total = sum(term["vars"].values())
            for entry in term["coeff"]:
                assert total - entry["v_exp"] * (p ** s - 1) == 1


def test_fgl_leading_terms_p2():
    terms = fgl_oracle.morava_fgl_json(2, 1, 8)
    assert terms[0] == {"vars": {"y": 1},
                        "coeff": [{"mod_p": 1, "v_exp": 0}]}
    assert terms[1] == {"vars": {"x": 1},
                        "coeff": [{"mod_p": 1, "v_exp": 0}]}
    assert terms[2] == {"vars": {"x": 1, "y": 1},
                        "coeff": [{"mod_p": 1, "v_exp": 1}]}


def test_pseries_leading_terms():
    terms = fgl_oracle.bp_q_series_json(2, 3, 2, 8)
    assert terms[0] == {"vars": {"z": 1},
                        "coeff": [{"num": "2", "den": "1", "gens": {}}]}
    assert terms[1] == {"vars": {"z": 2},
                        "coeff": [{"num": "-1", "den": "1",
                                   "gens": {"v_1": 1}}]}
    # the whole q-series is 2-integral in the v-basis
    for term in terms:
        for entry in term["coeff"]:
            assert int(entry["den"]) % 2 != 0


def test_sigma_2_1_exact():
    # sigma_1 = x + F(x, z) over K(1) at p = 2 with z^2 = 0
    terms = fgl_oracle.sigma_expansion_json(2, 1, 1)
    assert terms == [
        {"vars": {"z": 1}, "coeff": [{"mod_p": 1, "v_exp": 0}]},
        {"vars": {"x": 1, "z": 1}, "coeff": [{"mod_p": 1, "v_exp": 1}]},
        {"vars": {"x": 2, "z": 1}, "coeff": [{"mod_p": 1, "v_exp": 2}]},
        {"vars": {"x": 4, "z": 1}, "coeff": [{"mod_p": 1, "v_exp": 4}]},
    ]


def test_sigma_top_is_product_of_args():
    # sigma_p is divisible by x, so every term has x-exponent >= 1
    terms = fgl_oracle.sigma_expansion_json(3, 1, 3)
    assert all(t["vars"].get("x", 0) >= 1 for t in terms)


def test_run_job_verdicts():
    job = {"id": "a", "kind": "sigma", "p": 2, "s": 1, "k": 1}
    result = fgl_oracle.run_job(dict(job))
    assert result["verdict"] == "computed"
    job["expected"] = result["terms"]
    assert fgl_oracle.run_job(dict(job))["verdict"] == "match"
    job["expected"] = "[]"
    assert fgl_oracle.run_job(dict(job))["verdict"] == "mismatch"
    assert fgl_oracle.run_job({"id": "b", "kind": "?"})["verdict"] \
        == "skipped"


def test_stdin_stdout_protocol():
    config = {"jobs": [{"id": "t", "kind": "fgl", "theory": "morava",
                        "p": 2, "s": 1, "order": 4}]}
    proc = subprocess.run([sys.executable, "-m", "fgl_oracle"],
                          input=json.dumps(config), capture_output=True,
                          text=True, check=True)
    report = json.loads(proc.stdout)
    assert report["results"][0]["id"] == "t"
    assert report["results"][0]["verdict"] == "computed"


def test_differential_suite_matches_engine():
    proc = subprocess.run(
        [sys.executable, "-m", "fgltransfer.cli", "compare-oracle"],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "all 11 quantities match byte-for-byte" in proc.stdout
