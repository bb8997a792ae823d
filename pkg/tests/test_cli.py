from __future__ import annotations

import json

import pytest

from algebroidkit import poisson_cotangent, semidirect_product
from algebroidkit.cli import run_command
from algebroidkit.fileformat import parse_file

from conftest import corpus_path


def run(capsys, *argv):
    code = run_command([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_tangent_plane(capsys):
    code, out, _ = run(capsys, "check", corpus_path("tangent_r2"), "--suite", "all")
    assert code == 0
    assert out.count("  PASS  ") == 3
    assert out.splitlines()[-1] == "overall: PASS"


def test_check_broken_so3_names_the_pair(capsys):
    code, out, _ = run(capsys, "check", corpus_path("broken_so3"))
    assert code == 1
    line = next(l for l in out.splitlines() if "anchor_hom" in l)
    assert "FAIL" in line and "pair (1,2)" in line and "2*x" in line


def test_build_poisson_then_check(capsys, tmp_path):
    out_file = tmp_path / "out.json"
    code, _, _ = run(capsys, "build", "poisson", corpus_path("lie_poisson_so3"), "-o", out_file)
    assert code == 0
    assert run(capsys, "check", out_file)[0] == 0
    built, _ = poisson_cotangent(parse_file(corpus_path("lie_poisson_so3"), "bivector"))
    assert parse_file(out_file, "algebroid") == built


def test_build_transformation_reports_failures(capsys, tmp_path):
    code, out, _ = run(capsys, "build", "transformation", corpus_path("so3_action_doubled"), "-o", tmp_path / "t.json")
    assert code == 1 and "FAIL  anchor_hom" in out
    assert (tmp_path / "t.json").exists()


def test_build_semidirect_needs_force_for_invalid_actions(capsys, tmp_path):
    target = tmp_path / "p.json"
    code, out, _ = run(capsys, "build", "semidirect", corpus_path("perturbed_family"), "-o", target)
    assert code == 1 and not target.exists()
    assert "FAIL  action_family" in out
    code, _, _ = run(capsys, "build", "semidirect", corpus_path("perturbed_family"), "-o", target, "--force")
    assert code == 1 and target.exists()


def test_build_semidirect_round_trip(capsys, tmp_path):
    target = tmp_path / "p.json"
    assert run(capsys, "build", "semidirect", corpus_path("action_tangent_on_so3"), "-o", target)[0] == 0
    expected = semidirect_product(parse_file(corpus_path("action_tangent_on_so3"), "action"))
    assert parse_file(target, "algebroid") == expected


def test_other_checks(capsys):
    assert run(capsys, "check-morphism", corpus_path("morphism_anchor_so3"))[0] == 0
    assert run(capsys, "check-morphism", corpus_path("morphism_so3_sign_corrupt"))[0] == 1
    assert run(capsys, "check-derivation", corpus_path("derivation_partial_connection"))[0] == 0
    assert run(capsys, "check-derivation", corpus_path("derivation_heisenberg_dx"))[0] == 1
    assert run(capsys, "check-action", corpus_path("action_projectable"))[0] == 0
    assert run(capsys, "check-action", corpus_path("perturbed_projectable"))[0] == 1


def test_curvature_output(capsys):
    code, out, _ = run(capsys, "curvature", corpus_path("extension_heisenberg"))
    assert code == 1
    assert out.splitlines()[0] == "kappa(1,2) = {f: 1}"
    code, out, _ = run(capsys, "curvature", corpus_path("extension_heisenberg"), "--json")
    data = json.loads(out)
    assert data["kappa"] == {"1,2": {"f": "1"}}
    assert data["overall"] == "FAIL"


def test_reconstruct(capsys, tmp_path):
    target = tmp_path / "r.json"
    assert run(capsys, "reconstruct", corpus_path("extension_atiyah"), "-o", target)[0] == 0
    assert parse_file(target, "algebroid") == parse_file(corpus_path("extension_atiyah"), "extension").total
    code, _, err = run(capsys, "reconstruct", corpus_path("extension_heisenberg"), "-o", target)
    assert code == 1 and "curvature" in err


def test_json_report_shape(capsys):
    code, out, _ = run(capsys, "check", corpus_path("broken_tangent_r2"), "--json")
    data = json.loads(out)
    assert code == 1
    assert data["subject"] == "broken_tangent_r2"
    assert [i["check"] for i in data["items"]] == ["anchor_hom", "jacobi_frame", "jacobi_random"]
    assert all(i["witness"] for i in data["items"] if i["verdict"] == "FAIL")


def test_reports_are_deterministic(capsys):
    first = run(capsys, "check", corpus_path("broken_heisenberg_r1"), "--json")
    second = run(capsys, "check", corpus_path("broken_heisenberg_r1"), "--json")
    assert first == second


def _random_seed(capsys, *extra):
    _, out, _ = run(capsys, "check", corpus_path("broken_so3"), "--suite", "jacobi", "--json", *extra)
    return json.loads(out)["items"][1]["witness"]["seed"]


def test_seed_precedence(capsys, monkeypatch):
    monkeypatch.delenv("ALGEBROIDKIT_SEED", raising=False)
    assert _random_seed(capsys) == 42
    monkeypatch.setenv("ALGEBROIDKIT_SEED", "7")
    assert _random_seed(capsys) == 7
    assert _random_seed(capsys, "--seed", "3") == 3
    monkeypatch.setenv("ALGEBROIDKIT_SEED", "seven")
    code, _, err = run(capsys, "check", corpus_path("tangent_r2"))
    assert code == 2 and "ALGEBROIDKIT_SEED" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        [],
        ["check"],
        ["check", "x.json", "--suite", "some"],
        ["build", "poisson", "x.json"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "usage" in err


def test_parse_errors_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"chart": ["x"], "rank": 1, "frame": ["a"], "anchor": [["x^-1"]], "structure": {}}')
    code, out, err = run(capsys, "check", bad)
    assert code == 2 and out == ""
    assert "grammar error" in err
    assert run(capsys, "check-action", tmp_path / "missing.json")[0] == 2


def test_corpus_run(capsys):
    code, out, _ = run(capsys, "corpus", "run")
    assert code == 0
    assert out.splitlines()[-1].endswith("PASS")
