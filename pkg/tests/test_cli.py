import io
import json
from pathlib import Path

import pytest

from hwtheta.cli import run_cli

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for var in ("HWTHETA_CONFIG", "HWTHETA_SEED", "HWTHETA_TRIALS", "HWTHETA_STEPS", "HWTHETA_LOG_LEVEL"):
        monkeypatch.delenv(var, raising=False)


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def golden(name):
    return (GOLDEN / name).read_text(encoding="utf8")


def test_deltak_then_theta(tmp_path):
    code, out, _ = run("barbell", "deltak", "--k", 4)
    assert code == 0
    assert out == golden("deltak_4.txt")
    doc = tmp_path / "d4.txt"
    doc.write_text(out, encoding="utf8")
    assert run("barbell", "theta", "--manifold", doc, "--barbell", doc) == (0, "0\n", "")


@pytest.mark.parametrize("k", [1, 2, 10])
def test_theta_of_delta_k_flag(k):
    assert run("barbell", "theta", "--k", k) == (0, "0\n", "")
    assert run("barbell", "theta-g", "--k", k) == (0, "0\n", "")


def test_theta_golden():
    args = ("--manifold", DATA / "free2.txt", "--barbell", DATA / "free2_barbell.txt")
    assert run("barbell", "theta", *args) == (0, golden("theta_free2.txt"), "")
    assert run("barbell", "theta-g", *args) == (0, golden("theta_g_free2.txt"), "")


def test_theta_cerf_matches_theta():
    code, out, _ = run("barbell", "theta-cerf", "--manifold", DATA / "free2.txt",
                       "--expr", "(0, (e0 @ a*b))[a*b] + (0, 2*(e0 @ b^-1*a) - (e0 @ 1))[b^-1]")
    assert code == 0
    assert out == golden("theta_free2.txt")


def test_theta_special():
    code, out, _ = run("barbell", "theta-special", "--manifold", DATA / "free2.txt",
                       "--sigma", "(e0 @ 1)", "--gammas", "a; b*a*b^-1; b")
    assert code == 0
    assert out == "(0, (e0 @ 1) + (e0 @ b^-1))[a] + (0, (e0 @ 1))[b]\n"


def test_wh_normalize_golden():
    code, out, _ = run("wh", "normalize", "--manifold", DATA / "free2.txt", "--expr", "(0, (e0 @ 1))[b*a]")
    assert (code, out) == (0, golden("normalize_free2.txt"))


def test_wh_eq_exit_codes():
    m = DATA / "free2.txt"
    assert run("wh", "eq", "--manifold", m, "--lhs", "(0, (e0 @ 1))[b*a]", "--rhs", "(0, (e0 @ a))[a*b]") == (
        0, "equal\n", "")
    assert run("wh", "eq", "--manifold", m, "--lhs", "(1, 0)[a]", "--rhs", "0") == (1, "not-equal\n", "")


def test_wh_bar():
    m = DATA / "mixed.txt"
    assert run("wh", "bar", "--manifold", m, "--expr", "(0, (e0 @ 1))[a]") == (0, "(1, (e0 @ 1))[a^-1]\n", "")


def test_realize_golden(tmp_path):
    code, out, _ = run("barbell", "realize", "--manifold", DATA / "free2.txt", "--sigma", "(e0 @ b)",
                       "--alpha", "a*b")
    assert (code, out) == (0, golden("realize_free2.txt"))
    doc = tmp_path / "r.txt"
    doc.write_text(out, encoding="utf8")
    assert run("barbell", "theta", "--manifold", doc, "--barbell", doc) == (0, "(0, (e0 @ b))[a*b]\n", "")


def test_add_meridians_keeps_theta(tmp_path):
    code, out, _ = run("barbell", "add-meridians", "--manifold", DATA / "free2.txt",
                       "--barbell", DATA / "free2_barbell.txt", "--n", 2, "--deltas", "a;b^3*a")
    assert code == 0
    assert out.count("circle:") == 4
    doc = tmp_path / "m.txt"
    doc.write_text(out, encoding="utf8")
    assert run("barbell", "theta", "--manifold", doc, "--barbell", doc)[1] == golden("theta_free2.txt")


def test_add_meridians_count_mismatch():
    code, out, err = run("barbell", "add-meridians", "--manifold", DATA / "free2.txt",
                         "--barbell", DATA / "free2_barbell.txt", "--n", 3, "--deltas", "a")
    assert (code, out) == (2, "")
    assert err.startswith("error:")


def test_realize_sum(tmp_path):
    expr = "(0, (e0 @ 1))[a*b] + (0, 3*(e0 @ b))[a]"
    code, out, _ = run("barbell", "realize-sum", "--manifold", DATA / "free2.txt", "--expr", expr)
    assert code == 0
    doc = tmp_path / "sum.txt"
    doc.write_text(out, encoding="utf8")
    _, theta_out, _ = run("barbell", "theta", "--manifold", doc, "--barbell", doc)
    _, nf_out, _ = run("wh", "normalize", "--manifold", DATA / "free2.txt", "--expr", expr)
    assert theta_out == nf_out

    code, out, err = run("barbell", "realize-sum", "--manifold", DATA / "free2.txt", "--expr", "(1, 0)[a]")
    assert code == 2 and out == "" and "Z2" in err


def test_oracle_check():
    code, out, _ = run("oracle", "check", "--m", 3, "--rank", 1, "--trials", 40, "--seed", 7)
    assert (code, out) == (0, "agree=40/40\n")


def test_oracle_invariants():
    assert run("oracle", "invariants", "--m", 2, "--rank", 1) == (0, golden("invariants_2_1.txt"), "")
    assert run("oracle", "invariants", "--m", 2)[1] == "free-rank=0 torsion=2\n"


def test_oracle_walk_is_deterministic():
    args = ("oracle", "walk", "--manifold", DATA / "free2.txt", "--expr", "(1, (e0 @ a))[a*b]",
            "--steps", 25, "--seed", 3, "--json")
    first, second = run(*args), run(*args)
    assert first == second
    payload = json.loads(first[1])
    assert payload["normal_form_unchanged"] is True
    assert payload["steps"] == 25


def test_json_output():
    code, out, _ = run("barbell", "theta", "--k", 3, "--json")
    payload = json.loads(out)
    assert code == 0
    assert payload == {"normal_form": "0", "zero": True, "entries": [], "sigma_invariant": 0, "circles": 1}


def test_parse_errors_exit_2():
    code, out, err = run("wh", "normalize", "--manifold", DATA / "free2.txt", "--expr", "(0, (e0 @ c))[a]")
    assert (code, out) == (2, "")
    assert err == "error: --expr: unknown generator 'c' (line 1, column 11)\n"


def test_bad_manifold_file(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("group: Z(a)*Zmod(3)(b)\nmodule: zero\nw1: b=-1\n", encoding="utf8")
    code, out, err = run("wh", "normalize", "--manifold", bad, "--expr", "0")
    assert (code, out) == (2, "")
    assert "line 3, column 7" in err and str(bad) in err

    code, _, err = run("wh", "normalize", "--manifold", tmp_path / "missing.txt", "--expr", "0")
    assert code == 2 and "cannot read" in err


def test_usage_errors_exit_2():
    assert run()[0] == 2
    assert run("wh")[0] == 2
    assert run("barbell", "deltak", "--k", "x")[0] == 2
    assert run("barbell", "deltak", "--k", 0)[0] == 2
    assert run("wh", "normalize", "--expr", "0")[0] == 2


def test_config_file_sets_defaults(tmp_path):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("trials: 5\nseed: 1\n", encoding="utf8")
    assert run("oracle", "check", "--m", 2, "--config", cfg)[1] == "agree=5/5\n"

    bad = tmp_path / "bad.yaml"
    bad.write_text("trails: 5\n", encoding="utf8")
    code, _, err = run("oracle", "check", "--m", 2, "--config", bad)
    assert code == 2 and "unknown key 'trails'" in err


def test_config_sets_random_term_count(tmp_path):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("trials: 8\nrandom_terms: 1\n", encoding="utf8")
    code, out, _ = run("oracle", "check", "--m", 3, "--rank", 1, "--config", cfg, "--json")
    assert code == 0
    assert json.loads(out)["agree"] == 8


def test_verbose_logs_go_to_the_given_stderr():
    code, out, err = run("wh", "normalize", "--manifold", DATA / "free2.txt", "--expr", "0", "-v")
    assert (code, out) == (0, "0\n")
    assert "[cli] running wh normalize" in err
    assert "[cli] manifold" in err
    # the next quiet run gets a fresh, empty stream
    assert run("wh", "normalize", "--manifold", DATA / "free2.txt", "--expr", "0") == (0, "0\n", "")
