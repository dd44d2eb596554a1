import json
import random

import pytest

import create_acceptance_report
from hwtheta.acceptance import (
    CRITERIA,
    DEFAULT_SIZES,
    RandomSizes,
    free_manifold,
    oracle_agreement,
    performance,
    random_descriptor,
    run_criterion,
)
from hwtheta.config import load_config
from hwtheta.oracle import FiniteSetup

QUICK = {
    "delta_vanishing": 10,
    "realization": 20,
    "involution": 40,
    "relation_soundness": 20,
    "infinite_rank": 10,
    "meridian_vanishing": 20,
    "g_pairing": 20,
}


@pytest.mark.parametrize("name,trials", sorted(QUICK.items()))
def test_quick_criteria(name, trials):
    check = next(c for c in CRITERIA if c.__name__ == name)
    result = run_criterion(check, seed=3, trials=trials)
    assert result.ok, result
    assert result.seconds >= 0


def test_quick_oracle_agreement():
    result = oracle_agreement(seed=5, trials=10, setups=(FiniteSetup(2, 1), FiniteSetup(3, 0)))
    assert (result.passed, result.trials) == (20, 20)
    assert "Z/2 rank 1: agree=10/10" in result.detail


def test_small_performance_run():
    result = performance(seed=1, trials=200, limit=30.0)
    assert result.ok
    assert result.to_dict()["ok"] is True


def test_report_script(tmp_path):
    out = tmp_path / "report.json"
    code = create_acceptance_report.main(
        ["--only", "delta_vanishing", "involution", "--scale", "0.05", "--out", str(out), "--seed", "2"]
    )
    assert code == 0
    report = json.loads(out.read_text(encoding="utf8"))
    assert report["passed"] is True and report["seed"] == 2
    assert [c["name"] for c in report["criteria"]] == ["delta_k vanishing", "involution"]
    assert report["criteria"][1]["trials"] == 25


def test_report_uses_configured_sizes(tmp_path):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("random_word_length: 3\nrandom_terms: 2\nsteps: 5\n", encoding="utf8")
    out = tmp_path / "report.json"
    argv = ["--config", str(cfg), "--only", "relation_soundness", "meridian_vanishing", "--scale", "0.02", "--out", str(out)]
    assert create_acceptance_report.main(argv) == 0
    report = json.loads(out.read_text(encoding="utf8"))
    assert report["sizes"] == {"word_length": 3, "terms": 2, "steps": 5, "walk_word_length": 4}


def test_default_sizes_match_config_defaults():
    assert RandomSizes.from_config(load_config(env={})) == DEFAULT_SIZES


def test_random_descriptor_respects_sizes():
    rng = random.Random(1)
    sizes = RandomSizes(word_length=1, terms=1)
    for _ in range(20):
        b = random_descriptor(free_manifold(), rng, sizes)
        assert all(len(c.delta) <= 1 and len(c.disk.terms) <= 1 for c in b.circles)


def test_report_script_rejects_unknown_check(tmp_path):
    assert create_acceptance_report.main(["--only", "nonsense", "--out", str(tmp_path / "r.json")]) == 2


@pytest.mark.slow
@pytest.mark.parametrize("check", CRITERIA, ids=lambda c: c.__name__)
def test_full_criteria(check):
    trials = create_acceptance_report.DEFAULT_TRIALS[check.__name__]
    result = run_criterion(check, seed=7, trials=trials)
    assert result.ok, result.detail
