import dataclasses
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from randcantor import mc_harness
from randcantor.closed_sets import decode_tree4
from randcantor.errors import ExperimentAborted, NeedMoreCode
from randcantor.mc_harness import (BRACKETED, CATALOG, OUTSIDE, WITHIN, ExperimentSpec,
                                   check_path_pushforward, check_zeros_pushforward,
                                   gw_survival, gw_tree_distribution, mean_ci, run_experiment,
                                   verdict_for, wilson_ci)


def test_wilson_reference_value():
    lo, hi = wilson_ci(50, 100, 0.95)
    assert abs(lo - 0.404) < 1e-3 and abs(hi - 0.596) < 1e-3


def test_wilson_boundaries():
    assert wilson_ci(0, 10)[0] == 0.0
    assert wilson_ci(10, 10)[1] == 1.0
    lo, hi = wilson_ci(0, 10)
    assert 0 < hi < 1
    for bad in ((1, 0), (-1, 5), (6, 5)):
        with pytest.raises(ValueError):
            wilson_ci(*bad)
    with pytest.raises(ValueError):
        wilson_ci(1, 2, 1.0)


@settings(max_examples=200)
@given(st.integers(1, 10_000), st.data())
def test_wilson_contains_phat(n, data):
    s = data.draw(st.integers(0, n))
    lo, hi = wilson_ci(s, n, 0.99)
    assert 0 <= lo <= s / n <= hi <= 1


def test_mean_ci_from_integer_sums():
    xs = [1, 2, 3, 4]
    m, (lo, hi) = mean_ci(sum(xs), sum(x * x for x in xs), 4, 2, 0.95)
    assert m == 1.25 and lo < m < hi


def test_verdict_rules():
    assert verdict_for([(0.4, 0.6)], (0.5, 0.5)) == WITHIN
    assert verdict_for([(0.4, 0.6)], (0.7, 0.7)) == OUTSIDE
    assert verdict_for([(0.4, 0.6)], (0.55, 0.9)) == BRACKETED
    assert verdict_for([(0.1, 0.2), (0.5, 0.6)], (0.3, 0.4)) == BRACKETED
    assert verdict_for([(0.1, 0.2), (0.5, 0.6)], (0.7, 0.8)) == OUTSIDE
    assert verdict_for([(0.1, 0.35), (0.5, 0.6)], (0.3, 0.55)) == BRACKETED
    assert verdict_for([(0.1, 0.2), (0.5, 0.6)], (0.15, 0.15)) == BRACKETED


def test_record_schema_and_json():
    rec = run_experiment(ExperimentSpec("hit_prob", trials=300, params={"target": "01"}))
    d = json.loads(rec.to_json())
    for key in ("name", "params", "trials", "depth", "seed", "estimate", "ci",
                "reference", "verdict", "failures", "bracket"):
        assert key in d
    lower, upper = d["bracket"]["lower"], d["bracket"]["upper"]
    assert lower["successes"] <= upper["successes"]
    assert d["ci"][0] == lower["ci"][0] and d["ci"][1] == upper["ci"][1]


def test_determinism_across_workers():
    spec = ExperimentSpec("cover_mean", trials=400, params={"n": 3}, master_seed=11)
    assert run_experiment(spec, 1).to_json() == run_experiment(spec, 3).to_json()
    other = dataclasses.replace(spec, master_seed=12)
    assert run_experiment(other, 1).to_json() != run_experiment(spec, 1).to_json()


def test_abort_on_failure_budget(monkeypatch):
    calls = {"n": 0}

    def flaky(seed, i, depth, params):
        calls["n"] += 1
        if i % 100 == 0:
            raise NeedMoreCode(1, 0)
        return (1,)

    patched = dict(CATALOG)
    patched["coin"] = dataclasses.replace(CATALOG["coin"], trial=flaky)
    monkeypatch.setattr(mc_harness, "CATALOG", patched)
    with pytest.raises(ExperimentAborted):
        run_experiment(ExperimentSpec("coin", trials=1000))

    def rare(seed, i, depth, params):
        if i == 7:
            raise NeedMoreCode(1, 0)
        return (1,)

    patched["coin"] = dataclasses.replace(CATALOG["coin"], trial=rare)
    rec = run_experiment(ExperimentSpec("coin", trials=1000))
    assert rec.failures == 1 and rec.successes == 999


def test_invalid_specs():
    with pytest.raises(ValueError):
        run_experiment(ExperimentSpec("nope"))
    with pytest.raises(ValueError):
        run_experiment(ExperimentSpec("hit_prob", params={"target": "2"}))
    with pytest.raises(ValueError):
        run_experiment(ExperimentSpec("hit_prob", params={"bogus": 1}))
    with pytest.raises(ValueError):
        run_experiment(ExperimentSpec("support_equality", depth=99))
    with pytest.raises(ValueError):
        run_experiment(ExperimentSpec("coin", trials=0))


def test_ci_calibration_over_seeds():
    covered = 0
    for seed in range(200):
        rec = run_experiment(ExperimentSpec("coin", trials=200, master_seed=seed,
                                            confidence=0.95))
        covered += rec.verdict == WITHIN
    assert covered >= 180


def test_gw_survival_matches_enumeration():
    for depth in range(0, 4):
        dist = gw_tree_distribution(depth)
        alive = sum(p for tree, p in dist.items()
                    if any(len(w) == depth for w in tree))
        assert alive == gw_survival(depth)
    assert abs(float(gw_survival(12)) - 0.75124) < 1e-4


def test_gw_tree_distribution_sums_to_one():
    for depth in range(4):
        assert sum(gw_tree_distribution(depth).values()) == 1


def test_exact_checks():
    r = check_path_pushforward(3)
    assert r["ok"] and r["summary"] == "exact: uniform 1/8 × 8"
    z = check_zeros_pushforward(50, 6)
    assert z["ok"], z


def test_exact_experiment_records():
    rec = run_experiment(ExperimentSpec("zeros_pushforward", params={"mode": "exhaustive"},
                                        depth=2))
    assert rec.verdict == WITHIN
    rec = run_experiment(ExperimentSpec("path_pushforward", depth=3))
    assert rec.verdict == WITHIN


@pytest.mark.parametrize("name", sorted(n for n in CATALOG if n != "path_pushforward"))
def test_every_experiment_runs(name):
    exp = CATALOG[name]
    depth = min(exp.default_depth, 10) if name != "empty_cylinder" else 20
    params = {"n": 3} if name == "empty_cylinder" else {}
    rec = run_experiment(ExperimentSpec(name, trials=60, depth=depth, params=params))
    assert rec.verdict in (WITHIN, BRACKETED, OUTSIDE)
    json.loads(rec.to_json())
