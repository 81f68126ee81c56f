import math

import numpy as np
import pytest

import adslab


def test_softmax_and_friends():
    p = adslab.softmax([1.0, 2.0, 3.0])
    assert len(p) == 3
    assert math.isclose(sum(p), 1.0)
    assert p[2] == pytest.approx(0.6652409557748219, rel=1e-14)
    assert adslab.sigmoid(0.0) == 0.5
    assert adslab.kl_divergence([0.5, 0.5], [0.5, 0.5]) == 0.0
    assert adslab.cosine_distance([1, 0], [0, 1]) == pytest.approx(1.0)


def test_shift_metrics_take_arrays():
    w = np.eye(4)
    assert adslab.concept_shift(w, w) == 0.0
    w2 = w.copy()
    w2[0] = [0, 1, 0, 0]
    assert adslab.concept_shift(w, w2) == pytest.approx(0.25)
    g = [10.0] + [0.0] * 9
    assert adslab.covariate_shift([0.0] * 10, g) == pytest.approx(2.298092252254091, rel=1e-12)


def test_rl_and_swap():
    assert adslab.rl_reward("C", "D", -0.5) == 0.5
    assert adslab.rl_reward("D", "C", -0.5) == -1.0
    assert adslab.swap_assignment(1, 4, 3) == 2
    assert adslab.exploit_count(20) == 4
    with pytest.raises(adslab.AdslabError):
        adslab.rl_reward("X", "C", 0.0)


def test_presets_and_hash():
    names = adslab.preset_names()
    assert "rl-baseline" in names and "contentrec-pair" in names
    h = adslab.config_hash("rl-baseline")
    assert len(h) == 16
    assert adslab.config_hash({"preset": "rl-baseline"}) == h
    assert adslab.config_hash("rl-baseline", seed=1) != h
    cfg = adslab.canonical_config("rl-baseline")
    assert cfg["env"]["kind"] == "rl"
    with pytest.raises(adslab.ConfigError, match="env.bogus"):
        adslab.config_hash({"env": {"bogus": 1}})


def test_run_trial_shapes():
    res = adslab.run_trial("rl-pbt", steps=50, population=4, sweep={})
    steps = res["steps"]
    assert steps.shape[1] == len(adslab.STEP_COLUMNS)
    assert steps.dtype == np.float64
    assert res["cooperation"].shape[1] == 2
    assert 0.0 <= res["summary"]["final_cooperation"] <= 1.0
    assert len(res["summary"]["learner_cooperation"]) == 4

    content = adslab.run_trial("contentrec-pair", steps=40, population=3, sweep={},
                               learner={"hidden": 8}, outer={"interval": 10})
    assert content["drift"].shape == (5 * 3, len(adslab.DRIFT_COLUMNS))
    assert 0.0 <= content["summary"]["accuracy_auc"] <= 1.0

    with pytest.raises(IndexError):
        adslab.run_trial("rl-baseline", index=10**6)


def test_run_experiment_and_report(tmp_path):
    out = adslab.run_experiment("rl-baseline", tmp_path / "run", seeds=2, steps=30)
    assert out["trials"] == 2 and out["failed"] == 0
    assert (tmp_path / "run" / "summary.csv").exists()
    rep = adslab.write_reports(tmp_path / "run")
    assert rep["missing"] == []
    assert "report_failure_grid.csv" in rep["written"]
    missing = adslab.write_reports(tmp_path / "nowhere")
    assert "manifest.json" in missing["missing"]


def test_walkthrough():
    w = adslab.pbt_walkthrough(seed=3, intervals=4)
    assert [iv["t"] for iv in w] == [0, 1, 2, 3]
    assert w[0]["actions"] == "CCCCC"
    assert w[1]["actions"][0] == "D"
    assert all(len(iv["copies"]) == 1 for iv in w)
