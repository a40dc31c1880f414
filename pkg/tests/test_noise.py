import math

import numpy as np
import pytest

from magicsurgery import noise
from magicsurgery.noise import (
    InsufficientData,
    NoiseModel,
    binomial_ci,
    enumerate_weight,
    run_mc,
    sample_errors,
    slope_fit,
    stratified_table,
    weight_one_audit,
)

# exhaustive strata of the merged l=1 code: (weight, errors, accepted, failures)
STRATA = [(1, 90, 0, 0), (2, 3915, 0, 0), (3, 109620, 46, 38)]


@pytest.fixture(scope="module")
def code(merged1):
    return merged1.code


@pytest.fixture(scope="module")
def table(code):
    return stratified_table(code, exhaustive_upto=4, sampled_upto=8, samples=200_000, seed=0)


def test_p_zero(code):
    r = run_mc(code, NoiseModel(p=0.0), 5000)
    assert (r.accepted, r.failures) == (5000, 0)
    assert r.acceptance_rate == 1.0 and r.post_selected_rate == 0.0


def test_weight_one_always_rejected(code):
    audit = weight_one_audit(code)
    assert audit.total == 3 * code.n and audit.accepted == 0


@pytest.mark.parametrize("w,total,acc,fail", STRATA)
def test_low_weight_strata(code, w, total, acc, fail):
    s = enumerate_weight(code, w)
    assert (s.total, s.accepted, s.failures) == (total, acc, fail)
    assert s.total == math.comb(code.n, w) * 3**w


def test_invariants_and_reproducibility(code):
    model = NoiseModel(p=0.05, seed=7)
    a = run_mc(code, model, 150_000, chunk=50_000)
    b = run_mc(code, model, 150_000, chunk=50_000, jobs=2)
    assert (a.accepted, a.failures) == (b.accepted, b.failures)
    assert 0 <= a.failures <= a.accepted <= a.trials
    assert 0 <= a.ci_low <= a.post_selected_rate <= a.ci_high <= 1
    c = run_mc(code, NoiseModel(p=0.05, seed=8), 150_000, chunk=50_000)
    assert (c.accepted, c.failures) != (a.accepted, a.failures)


def test_depolarizing_marginals():
    rng = np.random.default_rng(0)
    ex, ez = sample_errors(NoiseModel(p=0.3), 10, 40_000, rng)
    y = (ex & ez).mean()
    x = (ex & ~ez.astype(bool)).mean()
    z = (ez & ~ex.astype(bool)).mean()
    for v in (x, y, z):
        assert abs(v - 0.1) < 0.005
    ex, ez = sample_errors(NoiseModel("independent-XZ", 0.2), 10, 40_000, rng)
    assert abs(ex.mean() - 0.2) < 0.01 and abs((ex & ez).mean() - 0.04) < 0.005


def test_raw_mc_agrees_with_stratified(code, table):
    """At p = 0.05 failures are common enough for plain sampling to see them."""
    p = 0.05
    r = run_mc(code, NoiseModel(p=p, seed=3), 400_000)
    pred = table.rate(p)
    assert pred["tail_mass"] < 0.2
    assert abs(r.acceptance_rate - pred["accept"]) < 0.02
    assert r.ci_low <= pred["rate_high"] and pred["rate_low"] <= r.ci_high


def test_stratified_exponent(table):
    ps = [1e-3, 3e-3, 1e-2]
    rates = [table.rate(p)["rate"] for p in ps]
    slope, err = slope_fit(ps, rates)
    # undetected logicals start at weight 3
    assert abs(slope - 3) < 0.1 and err < 0.05
    for p in ps:
        d = table.rate(p)
        assert d["rate_low"] <= d["rate"] <= d["rate_high"]


def test_slope_fit():
    ps = np.array([1e-3, 2e-3, 4e-3, 8e-3])
    slope, err = slope_fit(ps, 5 * ps**2)
    assert abs(slope - 2) < 1e-9 and err < 1e-6
    slope_w, _ = slope_fit(ps, 5 * ps**2, weights=[1, 2, 3, 4])
    assert abs(slope_w - 2) < 1e-9
    with pytest.raises(InsufficientData):
        slope_fit(ps, [0, 0, 1e-3, 1e-2])


def test_binomial_ci():
    lo, hi = binomial_ci(0, 1000)
    assert lo == 0 and abs(hi - 0.00368) < 1e-4
    assert binomial_ci(0, 0) == (0.0, 1.0)


def test_results_csv(code, tmp_path):
    r = run_mc(code, NoiseModel(p=0.01, seed=1), 1000)
    path = tmp_path / "r.csv"
    noise.save_results([r], {"seed": 1}, path)
    lines = path.read_text().splitlines()
    assert lines[0] == '# {"seed": 1}'
    assert lines[1].startswith("p,trials,accepted")
    assert noise.result_dict(r)["trials"] == 1000


def test_model_validation():
    with pytest.raises(ValueError):
        NoiseModel("bitflip")
    with pytest.raises(ValueError):
        NoiseModel(p=1.5)
