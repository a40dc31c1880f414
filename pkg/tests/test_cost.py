import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magicsurgery import cost
from magicsurgery.cost import CostError, CostModelParams

P = CostModelParams()


def test_gamma():
    assert abs(cost.gamma(15, 1, 3) - 2.465) < 0.005
    assert cost.gamma(7, 7, 3) == 0
    assert math.isclose(cost.gamma(225, 1, 9), cost.gamma(15, 1, 3))
    for bad in ((1, 2, 3), (15, 0, 3), (15, 1, 1)):
        with pytest.raises(CostError):
            cost.gamma(*bad)


@settings(max_examples=50)
@given(st.integers(1, 50), st.integers(1, 50), st.integers(2, 9), st.integers(1, 6))
def test_gamma_scale_invariant(a, b, d, c):
    n, k = max(a, b), min(a, b)
    assert math.isclose(cost.gamma(n, k, d), cost.gamma(c * n, c * k, d), abs_tol=1e-12)


def test_d3_example():
    b = cost.q_total_teleport(P, 1e-3)
    assert (b.d, b.q_magic, b.q_meas, b.q_base, b.q_total) == (3, 15, 2, 13, 30)


def test_single_round_gives_fifteen():
    b = cost.q_total_msd(P, P.eps_in * 0.5)
    assert b.rounds == 1 and b.q_distil == 15


@settings(max_examples=100, deadline=None)
@given(st.floats(-15, -1.01), st.sampled_from(cost.SCHEMES))
def test_combination_rules(log_eps, scheme):
    b = cost.breakdown(P, 10**log_eps, scheme)
    if scheme in cost.TELEPORT:
        assert b.q_total == b.q_base + b.q_magic + b.q_meas
    else:
        assert b.q_total == b.q_base * b.q_distil
    assert P.logical_error(b.d) <= 10**log_eps * (1 + 1e-12)
    assert b.d == 3 or P.logical_error(b.d - 2) > 10**log_eps
    assert b.provenance["q_total"]


@settings(max_examples=60, deadline=None)
@given(st.floats(-15, -1.01), st.floats(0.01, 2), st.sampled_from(cost.SCHEMES))
def test_monotone(log_eps, step, scheme):
    hi = cost.breakdown(P, 10**log_eps, scheme).q_total
    lo = cost.breakdown(P, 10 ** (log_eps - step), scheme).q_total
    assert lo >= hi


def test_smooth_matches_discrete_at_exact_distances():
    for d in (3, 5, 9, 15):
        eps = P.logical_error(d)
        assert math.isclose(cost.smooth_distance(P, eps), d)
        assert math.isclose(cost.smooth_total(P, eps, "colorcode-teleport"), cost.q_total_teleport(P, eps).q_total)


def test_exponents():
    cc = cost.asymptotic_exponent(P, "colorcode-teleport")
    msd = cost.asymptotic_exponent(P, "msd-small-code")
    assert abs(cc.extrapolated - 3.0) < 0.2
    assert abs(msd.extrapolated - (2 + cost.gamma(15, 1, 3))) < 0.2
    # raw slopes still decreasing towards the limit at 1e-15
    assert cc.slope_at_low > cc.extrapolated and msd.slope_at_low > msd.extrapolated
    assert cost.asymptotic_exponent(P, "msd-optimized").extrapolated < msd.extrapolated


def test_qldpc_extra_qubits_dominated_by_measurement():
    b = cost.q_total_teleport(P, 1e-12, "qldpc-teleport")
    assert b.q_meas > 10 * b.q_magic


def test_crossover_exists():
    grid = cost.default_grid()
    star = cost.crossover(P, grid)
    assert star is not None and star < 1e-3
    for e in grid:
        if e <= star:
            assert cost.q_total_teleport(P, e).q_total < cost.q_total_msd(P, e).q_total


def test_emit_comparison():
    rows = cost.emit_comparison(P, [1e-5])
    assert [r["scheme"] for r in rows] == list(cost.SCHEMES)
    grid = cost.default_grid()
    rows = cost.emit_comparison(P, grid)
    for s in cost.SCHEMES:
        eps = [r["epsilon"] for r in rows if r["scheme"] == s]
        assert all(a >= b for a, b in zip(eps, eps[1:]))
    with pytest.raises(CostError):
        cost.emit_comparison(P, [])
    text = cost.comparison_csv(rows, P)
    meta = json.loads(text.splitlines()[0][2:])
    assert meta["params"]["c_d"] == 35.0
    assert text.splitlines()[1].split(",") == cost.COLUMNS


def test_slope_columns_approach_exponents():
    rows = cost.emit_comparison(P, np.logspace(-6, -15, 46))
    cc = [r["slope_smooth"] for r in rows if r["scheme"] == "colorcode-teleport"]
    assert all(a >= b for a, b in zip(cc[1:], cc[2:]))
    assert 3.0 < cc[-1] < 3.3


def test_param_errors(tmp_path):
    with pytest.raises(CostError):
        CostModelParams(p_ratio=1.0)
    with pytest.raises(CostError):
        CostModelParams(beta=0)
    with pytest.raises(CostError):
        CostModelParams.from_dict({"bogus": 1})
    above = CostModelParams(eps_in=0.2)
    with pytest.raises(CostError):
        cost.q_total_msd(above, 1e-6)
    with pytest.raises(CostError):
        cost.q_total_teleport(P, 0.0)
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"c_d": 10.0, "alpha": 0.5}))
    loaded = CostModelParams.load(path)
    assert loaded.c_d == 10.0 and loaded.to_dict()["alpha"] == 0.5
