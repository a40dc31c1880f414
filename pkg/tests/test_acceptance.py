"""End-to-end acceptance checks, one test per criterion.

Each test appends a PASS/FAIL line to ``LINES``; ``conftest.py`` prints them
in the terminal summary.
"""

import time

import numpy as np
import pytest

from magicsurgery import cost, css, noise
from magicsurgery.color_code import build_code, transversal_overlap, transversal_t_exponent
from magicsurgery.diagonal import (
    all_outcomes,
    canonical_gate,
    canonical_key,
    ccz_gate,
    correction_key_table,
    cs_gate,
    fidelity,
    random_state,
    simulate_teleport,
    t_gate,
)
from magicsurgery.protocol import default_setup, teleport_all_branches
from magicsurgery.surface_code import build_surface
from magicsurgery.surgery import merge, product_of_new_checks

LINES: list[str] = []


def report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    LINES.append(line)
    print(line)
    assert ok, line


def test_1_color_code_counts():
    expected = {1: (15, 4, 10, 1), 2: (65, 16, 48, 1), 3: (175, 40, 134, 1)}
    t0 = time.perf_counter()
    got = {}
    for l in expected:
        c = build_code(l).code
        got[l] = (c.n, c.rank_x, c.rank_z, css.num_logical(c))
    dt = time.perf_counter() - t0
    report(1, got == expected and dt < 5, f"(n, r_X, r_Z, k) = {got}, {dt:.2f}s")


@pytest.mark.slow
def test_2_distances():
    t0 = time.perf_counter()
    c1 = css.distance_brute_force(build_code(1).code, 3)
    s3 = css.distance_brute_force(build_surface(3).code, 3)
    c2 = css.distance_brute_force(build_code(2).code, 5)
    b, s = build_code(1), build_surface(3)
    m = css.distance_brute_force(merge(b.code, b.interface, s.code, s.interface).code, 2)
    dt = time.perf_counter() - t0
    ok = (
        c1.found_weight == 3
        and s3.found_weight == 3
        and c2.found_weight == 5
        and c2.checked_weight == 5
        and m.found_weight is None
        and m.checked_weight == 2
        and not any(c.partial for c in (c1, s3, c2, m))
        and dt < 300
    )
    report(2, ok, f"color l=1 d={c1.found_weight}, surface d={s3.found_weight}, color l=2 d={c2.found_weight}, merged: {m.summary()}, {dt:.1f}s")


def test_3_surgery_algebra():
    parts = []
    ok = True
    for l in (1, 2):
        b, s = build_code(l), build_surface(2 * l + 1)
        m = merge(b.code, b.interface, s.code, s.interface)
        valid = css.validate(m.code).ok
        k = css.num_logical(m.code)
        exact = product_of_new_checks(m) == m.logical_zz()
        ok &= valid and k == 1 and exact and len(m.new_z_check_ids) == 2 * l + 1
        parts.append(f"l={l}: valid={valid} k={k} product==ZZ:{exact}")
    report(3, ok, "; ".join(parts))


def test_4_transversal_t():
    t0 = time.perf_counter()
    b = build_code(1)
    overlaps = {a: transversal_overlap(b.code, a) for a in (1, -1)}
    good = [a for a, v in overlaps.items() if v >= 1 - 1e-10]
    sign, _ = transversal_t_exponent(b)
    sq = transversal_overlap(b.code, sign, power=2)
    dt = time.perf_counter() - t0
    ok = len(good) == 1 and good[0] == sign and sq >= 1 - 1e-10 and dt < 10
    report(4, ok, f"overlaps {overlaps}, sign {sign}, square->S overlap {sq:.12f}, {dt:.2f}s")


TABLES = {
    "T": [("m_{X}", "Z"), ("m_{ZZ}", "S")],
    "CS": [
        ("m_{X,1}+m_{ZZ,1}m_{ZZ,2}", "Z_1"),
        ("m_{X,2}+m_{ZZ,1}m_{ZZ,2}", "Z_2"),
        ("m_{ZZ,2}", "S^dag_1"),
        ("m_{ZZ,1}", "S^dag_2"),
        ("m_{ZZ,1}+m_{ZZ,2}", "CZ_{1,2}"),
    ],
    "CCZ": [
        ("m_{X,1}+m_{ZZ,2}m_{ZZ,3}", "Z_1"),
        ("m_{X,2}+m_{ZZ,3}m_{ZZ,1}", "Z_2"),
        ("m_{X,3}+m_{ZZ,1}m_{ZZ,2}", "Z_3"),
        ("m_{ZZ,1}", "CZ_{2,3}"),
        ("m_{ZZ,2}", "CZ_{3,1}"),
        ("m_{ZZ,3}", "CZ_{1,2}"),
    ],
}


def test_5_teleportation_semantics():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = {}
    tables_ok = {}
    for name, spec in (("T", t_gate()), ("CS", cs_gate()), ("CCZ", ccz_gate())):
        u = spec.matrix()
        states = [random_state(spec.n, rng) for _ in range(200)]
        w = 1.0
        for branch in all_outcomes(spec.n):
            for psi in states:
                w = min(w, fidelity(simulate_teleport(spec, psi, forced=branch).output, u @ psi))
        worst[name] = w
        rows = [(r.key, r.gate) for r in correction_key_table(spec)]
        canon = sorted((canonical_key(k), canonical_gate(g)) for k, g in rows)
        tables_ok[name] = canon == sorted((canonical_key(k), canonical_gate(g)) for k, g in TABLES[name])
    dt = time.perf_counter() - t0
    ok = all(v >= 1 - 1e-10 for v in worst.values()) and all(tables_ok.values()) and dt < 60
    shown = {k: f"{1 - v:.1e}" for k, v in worst.items()}
    report(5, ok, f"branches 4/16/64, max infidelity {shown}, tables match {tables_ok}, {dt:.1f}s")


def test_6_physical_clifford_teleportation():
    setup = default_setup(1)
    first = teleport_all_branches(setup)
    second = teleport_all_branches(setup)
    passed = sum(r.passed for r in first)
    branches = {(r.input_state, r.m_zz, r.m_x) for r in first}
    repeat = [a.transcript.to_jsonl() for a in first] == [b.transcript.to_jsonl() for b in second]
    ok = passed == 24 and len(branches) == 24 and repeat
    report(6, ok, f"{passed}/24 (6 inputs x 4 branches) pass, transcripts reproducible={repeat}")


@pytest.mark.slow
def test_7_monte_carlo():
    t0 = time.perf_counter()
    b, s = build_code(1), build_surface(3)
    code = merge(b.code, b.interface, s.code, s.interface).code
    audit = noise.weight_one_audit(code)
    grid = [1e-3, 3e-3, 1e-2]
    runs = [noise.run_mc(code, noise.NoiseModel(p=p, seed=12345), 10**6) for p in grid]
    again = noise.run_mc(code, noise.NoiseModel(p=grid[-1], seed=12345), 10**6)
    exact = (again.accepted, again.failures) == (runs[-1].accepted, runs[-1].failures)
    table = noise.stratified_table(code, seed=12345)
    pred = [table.rate(p) for p in grid]
    slope, err = noise.slope_fit(grid, [d["rate"] for d in pred])
    consistent = all(r.ci_low <= d["rate_high"] and d["rate_low"] <= r.ci_high for r, d in zip(runs, pred))
    dt = time.perf_counter() - t0
    ok = audit.accepted == 0 and audit.total == 90 and exact and consistent and np.isfinite(err) and dt < 600
    raw = ", ".join(f"p={r.p:g}: {r.failures}/{r.accepted}" for r in runs)
    report(
        7,
        ok,
        f"weight-1 accepted {audit.accepted}/{audit.total}; raw failures/accepted {raw}; "
        f"post-selection exponent {slope:.3f} +- {1.96 * err:.3f} (95%); bit-exact rerun={exact}; {dt:.0f}s",
    )


def test_8_cost_model():
    t0 = time.perf_counter()
    params = cost.CostModelParams()
    g = cost.gamma(15, 1, 3)
    cc = cost.asymptotic_exponent(params, "colorcode-teleport", 1e-15, 1e-6)
    msd = cost.asymptotic_exponent(params, "msd-small-code", 1e-15, 1e-6)
    dt = time.perf_counter() - t0
    ok = abs(g - 2.465) <= 0.005 and abs(cc.extrapolated - 3.0) <= 0.2 and abs(msd.extrapolated - 4.46) <= 0.2 and dt < 1
    report(
        8,
        ok,
        f"gamma={g:.4f}; colorcode slope -> {cc.extrapolated:.3f} (local {cc.slope_at_low:.3f} at 1e-15); "
        f"msd slope -> {msd.extrapolated:.3f} (local {msd.slope_at_low:.3f}); {dt:.2f}s",
    )
