import json

import numpy as np
import pytest

from magicsurgery import protocol
from magicsurgery.protocol import (
    EXPECTED_OUTPUT,
    LOGICAL_STATES,
    ProtocolError,
    default_setup,
    teleport_all_branches,
    teleport_clifford_resource,
)
from magicsurgery.tableau import StabilizerTableau


@pytest.fixture(scope="module")
def setup():
    return default_setup(1)


def test_all_inputs_all_branches(setup):
    reports = teleport_all_branches(setup)
    assert len(reports) == 24
    seen = {(r.input_state, r.m_zz, r.m_x) for r in reports}
    assert len(seen) == 24
    bad = [(r.input_state, r.m_zz, r.m_x) for r in reports if not r.passed]
    assert not bad


def test_expected_map_is_s_gate():
    # S X S^dag = Y, S Y S^dag = -X, Z fixed
    assert EXPECTED_OUTPUT["+X"] == "+Y" and EXPECTED_OUTPUT["+Y"] == "-X" and EXPECTED_OUTPUT["+Z"] == "+Z"


def test_deterministic_under_seed(setup):
    a = teleport_clifford_resource("+X", 5, None, setup)
    b = teleport_clifford_resource("+X", 5, None, setup)
    assert a.transcript.to_jsonl() == b.transcript.to_jsonl()
    assert (a.m_zz, a.m_x) == (b.m_zz, b.m_x)


@pytest.mark.parametrize("perm_seed", range(6))
def test_measurement_order_independence(setup, perm_seed):
    k = len(setup.merged.extended_x_check_ids) + len(setup.merged.new_z_check_ids)
    order = np.random.default_rng(perm_seed).permutation(k).tolist()
    for state in LOGICAL_STATES:
        rep = teleport_clifford_resource(state, perm_seed, None, setup, order=order)
        assert rep.passed, (state, order)


def test_skipping_correction_fails(setup):
    """Negative control: without Z-bar^(m_ZZ+m_X) the X/Y inputs break on odd branches."""
    broken = 0
    for state in ("+X", "-Y"):
        for m_zz in (0, 1):
            for seed in range(16):
                rep = teleport_clifford_resource(state, seed, m_zz, setup, correct=False)
                if rep.m_zz ^ rep.m_x:
                    assert rep.deterministic and not rep.passed
                    broken += 1
                else:
                    assert rep.passed
    assert broken > 0


def test_transcript_records(setup, tmp_path):
    rep = teleport_clifford_resource("-Z", 2, 1, setup)
    path = tmp_path / "t.jsonl"
    rep.transcript.save(path)
    lines = [json.loads(x) for x in path.read_text().splitlines()]
    assert lines[0]["seed"] == 2
    labels = {r.get("label") for r in lines[1:]}
    assert {"merge_x_check", "merge_z_check", "split_ancilla_x", "readout_x"} <= labels
    assert len(rep.transcript.outcomes("merge_z_check")) == 3


def test_prepared_states_are_code_states(setup):
    code = setup.surface.code
    for state in LOGICAL_STATES:
        t = StabilizerTableau(code.n, 3)
        protocol.prepare_logical_eigenstate(t, code, 0, state)
        for c in code.x_checks + code.z_checks:
            assert t.peek(c) == 0
        op = protocol._logical(code, state[1])
        assert t.peek(op) == (0 if state[0] == "+" else 1)


def test_bad_input(setup):
    with pytest.raises(ValueError):
        teleport_clifford_resource("+W", 0, None, setup)


def test_readout_detects_corruption(setup):
    code = setup.color.code
    t = StabilizerTableau(code.n, 0)
    protocol.prepare_plus_bar(t, code, 0)
    t.apply("Z", 0)
    with pytest.raises(ProtocolError):
        protocol.destructive_x_readout(t, code, 0)


def test_larger_codes_rejected():
    with pytest.raises(ValueError):
        default_setup(2)
