import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magicsurgery import css
from magicsurgery.pauli import PauliOperator
from magicsurgery.surface_code import build_surface
from magicsurgery.surgery import (
    InterfaceError,
    SurgeryInterface,
    logical_zz_from_checks,
    merge,
    merged_from_dict,
    merged_to_dict,
    product_of_new_checks,
    save_merged,
    split,
)


@pytest.mark.parametrize("name", ["merged1", "merged2"])
def test_merged_algebra(name, request):
    m = request.getfixturevalue(name)
    assert css.validate(m.code).ok
    assert css.num_logical(m.code) == 1
    assert product_of_new_checks(m) == m.logical_zz()
    assert len(m.new_z_check_ids) == len(m.ancilla_ids) + 1


def test_merged_counts(merged1):
    c = merged1.code
    assert c.n == 15 + 13 + 2
    assert len(merged1.new_z_check_ids) == 3
    assert len(merged1.extended_x_check_ids) == 4
    zz = merged1.logical_zz()
    # Z-bar Z-bar is now a stabilizer; Z-bar_A alone is still logical
    assert c.hz.in_rowspace(zz.z)
    assert css.is_logical(c, c.logical_z[0])


def test_merged_distance_three(merged1):
    cert = css.distance_brute_force(merged1.code, 3)
    assert cert.found_weight == 3


def test_split_frame_flips_only_chain_checks(merged1):
    code_a, code_b, frame = split(merged1)
    na = merged1.n_a
    for i in range(len(merged1.ancilla_ids)):
        out = [0] * len(merged1.ancilla_ids)
        out[i] = 1
        corr = frame.correction(out)
        za = corr.restrict(list(range(na)))
        zb = corr.restrict(list(range(na, na + code_b.n)))
        hit_a = [j for j, c in enumerate(code_a.x_checks) if not c.commutes(za)]
        hit_b = [j for j, c in enumerate(code_b.x_checks) if not c.commutes(zb)]
        assert hit_a == [merged1.interface_a.chain_check_ids[i]]
        assert hit_b == [merged1.interface_b.chain_check_ids[i]]
    with pytest.raises(ValueError):
        frame.correction([1])


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=3, max_size=3))
def test_logical_zz_is_xor(bits):
    from magicsurgery.color_code import build_code

    b = build_code(1)
    s = build_surface(3)
    m = merge(b.code, b.interface, s.code, s.interface)
    assert logical_zz_from_checks(m, bits) == sum(bits) % 2


@pytest.mark.parametrize("d", [3, 5])
def test_surface_surface_merge(d):
    a = build_surface(d)
    m = merge(a.code, a.interface, a.code, a.interface)
    assert css.validate(m.code).ok and css.num_logical(m.code) == 1
    assert product_of_new_checks(m) == m.logical_zz()


def test_interface_mismatch(color1, surface3):
    s5 = build_surface(5)
    with pytest.raises(InterfaceError):
        merge(color1.code, color1.interface, s5.code, s5.interface)
    bad = SurgeryInterface(surface3.interface.qubit_ids, surface3.interface.chain_check_ids[::-1])
    with pytest.raises(InterfaceError):
        bad.check(surface3.code)


def test_roundtrip(tmp_path, merged1):
    path = tmp_path / "m.json"
    save_merged(merged1, path)
    back = merged_from_dict(json.loads(path.read_text()))
    assert back.code.z_checks == merged1.code.z_checks
    assert merged_to_dict(back)["provenance"]["ancilla_ids"] == list(merged1.ancilla_ids)


def test_merged_logical_x_pairs(merged1):
    c = merged1.code
    assert not c.logical_x[0].commutes(c.logical_z[0])
    assert all(c.logical_x[0].commutes(z) for z in c.z_checks)
    assert isinstance(c.logical_x[0], PauliOperator)
    assert np.all(c.logical_x[0].z.to_array() == 0)
