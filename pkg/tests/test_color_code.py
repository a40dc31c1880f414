import itertools
import time

import numpy as np
import pytest

from magicsurgery import css
from magicsurgery.color_code import (
    bundle_to_dict,
    build_complex,
    build_code,
    edge_count,
    face_count,
    tetrahedron_count,
    transversal_overlap,
    transversal_t_exponent,
    vertex_count,
    x_rank,
    z_rank,
)
from magicsurgery.gf2 import BitMatrix

# (n, X-checks, rank H_X, Z-checks, rank H_Z), counted from the built complexes
FROZEN = {1: (15, 4, 4, 18, 10), 2: (65, 16, 16, 80, 48), 3: (175, 40, 40, 214, 134)}


@pytest.mark.parametrize("l", [1, 2, 3])
def test_counts(l):
    b = build_code(l)
    c = b.code
    assert (c.n, len(c.x_checks), c.rank_x, len(c.z_checks), c.rank_z) == FROZEN[l]
    assert css.num_logical(c) == 1
    assert c.n == tetrahedron_count(l)
    assert (c.rank_x, c.rank_z) == (x_rank(l), z_rank(l))
    cx = b.complex
    assert len(cx.vertices) == vertex_count(l)
    assert len(cx.edges) == edge_count(l)
    assert len(cx.faces) == face_count(l)


@pytest.mark.parametrize("l", range(1, 8))
def test_count_formulas_are_consistent(l):
    # k = n - r_X - r_Z = 1 for every size
    assert tetrahedron_count(l) - x_rank(l) - z_rank(l) == 1
    # every tetrahedron has 4 faces, interior faces are shared by two
    assert 4 * tetrahedron_count(l) <= 2 * face_count(l)


def test_build_is_fast():
    t0 = time.perf_counter()
    for l in (1, 2, 3):
        build_code(l)
    assert time.perf_counter() - t0 < 5


def test_l1_is_quantum_reed_muller(color1):
    """Relabel qubits by their X-check membership and compare with RM monomials."""
    code = color1.code
    hx = code.hx.to_dense()
    sig = [tuple(hx[:, q]) for q in range(code.n)]
    assert len(set(sig)) == 15 and (0, 0, 0, 0) not in sig
    pts = np.array(sig, dtype=np.uint8)
    monomials = [pts[:, i] for i in range(4)]
    monomials += [pts[:, i] & pts[:, j] for i, j in itertools.combinations(range(4), 2)]
    rm = BitMatrix.from_dense(np.array(monomials))
    hz = code.hz
    assert rm.rank() == hz.rank() == 10
    assert BitMatrix.from_dense(np.vstack([rm.to_dense(), hz.to_dense()])).rank() == 10


def test_x_checks_weight_eight_z_checks_weight_four(color1):
    assert {p.weight() for p in color1.code.x_checks} == {8}
    assert {p.weight() for p in color1.code.z_checks} == {4}


def test_interface_is_repetition_chain(color1, color2):
    for b, l in ((color1, 1), (color2, 2)):
        iface = b.interface
        assert len(iface.qubit_ids) == 2 * l + 1
        assert len(iface.chain_check_ids) == 2 * l
        iface.check(b.code)
        assert b.code.logical_z[0] == iface.logical_z(b.code.n)
        assert css.is_logical(b.code, b.code.logical_z[0])


def test_distance_l1(color1):
    cert = css.distance_brute_force(color1.code, 3)
    assert cert.found_weight == 3 and cert.witness_type == "Z"


def test_transversal_t_sign(color1):
    sign, ok = transversal_t_exponent(color1)
    assert ok and sign == -1
    assert transversal_overlap(color1.code, -1) >= 1 - 1e-10
    assert transversal_overlap(color1.code, 1) < 0.9
    # (T^a)^2 gives S-bar, (T^a)^8 the identity
    assert transversal_overlap(color1.code, -1, power=2) >= 1 - 1e-10
    assert transversal_overlap(color1.code, -1, power=8) >= 1 - 1e-10


def test_transversal_only_checked_at_l1(color2):
    with pytest.raises(ValueError):
        transversal_t_exponent(color2)


def test_complex_properties(color2):
    cx = color2.complex
    colors = [v.color for v in cx.vertices]
    for t in cx.tetrahedra:
        assert sorted(colors[v] for v in t) == ["b", "g", "r", "y"]
    for c in "rgby":
        assert cx.vertices[cx.outer(c)].color == c and not cx.vertices[cx.outer(c)].inner
    assert len(cx.inner_ids()) == len(color2.code.x_checks)


def test_bad_size():
    with pytest.raises(ValueError):
        build_complex(0)


def test_export(color1):
    data = bundle_to_dict(color1)
    assert data["n"] == 15
    back = css.code_from_dict(data)
    assert back.z_checks == color1.code.z_checks
