"""The compiled kernels and their numpy twins must agree bit for bit."""

import numpy as np
import pytest

from magicsurgery import kernels
from magicsurgery.css import signature_columns
from magicsurgery.gf2 import pack

BACKENDS = kernels.backends()


def test_fallback_always_present():
    assert "python" in BACKENDS
    assert kernels.BACKEND in BACKENDS


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled extension not built")
@pytest.mark.parametrize("seed", range(40))
def test_rref_equivalent(seed):
    rng = np.random.default_rng(seed)
    r, c = int(rng.integers(1, 40)), int(rng.integers(1, 200))
    rows = pack((rng.random((r, c)) < rng.uniform(0.05, 0.5)).astype(np.uint8), c)
    a, b = rows.copy(), rows.copy()
    pa = BACKENDS["python"].rref_inplace(a, c)
    pb = BACKENDS["cython"].rref_inplace(b, c)
    assert list(pa) == list(pb)
    assert np.array_equal(a, b)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled extension not built")
@pytest.mark.parametrize("weight", [1, 2, 3, 4])
@pytest.mark.parametrize("kind", ["X", "Z"])
def test_search_equivalent(color1, weight, kind):
    syn, log = signature_columns(color1.code, kind)
    for lo, hi in [(0, 15), (2, 7), (5, 15)]:
        for hits in (0, 1, 5):
            a = BACKENDS["python"].search_weight(syn, log, weight, lo, hi, hits)
            b = BACKENDS["cython"].search_weight(syn, log, weight, lo, hi, hits)
            assert [tuple(h) for h in a] == [tuple(h) for h in b]


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled extension not built")
def test_error_flags_equivalent(merged1):
    from magicsurgery.noise import _matrices

    hz, lz, hx, lx = _matrices(merged1.code)
    rng = np.random.default_rng(5)
    n = merged1.code.n
    ex = pack((rng.random((5000, n)) < 0.05).astype(np.uint8), n)
    ez = pack((rng.random((5000, n)) < 0.05).astype(np.uint8), n)
    a = BACKENDS["python"].error_flags(ex, ez, hz, lz, hx, lx)
    b = BACKENDS["cython"].error_flags(ex, ez, hz, lz, hx, lx)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    assert a[0].sum() > 0


def test_search_on_color_code(color1):
    # Z-type logicals start at weight 3, X-type ones at weight 7
    zs, zl = signature_columns(color1.code, "Z")
    xs, xl = signature_columns(color1.code, "X")
    for impl in BACKENDS.values():
        assert impl.search_weight(zs, zl, 2, 0, 15, 0) == []
        assert len(impl.search_weight(zs, zl, 3, 0, 15, 1)) == 1
        assert impl.search_weight(xs, xl, 6, 0, 15, 0) == []
        assert len(impl.search_weight(xs, xl, 7, 0, 15, 1)) == 1
