import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magicsurgery.gf2 import BitMatrix, BitVector, inverse, pack, unpack


def oracle_rank(dense: np.ndarray) -> int:
    """Rank via XOR basis over Python ints."""
    basis: dict[int, int] = {}
    for row in dense:
        v = int("".join(map(str, row.tolist())) or "0", 2)
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return len(basis)


matrices = st.integers(1, 12).flatmap(
    lambda r: st.integers(1, 140).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def test_rank_matches_oracle_over_1000_seeds():
    for seed in range(1000):
        rng = np.random.default_rng(seed)
        r, c = rng.integers(1, 20), rng.integers(1, 150)
        density = rng.uniform(0.05, 0.6)
        dense = (rng.random((r, c)) < density).astype(np.uint8)
        if seed % 7 == 0 and r > 2:
            dense[-1] = dense[0] ^ dense[1]
        assert BitMatrix.from_dense(dense).rank() == oracle_rank(dense), seed


def test_pack_roundtrip_across_word_boundary():
    rng = np.random.default_rng(3)
    dense = rng.integers(0, 2, size=(5, 130), dtype=np.uint8)
    assert np.array_equal(unpack(pack(dense, 130), 130), dense)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_kernel_vectors_are_annihilated(rows):
    m = BitMatrix.from_dense(np.array(rows, dtype=np.uint8))
    ker = m.kernel_basis()
    assert len(ker) == m.shape[1] - m.rank()
    for v in ker:
        assert not m.matvec(v).any()


@settings(max_examples=60, deadline=None)
@given(matrices, st.integers(0, 2**32 - 1))
def test_solve_finds_preimage_of_image(rows, seed):
    m = BitMatrix.from_dense(np.array(rows, dtype=np.uint8))
    rng = np.random.default_rng(seed)
    x = BitVector.from_bits(rng.integers(0, 2, m.shape[1]))
    b = m.matvec(x)
    sol = m.solve(b)
    assert sol is not None and m.matvec(sol) == b


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_rowspace_membership_of_row_sums(rows):
    m = BitMatrix.from_dense(np.array(rows, dtype=np.uint8))
    t = m.transpose()
    acc = BitVector.zeros(m.shape[1])
    for i in range(0, m.shape[0], 2):
        acc = acc ^ m.row(i)
    assert m.in_rowspace(acc)
    assert t.transpose() == m


def test_rref_pivots_and_independent_rows():
    dense = np.array([[1, 1, 0, 1], [0, 1, 1, 0], [1, 0, 1, 1]], dtype=np.uint8)
    m = BitMatrix.from_dense(dense)
    r, piv = m.rref()
    assert piv == [0, 1]
    assert m.rank() == 2
    assert m.independent_rows().shape == (2, 4)


def test_inverse_of_random_invertible():
    rng = np.random.default_rng(11)
    while True:
        dense = rng.integers(0, 2, size=(9, 9), dtype=np.uint8)
        if oracle_rank(dense) == 9:
            break
    m = BitMatrix.from_dense(dense)
    inv = inverse(m).to_dense().astype(int)
    assert np.array_equal((dense.astype(int) @ inv) % 2, np.eye(9, dtype=int))


def test_inverse_rejects_singular():
    with pytest.raises(ValueError):
        inverse(BitMatrix.from_dense([[1, 1], [1, 1]]))


def test_bitvector_ops():
    a = BitVector.from_support(70, [0, 65, 69])
    b = BitVector.from_support(70, [65, 3])
    assert (a ^ b).support() == [0, 3, 69]
    assert (a & b).support() == [65]
    assert a.dot(b) == 1
    assert a.weight() == 3 and a[65] == 1 and a[64] == 0
    with pytest.raises(ValueError):
        a ^ BitVector.zeros(3)
