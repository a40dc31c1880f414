"""Bit-packed vectors and matrices over GF(2).

Storage is ``uint64`` words, little-endian within a row. The word size is an
internal detail; the public API addresses bits by index only.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from . import kernels

WORD = 64


def nwords(nbits: int) -> int:
    return max(1, (nbits + WORD - 1) // WORD)


def pack(dense: np.ndarray, nbits: int | None = None) -> np.ndarray:
    """Pack a 0/1 array of shape ``(rows, nbits)`` into ``(rows, words)`` uint64."""
    dense = np.atleast_2d(np.asarray(dense, dtype=np.uint8) & 1)
    nbits = dense.shape[1] if nbits is None else nbits
    w = nwords(nbits)
    padded = np.zeros((dense.shape[0], w * WORD), dtype=np.uint8)
    padded[:, : dense.shape[1]] = dense
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64, copy=False).reshape(dense.shape[0], w)


def unpack(words: np.ndarray, nbits: int) -> np.ndarray:
    """Inverse of :func:`pack`; returns uint8 of shape ``(rows, nbits)``."""
    words = np.ascontiguousarray(np.atleast_2d(words), dtype=np.uint64)
    raw = words.view(np.uint8).reshape(words.shape[0], -1)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :nbits]


class BitVector:
    """Immutable packed bit vector of fixed length."""

    __slots__ = ("_n", "_w")

    def __init__(self, length: int, words: np.ndarray | None = None):
        self._n = int(length)
        if words is None:
            words = np.zeros(nwords(self._n), dtype=np.uint64)
        words = np.array(words, dtype=np.uint64).reshape(-1)
        if words.shape[0] != nwords(self._n):
            raise ValueError("word count does not match length")
        tail = self._n % WORD
        if tail and self._n:
            words[-1] &= np.uint64((1 << tail) - 1)
        if self._n == 0:
            words[:] = 0
        words.flags.writeable = False
        self._w = words

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitVector:
        arr = np.fromiter((int(b) & 1 for b in bits), dtype=np.uint8)
        return cls(len(arr), pack(arr[None, :], len(arr))[0])

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> BitVector:
        arr = np.zeros(length, dtype=np.uint8)
        for i in support:
            if not 0 <= i < length:
                raise IndexError(f"bit {i} out of range for length {length}")
            arr[i] = 1
        return cls(length, pack(arr[None, :], length)[0])

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length)

    def __len__(self) -> int:
        return self._n

    @property
    def words(self) -> np.ndarray:
        return self._w

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self._n
        if not 0 <= i < self._n:
            raise IndexError(i)
        return int((int(self._w[i >> 6]) >> (i & 63)) & 1)

    def to_array(self) -> np.ndarray:
        return unpack(self._w[None, :], self._n)[0]

    def support(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.to_array())]

    def weight(self) -> int:
        return int(np.bitwise_count(self._w).sum())

    def any(self) -> bool:
        return bool(self._w.any())

    def _check(self, other: BitVector) -> None:
        if self._n != other._n:
            raise ValueError(f"length mismatch: {self._n} vs {other._n}")

    def __xor__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self._n, self._w ^ other._w)

    def __and__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self._n, self._w & other._w)

    def __or__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self._n, self._w | other._w)

    def dot(self, other: BitVector) -> int:
        """Inner product mod 2."""
        self._check(other)
        return int(np.bitwise_count(self._w & other._w).sum()) & 1

    def concat(self, other: BitVector) -> BitVector:
        return BitVector.from_bits(np.concatenate([self.to_array(), other.to_array()]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self._n == other._n and bool(np.array_equal(self._w, other._w))

    def __hash__(self) -> int:
        return hash((self._n, self._w.tobytes()))

    def __repr__(self) -> str:
        return f"BitVector('{''.join(map(str, self.to_array()))}')"


class BitMatrix:
    """Dense packed matrix over GF(2), row-major.

    Instances are treated as immutable; operations return new matrices.
    """

    __slots__ = ("rows", "cols", "_w")

    def __init__(self, rows: int, cols: int, words: np.ndarray | None = None):
        self.rows, self.cols = int(rows), int(cols)
        if words is None:
            words = np.zeros((self.rows, nwords(self.cols)), dtype=np.uint64)
        self._w = np.ascontiguousarray(words, dtype=np.uint64).reshape(self.rows, nwords(self.cols))

    @classmethod
    def from_dense(cls, dense: np.ndarray | Sequence[Sequence[int]], cols: int | None = None) -> BitMatrix:
        arr = np.asarray(dense, dtype=np.uint8)
        if arr.ndim == 1:
            arr = arr.reshape(0 if arr.size == 0 else 1, -1)
        if cols is None:
            cols = arr.shape[1]
        if arr.shape[0] == 0:
            return cls(0, cols)
        return cls(arr.shape[0], cols, pack(arr, cols))

    @classmethod
    def from_vectors(cls, vectors: Sequence[BitVector], cols: int) -> BitMatrix:
        if not vectors:
            return cls(0, cols)
        for v in vectors:
            if len(v) != cols:
                raise ValueError("vector length does not match column count")
        return cls(len(vectors), cols, np.stack([v.words for v in vectors]))

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_dense(np.eye(n, dtype=np.uint8), n)

    @property
    def words(self) -> np.ndarray:
        return self._w

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_dense(self) -> np.ndarray:
        if self.rows == 0:
            return np.zeros((0, self.cols), dtype=np.uint8)
        return unpack(self._w, self.cols)

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self._w[i].copy())

    def row_vectors(self) -> list[BitVector]:
        return [self.row(i) for i in range(self.rows)]

    def vstack(self, other: BitMatrix) -> BitMatrix:
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return BitMatrix(self.rows + other.rows, self.cols, np.vstack([self._w, other._w]))

    def transpose(self) -> BitMatrix:
        return BitMatrix.from_dense(self.to_dense().T, self.rows)

    def matvec(self, v: BitVector) -> BitVector:
        if len(v) != self.cols:
            raise ValueError("length mismatch")
        bits = np.bitwise_count(self._w & v.words[None, :]).sum(axis=1) & 1
        return BitVector.from_bits(bits.tolist())

    def rref(self) -> tuple[BitMatrix, list[int]]:
        """Reduced row echelon form and pivot columns."""
        work = self._w.copy()
        pivots = kernels.rref_inplace(work, self.cols)
        return BitMatrix(self.rows, self.cols, work), list(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def independent_rows(self) -> BitMatrix:
        """A basis of the row space (the nonzero rows of the RREF)."""
        red, piv = self.rref()
        return BitMatrix(len(piv), self.cols, red._w[: len(piv)].copy())

    def kernel_basis(self) -> list[BitVector]:
        """Basis of ``{v : M v = 0}``; size is ``cols - rank``."""
        red, piv = self.rref()
        dense = red.to_dense()[: len(piv)]
        free = [c for c in range(self.cols) if c not in set(piv)]
        basis = []
        for f in free:
            v = np.zeros(self.cols, dtype=np.uint8)
            v[f] = 1
            for r, p in enumerate(piv):
                v[p] = dense[r, f]
            basis.append(BitVector.from_bits(v))
        return basis

    def in_rowspace(self, v: BitVector) -> bool:
        if len(v) != self.cols:
            raise ValueError(f"length mismatch: vector {len(v)} vs {self.cols} columns")
        if self.rows == 0:
            return not v.any()
        return self.vstack(BitMatrix.from_vectors([v], self.cols)).rank() == self.rank()

    def solve(self, b: BitVector) -> BitVector | None:
        """Some ``x`` with ``M x = b``, or ``None`` when inconsistent."""
        if len(b) != self.rows:
            raise ValueError("right-hand side length mismatch")
        aug = np.concatenate([self.to_dense(), b.to_array()[:, None]], axis=1)
        red, piv = BitMatrix.from_dense(aug, self.cols + 1).rref()
        if self.cols in piv:
            return None
        dense = red.to_dense()
        x = np.zeros(self.cols, dtype=np.uint8)
        for r, p in enumerate(piv):
            x[p] = dense[r, self.cols]
        return BitVector.from_bits(x)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._w, other._w))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def rank(m: BitMatrix) -> int:
    return m.rank()


def kernel_basis(m: BitMatrix) -> list[BitVector]:
    return m.kernel_basis()


def in_rowspace(m: BitMatrix, v: BitVector) -> bool:
    return m.in_rowspace(v)


def inverse(m: BitMatrix) -> BitMatrix:
    """Inverse of a square invertible matrix."""
    if m.rows != m.cols:
        raise ValueError("matrix is not square")
    n = m.rows
    aug = np.concatenate([m.to_dense(), np.eye(n, dtype=np.uint8)], axis=1)
    red, piv = BitMatrix.from_dense(aug, 2 * n).rref()
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ValueError("matrix is singular")
    return BitMatrix.from_dense(red.to_dense()[:, n:], n)
