"""n-qubit Pauli operators.

Convention: a Pauli is stored as ``i**phase * X(x) Z(z)`` where, on each
qubit, the X factor is written to the left of the Z factor. Hence
``Y = i X Z`` has ``x = z = 1`` and ``phase = 1``. The text form uses the
usual letters with an optional leading ``+``, ``-``, ``+i`` or ``-i``; the
conversion accounts for one factor of ``i`` per ``Y``.
"""

from __future__ import annotations

import re
from collections.abc import Iterable

import numpy as np

from .gf2 import BitVector

_PREFIX = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}
_PREFIX_OUT = {0: "", 1: "+i", 2: "-", 3: "-i"}
_TEXT = re.compile(r"^\s*([+-]?i?)\s*([IXYZ]*)\s*$")


class PauliOperator:
    """Immutable Pauli operator ``i**phase X(x) Z(z)`` on ``n`` qubits."""

    __slots__ = ("n", "x", "z", "phase")

    def __init__(self, x: BitVector, z: BitVector, phase: int = 0):
        if len(x) != len(z):
            raise ValueError("x and z supports must have equal length")
        self.n = len(x)
        self.x = x
        self.z = z
        self.phase = int(phase) % 4

    # construction ----------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> PauliOperator:
        return cls(BitVector.zeros(n), BitVector.zeros(n))

    @classmethod
    def from_xz(cls, x: Iterable[int], z: Iterable[int], phase: int = 0) -> PauliOperator:
        return cls(BitVector.from_bits(x), BitVector.from_bits(z), phase)

    @classmethod
    def x_on(cls, n: int, qubits: Iterable[int]) -> PauliOperator:
        return cls(BitVector.from_support(n, qubits), BitVector.zeros(n))

    @classmethod
    def z_on(cls, n: int, qubits: Iterable[int]) -> PauliOperator:
        return cls(BitVector.zeros(n), BitVector.from_support(n, qubits))

    @classmethod
    def from_string(cls, text: str) -> PauliOperator:
        m = _TEXT.match(text)
        if m is None:
            raise ValueError(f"not a Pauli string: {text!r}")
        prefix, letters = m.groups()
        if prefix not in _PREFIX:
            raise ValueError(f"bad phase prefix {prefix!r}")
        arr = np.frombuffer(letters.encode(), dtype=np.uint8)
        x = (arr == ord("X")) | (arr == ord("Y"))
        z = (arr == ord("Z")) | (arr == ord("Y"))
        n_y = int(np.count_nonzero(arr == ord("Y")))
        return cls.from_xz(x, z, _PREFIX[prefix] + n_y)

    def to_string(self) -> str:
        x, z = self.x.to_array(), self.z.to_array()
        letters = np.array(list("IXZY"))[x + 2 * z]
        n_y = int(np.count_nonzero(x & z))
        return _PREFIX_OUT[(self.phase - n_y) % 4] + "".join(letters)

    __str__ = to_string

    def __repr__(self) -> str:
        return f"PauliOperator('{self.to_string()}')"

    # algebra ---------------------------------------------------------
    def _check(self, other: PauliOperator) -> None:
        if self.n != other.n:
            raise ValueError(f"qubit count mismatch: {self.n} vs {other.n}")

    def commutes(self, other: PauliOperator) -> bool:
        self._check(other)
        return (self.x.dot(other.z) ^ self.z.dot(other.x)) == 0

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        # X^a Z^b X^c Z^d = (-1)^{b.c} X^{a+c} Z^{b+d}
        self._check(other)
        phase = self.phase + other.phase + 2 * self.z.dot(other.x)
        return PauliOperator(self.x ^ other.x, self.z ^ other.z, phase)

    def multiply(self, other: PauliOperator) -> PauliOperator:
        return self * other

    def with_phase(self, phase: int) -> PauliOperator:
        return PauliOperator(self.x, self.z, phase)

    def negate(self) -> PauliOperator:
        return self.with_phase(self.phase + 2)

    def is_hermitian(self) -> bool:
        return (self.phase - self.x.dot(self.z)) % 2 == 0

    def sign(self) -> int:
        """+1 or -1 for Hermitian operators, relative to the letter form."""
        k = (self.phase - (self.x & self.z).weight()) % 4
        if k % 2:
            raise ValueError("operator is not Hermitian")
        return 1 if k == 0 else -1

    def unsigned(self) -> PauliOperator:
        """Same letters with sign +1."""
        return PauliOperator(self.x, self.z, (self.x & self.z).weight())

    def weight(self) -> int:
        return (self.x | self.z).weight()

    def support(self) -> list[int]:
        return (self.x | self.z).support()

    def is_x_type(self) -> bool:
        return not self.z.any()

    def is_z_type(self) -> bool:
        return not self.x.any()

    def embed(self, n_total: int, qubits: list[int]) -> PauliOperator:
        """Place this operator on ``qubits`` of an ``n_total``-qubit register."""
        if len(qubits) != self.n:
            raise ValueError("qubit map length mismatch")
        x = np.zeros(n_total, dtype=np.uint8)
        z = np.zeros(n_total, dtype=np.uint8)
        x[qubits] = self.x.to_array()
        z[qubits] = self.z.to_array()
        return PauliOperator.from_xz(x, z, self.phase)

    def restrict(self, qubits: list[int]) -> PauliOperator:
        x = self.x.to_array()[qubits]
        z = self.z.to_array()[qubits]
        return PauliOperator.from_xz(x, z, 0).unsigned()

    def to_matrix(self) -> np.ndarray:
        """Dense ``2**n x 2**n`` matrix; qubit 0 is the most significant bit."""
        mx = np.array([[0, 1], [1, 0]], dtype=complex)
        mz = np.array([[1, 0], [0, -1]], dtype=complex)
        out = np.array([[1.0 + 0j]])
        for xi, zi in zip(self.x.to_array(), self.z.to_array()):
            factor = np.eye(2, dtype=complex)
            if xi:
                factor = factor @ mx
            if zi:
                factor = factor @ mz
            out = np.kron(out, factor)
        return (1j**self.phase) * out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return self.phase == other.phase and self.x == other.x and self.z == other.z

    def __hash__(self) -> int:
        return hash((self.phase, self.x, self.z))
