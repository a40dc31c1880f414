"""Stabilizer tableau simulation with Pauli-product measurements.

Rows ``0..n-1`` are destabilizers and ``n..2n-1`` stabilizers. Each row is
a Pauli in the ``i**phase X(x) Z(z)`` convention of :mod:`pauli`, so row
products are ``phase = p1 + p2 + 2 z1.x2``.
"""

from __future__ import annotations

import numpy as np

from .pauli import PauliOperator


class StabilizerTableau:
    def __init__(self, n: int, seed: int | np.random.Generator | None = 0):
        if n < 1:
            raise ValueError("need at least one qubit")
        self.n = n
        self.x = np.zeros((2 * n, n), dtype=np.uint8)
        self.z = np.zeros((2 * n, n), dtype=np.uint8)
        self.phase = np.zeros(2 * n, dtype=np.int64)
        idx = np.arange(n)
        self.x[idx, idx] = 1  # destabilizers X_i
        self.z[n + idx, idx] = 1  # stabilizers Z_i
        self.rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    # construction ------------------------------------------------------
    @classmethod
    def zero_state(cls, n: int, seed=0) -> StabilizerTableau:
        return cls(n, seed)

    @classmethod
    def plus_state(cls, n: int, seed=0) -> StabilizerTableau:
        t = cls(n, seed)
        t.h(range(n))
        return t

    def copy(self) -> StabilizerTableau:
        other = StabilizerTableau.__new__(StabilizerTableau)
        other.n = self.n
        other.x, other.z, other.phase = self.x.copy(), self.z.copy(), self.phase.copy()
        other.rng = np.random.default_rng()
        other.rng.bit_generator.state = self.rng.bit_generator.state
        return other

    # gates ---------------------------------------------------------------
    def _targets(self, qubits) -> np.ndarray:
        q = np.atleast_1d(np.asarray(list(qubits) if not np.isscalar(qubits) else [qubits], dtype=np.int64))
        if q.size and (q.min() < 0 or q.max() >= self.n):
            raise IndexError(f"qubit out of range for {self.n} qubits: {q.tolist()}")
        return q

    def h(self, qubits) -> None:
        for a in self._targets(qubits):
            xa, za = self.x[:, a].copy(), self.z[:, a].copy()
            self.phase += 2 * (xa & za)
            self.x[:, a], self.z[:, a] = za, xa

    def s(self, qubits) -> None:
        for a in self._targets(qubits):
            self.phase += self.x[:, a]
            self.z[:, a] ^= self.x[:, a]

    def sdg(self, qubits) -> None:
        for a in self._targets(qubits):
            self.phase += 3 * self.x[:, a]
            self.z[:, a] ^= self.x[:, a]

    def cx(self, control: int, target: int) -> None:
        c, t = self._targets([control, target])
        if c == t:
            raise ValueError("control equals target")
        self.x[:, t] ^= self.x[:, c]
        self.z[:, c] ^= self.z[:, t]

    def cz(self, a: int, b: int) -> None:
        a, b = self._targets([a, b])
        if a == b:
            raise ValueError("CZ needs two distinct qubits")
        self.phase += 2 * (self.x[:, a] & self.x[:, b])
        self.z[:, a] ^= self.x[:, b]
        self.z[:, b] ^= self.x[:, a]

    def apply_pauli(self, p: PauliOperator) -> None:
        """Conjugate by ``p``: rows that anticommute with it change sign."""
        if p.n != self.n:
            raise ValueError("Pauli size mismatch")
        anti = self._anticommuting(p)
        self.phase += 2 * anti

    def apply(self, gate: str, *targets: int) -> None:
        name = gate.upper()
        if name == "H":
            self.h(targets)
        elif name == "S":
            self.s(targets)
        elif name in ("SDG", "S_DAG", "SDAG"):
            self.sdg(targets)
        elif name in ("CX", "CNOT"):
            self.cx(*targets)
        elif name == "CZ":
            self.cz(*targets)
        elif name in ("X", "Y", "Z"):
            for q in targets:
                self.apply_pauli(_single(self.n, name, q))
        else:
            raise ValueError(f"unknown gate {gate!r}")

    # measurement ----------------------------------------------------------
    def _anticommuting(self, p: PauliOperator) -> np.ndarray:
        px = p.x.to_array().astype(np.int64)
        pz = p.z.to_array().astype(np.int64)
        return ((self.x.astype(np.int64) @ pz + self.z.astype(np.int64) @ px) & 1).astype(np.int64)

    def _deterministic_outcome(self, p: PauliOperator, anti: np.ndarray) -> int:
        n = self.n
        acc_x = np.zeros(n, dtype=np.uint8)
        acc_z = np.zeros(n, dtype=np.uint8)
        acc_p = 0
        for i in np.flatnonzero(anti[:n]):
            s = n + i
            acc_p += int(self.phase[s]) + 2 * int(np.dot(acc_z, self.x[s]) & 1)
            acc_x ^= self.x[s]
            acc_z ^= self.z[s]
        if not (np.array_equal(acc_x, p.x.to_array()) and np.array_equal(acc_z, p.z.to_array())):
            raise RuntimeError("tableau is inconsistent: stabilizer product does not reproduce the operator")
        diff = (acc_p - p.phase) % 4
        if diff % 2:
            raise ValueError("measured operator is not Hermitian")
        return diff // 2

    def peek(self, p: PauliOperator) -> int | None:
        """Outcome bit if ``p`` is (up to sign) a stabilizer, else ``None``."""
        if p.n != self.n:
            raise ValueError("Pauli size mismatch")
        anti = self._anticommuting(p)
        if anti[self.n :].any():
            return None
        return self._deterministic_outcome(p, anti)

    def expectation(self, p: PauliOperator) -> int:
        bit = self.peek(p)
        return 0 if bit is None else 1 - 2 * bit

    def measure(self, p: PauliOperator, forced: int | None = None) -> tuple[int, bool]:
        """Measure Hermitian ``p``; return ``(outcome bit, deterministic)``.

        ``forced`` selects the outcome of a random measurement; it is ignored
        when the outcome is determined by the state.
        """
        if p.n != self.n:
            raise ValueError("Pauli size mismatch")
        if not p.is_hermitian():
            raise ValueError("measured operator is not Hermitian")
        if p.weight() == 0:
            raise ValueError("cannot measure the identity")
        n = self.n
        anti = self._anticommuting(p)
        hits = np.flatnonzero(anti[n:])
        if hits.size == 0:
            return self._deterministic_outcome(p, anti), True

        piv = n + int(hits[0])
        others = np.flatnonzero(anti)
        others = others[others != piv]
        if others.size:
            cross = (self.z[others].astype(np.int64) @ self.x[piv].astype(np.int64)) & 1
            self.phase[others] += self.phase[piv] + 2 * cross
            self.x[others] ^= self.x[piv]
            self.z[others] ^= self.z[piv]
        d = piv - n
        self.x[d], self.z[d], self.phase[d] = self.x[piv], self.z[piv], self.phase[piv]
        bit = int(self.rng.integers(2)) if forced is None else int(forced) & 1
        self.x[piv] = p.x.to_array()
        self.z[piv] = p.z.to_array()
        self.phase[piv] = p.phase + 2 * bit
        self.phase %= 4
        return bit, False

    def measure_pauli(self, p: PauliOperator, forced: int | None = None) -> tuple[int, bool]:
        return self.measure(p, forced)

    # inspection -------------------------------------------------------------
    def stabilizers(self) -> list[PauliOperator]:
        n = self.n
        return [PauliOperator.from_xz(self.x[n + i], self.z[n + i], self.phase[n + i]) for i in range(n)]

    def destabilizers(self) -> list[PauliOperator]:
        return [PauliOperator.from_xz(self.x[i], self.z[i], self.phase[i]) for i in range(self.n)]

    def check_invariants(self) -> None:
        """Raise if rows do not form a symplectic basis with Hermitian stabilizers."""
        n = self.n
        x = self.x.astype(np.int64)
        z = self.z.astype(np.int64)
        form = (x @ z.T + z @ x.T) & 1
        want = np.zeros((2 * n, 2 * n), dtype=np.int64)
        want[np.arange(n), n + np.arange(n)] = 1
        want[n + np.arange(n), np.arange(n)] = 1
        if not np.array_equal(form, want):
            raise AssertionError("rows are not a symplectic basis")
        herm = (self.phase - (self.x & self.z).sum(axis=1)) % 2
        if herm.any():
            raise AssertionError("a tableau row is not Hermitian")


def _single(n: int, letter: str, q: int) -> PauliOperator:
    s = ["I"] * n
    s[q] = letter
    return PauliOperator.from_string("".join(s))


def prepare_plus_all(n: int, seed=0) -> StabilizerTableau:
    return StabilizerTableau.plus_state(n, seed)


def prepare_zero_all(n: int, seed=0) -> StabilizerTableau:
    return StabilizerTableau.zero_state(n, seed)


def apply_clifford(t: StabilizerTableau, gate: str, targets) -> None:
    t.apply(gate, *([targets] if np.isscalar(targets) else list(targets)))


def measure_pauli(t: StabilizerTableau, p: PauliOperator, forced: int | None = None) -> tuple[int, bool]:
    return t.measure(p, forced)
