"""Diagonal gates given by phase functions and their teleportation.

A gate ``U|x> = exp(i pi f(x)) |x>`` is stored through the exact table of
``f`` modulo 2. Basis index ``x`` has qubit 0 as its most significant bit.
"""

from __future__ import annotations

import csv
import io
import functools
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

MAX_DENSE_QUBITS = 6


class SpecError(ValueError):
    pass


def _mod2(q: Fraction) -> Fraction:
    return q - 2 * (q.numerator // (2 * q.denominator))


def _dyadic(q) -> Fraction:
    q = Fraction(q)
    d = q.denominator
    if d & (d - 1):
        raise SpecError(f"{q} is not a dyadic rational")
    return q


def _bits_of(x: int, n: int) -> tuple[int, ...]:
    return tuple((x >> (n - 1 - i)) & 1 for i in range(n))


def _index(bits) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


def mobius(values: list[Fraction], nvars: int) -> dict[tuple[int, ...], Fraction]:
    """Multilinear coefficients of a function on ``F_2^nvars``.

    ``values[idx]`` is the function at the point with bits ``_bits_of(idx)``;
    keys of the result are sorted variable tuples.
    """
    coeff = list(values)
    for v in range(nvars):
        bit = 1 << (nvars - 1 - v)
        for idx in range(len(coeff)):
            if idx & bit:
                coeff[idx] = coeff[idx] - coeff[idx ^ bit]
    out = {}
    for idx, c in enumerate(coeff):
        if c:
            out[tuple(i for i, b in enumerate(_bits_of(idx, nvars)) if b)] = c
    return out


@dataclass(frozen=True)
class DiagonalGateSpec:
    n: int
    table: tuple[Fraction, ...]
    name: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise SpecError("need at least one qubit")
        if len(self.table) != 2**self.n:
            raise SpecError(f"phase table needs {2**self.n} entries, got {len(self.table)}")
        object.__setattr__(self, "table", tuple(_mod2(_dyadic(v)) for v in self.table))

    @classmethod
    def from_function(cls, n: int, fn, name: str = "") -> DiagonalGateSpec:
        return cls(n, tuple(Fraction(fn(_bits_of(x, n))) for x in range(2**n)), name)

    @classmethod
    def from_monomials(cls, n: int, terms: dict[tuple[int, ...], Any], name: str = "") -> DiagonalGateSpec:
        def fn(bits):
            return sum((Fraction(c) for vs, c in terms.items() if all(bits[v] for v in vs)), Fraction(0))

        return cls.from_function(n, fn, name)

    def f(self, bits) -> Fraction:
        return self.table[_index(bits)]

    def monomials(self) -> dict[tuple[int, ...], Fraction]:
        """Multilinear expansion with coefficients reduced mod 2."""
        out = {}
        for k, c in mobius(list(self.table), self.n).items():
            c = _mod2(c)
            if c:
                out[k] = c
        return out

    def phases(self) -> np.ndarray:
        return np.exp(1j * np.pi * np.array([float(v) for v in self.table]))

    def matrix(self) -> np.ndarray:
        return np.diag(self.phases())

    def level(self, max_level: int = 8) -> int:
        return clifford_level(list(self.table), self.n, max_level)

    # I/O -------------------------------------------------------------------
    def to_dict(self, form: str = "table") -> dict[str, Any]:
        data: dict[str, Any] = {"n": self.n, "name": self.name}
        if form == "table":
            data["table"] = [_fmt_dyadic(v) for v in self.table]
        elif form == "monomials":
            data["monomials"] = [{"vars": list(k), "coeff": _fmt_dyadic(c)} for k, c in sorted(self.monomials().items())]
        else:
            raise ValueError("form must be 'table' or 'monomials'")
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> DiagonalGateSpec:
        n = int(data["n"])
        name = data.get("name", "")
        if "table" in data:
            return cls(n, tuple(_parse_dyadic(s) for s in data["table"]), name)
        if "monomials" in data:
            terms = {tuple(t["vars"]): _parse_dyadic(t["coeff"]) for t in data["monomials"]}
            return cls.from_monomials(n, terms, name)
        raise SpecError("spec needs either 'table' or 'monomials'")


def _fmt_dyadic(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _parse_dyadic(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return _dyadic(s)
    text = str(s).strip().replace("2^", "2**")
    if "/" in text:
        num, den = text.split("/", 1)
        den_v = eval_power(den)
        return _dyadic(Fraction(int(num), den_v))
    return _dyadic(Fraction(text))


def eval_power(text: str) -> int:
    text = text.strip()
    if "**" in text:
        base, exp = text.split("**", 1)
        return int(base) ** int(exp)
    return int(text)


def load_spec(path: str | Path) -> DiagonalGateSpec:
    return DiagonalGateSpec.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def save_spec(spec: DiagonalGateSpec, path: str | Path, form: str = "table") -> None:
    Path(path).write_text(json.dumps(spec.to_dict(form), sort_keys=True, indent=1) + "\n", encoding="utf-8")


def t_gate() -> DiagonalGateSpec:
    return DiagonalGateSpec.from_monomials(1, {(0,): Fraction(1, 4)}, "T")


def s_gate() -> DiagonalGateSpec:
    return DiagonalGateSpec.from_monomials(1, {(0,): Fraction(1, 2)}, "S")


def cs_gate() -> DiagonalGateSpec:
    return DiagonalGateSpec.from_monomials(2, {(0, 1): Fraction(1, 2)}, "CS")


def ccz_gate() -> DiagonalGateSpec:
    return DiagonalGateSpec.from_monomials(3, {(0, 1, 2): 1}, "CCZ")


NAMED_SPECS = {"T": t_gate, "S": s_gate, "CS": cs_gate, "CCZ": ccz_gate}


def clifford_level(table: list[Fraction], n: int, max_level: int = 8) -> int:
    """Clifford-hierarchy level of the diagonal gate with phase table ``table``.

    Level 1 means a Pauli up to global phase. Otherwise the level is one more
    than the largest level among the diagonal parts ``f(x + y) - f(x)``.
    """
    return _level(tuple(_mod2(Fraction(v)) for v in table), n, max_level)


@functools.lru_cache(maxsize=4096)
def _level(table: tuple[Fraction, ...], n: int, max_level: int) -> int:
    coeffs = {k: _mod2(c) for k, c in mobius(table, n).items() if k}
    if all(len(k) == 1 and c.denominator == 1 for k, c in coeffs.items() if c):
        return 1
    if max_level <= 1:
        raise SpecError("level exceeds the configured maximum")
    worst = 1
    for y in range(1, 2**n):
        diff = tuple(_mod2(table[x ^ y] - table[x]) for x in range(2**n))
        worst = max(worst, _level(diff, n, max_level - 1))
    return worst + 1


# gates -------------------------------------------------------------------


@dataclass(frozen=True)
class DiagGate:
    """Diagonal gate ``exp(i pi coeff * prod_{t in targets} x_t)``."""

    coeff: Fraction
    targets: tuple[int, ...]

    @property
    def name(self) -> str:
        k, c = len(self.targets), _mod2(self.coeff)
        base = {1: "", 2: "C", 3: "CC"}.get(k, "C" * (k - 1))
        if c == 1:
            return base + "Z"
        if c == Fraction(1, 2):
            return base + "S"
        if c == Fraction(3, 2):
            return base + "S^dag"
        if c == Fraction(1, 4):
            return base + "T"
        if c == Fraction(7, 4):
            return base + "T^dag"
        return f"{base}P({_fmt_dyadic(c)})"

    def label(self, one_based: bool = True, subscripts: bool = True) -> str:
        if not subscripts:
            return self.name
        idx = [t + 1 if one_based else t for t in self.targets]
        if len(idx) == 1:
            return f"{self.name}_{idx[0]}"
        return f"{self.name}_{{{','.join(map(str, idx))}}}"

    def is_clifford(self) -> bool:
        c = _mod2(self.coeff)
        return len(self.targets) == 1 and c.denominator <= 2 or len(self.targets) == 2 and c.denominator == 1

    def table(self, n: int) -> list[Fraction]:
        return [self.coeff if all(_bits_of(x, n)[t] for t in self.targets) else Fraction(0) for x in range(2**n)]


def gates_from_phase(table: list[Fraction], n: int) -> tuple[list[DiagGate], Fraction]:
    """Decompose a phase function into monomial gates plus a global phase."""
    gates, glob = [], Fraction(0)
    for k, c in sorted(mobius(table, n).items(), key=lambda kv: (len(kv[0]), kv[0])):
        c = _mod2(c)
        if not c:
            continue
        if not k:
            glob = c
        else:
            gates.append(DiagGate(c, k))
    return gates, glob


def phase_of_gates(gates: list[DiagGate], n: int) -> list[Fraction]:
    out = [Fraction(0)] * (2**n)
    for g in gates:
        out = [a + b for a, b in zip(out, g.table(n))]
    return [_mod2(v) for v in out]


@dataclass
class TeleportOutcome:
    m_zz: tuple[int, ...]
    m_x: tuple[int, ...]
    correction: list[DiagGate] = field(default_factory=list)
    global_phase: Fraction = Fraction(0)  # units of pi

    def labels(self, subscripts: bool = True) -> list[str]:
        return [g.label(subscripts=subscripts) for g in self.correction]


def _check_bits(bits, n: int, what: str) -> tuple[int, ...]:
    bits = tuple(int(b) for b in bits)
    if len(bits) != n or any(b not in (0, 1) for b in bits):
        raise ValueError(f"{what} must be {n} bits, got {bits}")
    return bits


def correction_phase(spec: DiagonalGateSpec, m_zz, m_x) -> list[Fraction]:
    """``c(x) = f(x) - f(x + m_ZZ) - (x + m_ZZ).m_X`` for every basis state."""
    n = spec.n
    m = _index(m_zz)
    out = []
    for x in range(2**n):
        y = _bits_of(x ^ m, n)
        out.append(_mod2(spec.table[x] - spec.table[x ^ m] - sum(a * b for a, b in zip(y, m_x))))
    return out


def correction_operator(spec: DiagonalGateSpec, m_zz, m_x, max_level: int = 3) -> TeleportOutcome:
    """Gate list realizing the teleportation correction for given outcomes.

    Gates on the same monomial are merged, so for example ``S`` followed by
    ``Z`` on one qubit is reported as ``S^dag``.
    """
    n = spec.n
    m_zz = _check_bits(m_zz, n, "m_ZZ")
    m_x = _check_bits(m_x, n, "m_X")
    if spec.level(max_level + 1) > max_level:
        raise SpecError(f"gate level exceeds the configured maximum {max_level}")
    gates, glob = gates_from_phase(correction_phase(spec, m_zz, m_x), n)
    return TeleportOutcome(m_zz, m_x, gates, glob)


def magic_state(spec: DiagonalGateSpec) -> np.ndarray:
    if spec.n > MAX_DENSE_QUBITS:
        raise SpecError(f"dense simulation is limited to {MAX_DENSE_QUBITS} qubits")
    return spec.phases() / np.sqrt(2**spec.n)


def _apply_diag(state: np.ndarray, table: list[Fraction]) -> np.ndarray:
    return state * np.exp(1j * np.pi * np.array([float(v) for v in table]))


@dataclass
class TeleportRun:
    output: np.ndarray
    outcome: TeleportOutcome
    raw_output: np.ndarray
    ancilla_purity: float
    probability: float


def simulate_teleport(
    spec: DiagonalGateSpec,
    psi: np.ndarray,
    forced: tuple[tuple[int, ...], tuple[int, ...]] | None = None,
    rng: np.random.Generator | None = None,
) -> TeleportRun:
    """Dense simulation of teleporting ``U`` into ``psi``.

    Register: ``n`` data qubits then ``n`` resource qubits holding
    ``U|+>^n``. Each pair ``(i, n+i)`` is measured in ZZ, then every
    resource qubit in X, then the correction is applied to the data.
    ``forced`` fixes ``(m_ZZ, m_X)``; otherwise outcomes are sampled.
    """
    n = spec.n
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape[0] != 2**n:
        raise ValueError(f"state must have {2**n} amplitudes")
    if abs(np.vdot(psi, psi) - 1) > 1e-9:
        raise ValueError("input state is not normalized")
    rng = rng or np.random.default_rng(0)
    state = np.kron(psi, magic_state(spec))
    dim = 2**n
    data_idx, anc_idx = np.divmod(np.arange(dim * dim), dim)
    prob = 1.0

    m_zz = []
    for i in range(n):
        shift = n - 1 - i
        parity = ((data_idx >> shift) ^ (anc_idx >> shift)) & 1
        p1 = float(np.sum(np.abs(state[parity == 1]) ** 2))
        if forced is not None:
            bit = _check_bits(forced[0], n, "m_ZZ")[i]
        else:
            bit = int(rng.random() < p1)
        p = p1 if bit else 1 - p1
        if p < 1e-14:
            raise ValueError(f"forced ZZ outcome on pair {i} has zero probability")
        state = np.where(parity == bit, state, 0) / np.sqrt(p)
        prob *= p
        m_zz.append(bit)

    mat = state.reshape(dim, dim)
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    hn = np.array([[1.0 + 0j]])
    for _ in range(n):
        hn = np.kron(hn, h)
    rot = mat @ hn.T  # ancilla now in the Z basis of H|.>
    if forced is not None:
        mx = _check_bits(forced[1], n, "m_X")
        col = _index(mx)
        p = float(np.sum(np.abs(rot[:, col]) ** 2))
    else:
        probs = np.sum(np.abs(rot) ** 2, axis=0)
        col = int(rng.choice(dim, p=probs / probs.sum()))
        mx = _bits_of(col, n)
        p = float(probs[col])
    prob *= p
    raw = rot[:, col] / np.sqrt(p)
    # joint state after projecting the resource onto H^n|m_X>
    joint = np.outer(raw, hn[:, col])
    purity = _purity(joint)
    outcome = correction_operator(spec, m_zz, mx, max_level=max(spec.level(), 3))
    out = _apply_diag(raw, phase_of_gates(outcome.correction, n))
    return TeleportRun(out, outcome, raw, purity, prob)


def _purity(mat: np.ndarray) -> float:
    rho = mat.T @ mat.conj()
    return float(np.real(np.trace(rho @ rho)))


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    return float(abs(np.vdot(a, b)) ** 2)


def simulate_standard_teleport(psi: np.ndarray, forced: int | None = None, rng=None) -> tuple[np.ndarray, int]:
    """Single-qubit T teleportation: CNOT data to resource, measure Z, apply S^m."""
    psi = np.asarray(psi, dtype=complex).reshape(2)
    rng = rng or np.random.default_rng(0)
    state = np.kron(psi, magic_state(t_gate()))
    cnot = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
    state = cnot @ state
    mat = state.reshape(2, 2)
    probs = np.sum(np.abs(mat) ** 2, axis=0)
    m = int(forced) if forced is not None else int(rng.random() < probs[1])
    out = mat[:, m] / np.sqrt(probs[m])
    if m:
        out = np.array([out[0], 1j * out[1]])
    return out, m


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return v / np.linalg.norm(v)


def all_outcomes(n: int):
    for zz in itertools.product((0, 1), repeat=n):
        for xx in itertools.product((0, 1), repeat=n):
            yield zz, xx


# key tables ------------------------------------------------------------------


@dataclass(frozen=True)
class KeyRow:
    key: str
    gate: str


def _m_name(kind: str, i: int, n: int) -> str:
    return f"m_{{{kind}}}" if n == 1 else f"m_{{{kind},{i + 1}}}"


def _key_text(terms: list[tuple[int, ...]], n: int) -> str:
    """Render a sum of monomials in ``(m_ZZ, m_X)``; variable ``v < n`` is
    ``m_ZZ,v+1`` and ``v >= n`` is ``m_X,v-n+1``."""

    def name(v: int) -> str:
        return _m_name("ZZ", v, n) if v < n else _m_name("X", v - n, n)

    def order(t: tuple[int, ...]):
        return (0 if any(v >= n for v in t) else 1, len(t), t)

    return "+".join("".join(name(v) for v in t) for t in sorted(terms, key=order))


def correction_key_table(spec: DiagonalGateSpec, max_level: int = 3) -> list[KeyRow]:
    """Gates of the correction and the outcome expressions that switch them on.

    The correction phase is expanded jointly in ``x`` and the outcome bits.
    For every ``x``-monomial, integer coefficients of outcome monomials sum
    into one parity key for the Z-type gate; each half-integer coefficient
    gives its own ``S``-type gate keyed by that outcome monomial.
    """
    n = spec.n
    if spec.level(max_level + 1) > max_level:
        raise SpecError(f"key tables are only produced up to level {max_level}")
    total = 3 * n
    values = []
    for idx in range(2**total):
        bits = _bits_of(idx, total)
        x, mzz, mx = bits[:n], bits[n : 2 * n], bits[2 * n :]
        xm = _index(x) ^ _index(mzz)
        y = _bits_of(xm, n)
        values.append(spec.table[_index(x)] - spec.table[xm] - sum(a * b for a, b in zip(y, mx)))
    coeff = mobius(values, total)

    grouped: dict[tuple[int, ...], list[tuple[tuple[int, ...], Fraction]]] = {}
    for k, c in coeff.items():
        xs = tuple(v for v in k if v < n)
        ms = tuple(v - n for v in k if v >= n)
        if xs:
            grouped.setdefault(xs, []).append((ms, c))

    rows: list[tuple[tuple, KeyRow]] = []
    for xs, terms in grouped.items():
        parity = []
        for ms, c in terms:
            c = _mod2(c)
            if c > 1:
                c -= 2  # representative in (-1, 1]
            if c.denominator == 2:
                gate = DiagGate(c, xs)
                if not gate.is_clifford():
                    raise SpecError(f"non-Clifford correction on {xs}")
                rows.append(((len(xs), 1, xs), KeyRow(_key_text([ms], n), gate.label(subscripts=n > 1))))
            elif c.denominator != 1:
                raise SpecError(f"coefficient {c} on {xs} is beyond Clifford corrections")
            elif c:
                parity.append(ms)
        if parity:
            gate = DiagGate(Fraction(1), xs)
            rows.append(((len(xs), 0, xs), KeyRow(_key_text(parity, n), gate.label(subscripts=n > 1))))
    return [r for _, r in sorted(rows, key=lambda kv: kv[0])]


def key_table_csv(rows: list[KeyRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "gate"])
    for r in rows:
        w.writerow([r.key, r.gate])
    return buf.getvalue()


def canonical_key(text: str) -> str:
    """Sort factors inside each monomial and the monomials of a key."""
    import re

    terms = []
    for term in text.split("+"):
        factors = re.findall(r"m_\{[^}]*\}", term)
        terms.append("".join(sorted(factors, key=_factor_order)))
    return "+".join(sorted(terms, key=lambda t: (0 if "X" in t and "ZZ" not in t else 1, t.count("m_"), t)))


def _factor_order(f: str):
    kind, _, idx = f[3:-1].partition(",")
    return (kind != "X", int(idx or 0))


def canonical_gate(text: str) -> str:
    """Sort the target list of a gate label such as ``CZ_{3,1}``."""
    name, _, tail = text.partition("_")
    if tail.startswith("{"):
        idx = sorted(int(v) for v in tail.strip("{}").split(","))
        return f"{name}_{{{','.join(map(str, idx))}}}"
    return text
