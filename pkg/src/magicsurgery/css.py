"""CSS codes: validation, logical operators, brute-force distance, JSON I/O."""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any

import numpy as np

from . import kernels
from .gf2 import BitMatrix, BitVector, inverse, pack
from .pauli import PauliOperator

DEFAULT_DISTANCE_BUDGET = 2 * 10**8


class InvalidCodeError(ValueError):
    pass


class DistanceBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CssCode:
    """A CSS stabilizer code given by explicit (possibly dependent) checks.

    ``labels`` carries JSON-compatible metadata such as the geometric
    identity of each qubit and check.
    """

    n: int
    x_checks: tuple[PauliOperator, ...]
    z_checks: tuple[PauliOperator, ...]
    logical_x: tuple[PauliOperator, ...] = ()
    logical_z: tuple[PauliOperator, ...] = ()
    labels: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        for group in ("x_checks", "z_checks", "logical_x", "logical_z"):
            ops = tuple(getattr(self, group))
            object.__setattr__(self, group, ops)
            for op in ops:
                if op.n != self.n:
                    raise InvalidCodeError(f"{group} entry acts on {op.n} qubits, expected {self.n}")

    @classmethod
    def from_matrices(cls, hx, hz, **kwargs) -> CssCode:
        hx = np.asarray(hx, dtype=np.uint8)
        hz = np.asarray(hz, dtype=np.uint8)
        n = hx.shape[1] if hx.size else hz.shape[1]
        return cls(
            n=n,
            x_checks=tuple(PauliOperator.x_on(n, np.flatnonzero(r)) for r in hx),
            z_checks=tuple(PauliOperator.z_on(n, np.flatnonzero(r)) for r in hz),
            **kwargs,
        )

    @cached_property
    def hx(self) -> BitMatrix:
        return BitMatrix.from_vectors([p.x for p in self.x_checks], self.n)

    @cached_property
    def hz(self) -> BitMatrix:
        return BitMatrix.from_vectors([p.z for p in self.z_checks], self.n)

    @cached_property
    def rank_x(self) -> int:
        return self.hx.rank()

    @cached_property
    def rank_z(self) -> int:
        return self.hz.rank()

    def with_logicals(self, logical_x, logical_z) -> CssCode:
        return CssCode(self.n, self.x_checks, self.z_checks, tuple(logical_x), tuple(logical_z), self.labels)


@dataclass
class ValidationReport:
    noncommuting: list[tuple[int, int]] = field(default_factory=list)
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.noncommuting and not self.problems

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        lines = [f"X-check {i} anticommutes with Z-check {j}" for i, j in self.noncommuting]
        return "\n".join(lines + self.problems)


def _dense(ops, part: str, n: int) -> np.ndarray:
    if not ops:
        return np.zeros((0, n), dtype=np.uint8)
    return np.array([getattr(p, part).to_array() for p in ops], dtype=np.uint8)


def validate(code: CssCode) -> ValidationReport:
    """Report anticommuting check pairs and malformed logical representatives."""
    rep = ValidationReport()
    for i, p in enumerate(code.x_checks):
        if not p.is_x_type():
            rep.problems.append(f"X-check {i} has Z support")
    for j, p in enumerate(code.z_checks):
        if not p.is_z_type():
            rep.problems.append(f"Z-check {j} has X support")
    hx = _dense(code.x_checks, "x", code.n).astype(np.int64)
    hz = _dense(code.z_checks, "z", code.n).astype(np.int64)
    clash = (hx @ hz.T) % 2
    rep.noncommuting = [(int(i), int(j)) for i, j in zip(*np.nonzero(clash))]

    lx = _dense(code.logical_x, "x", code.n).astype(np.int64)
    lz = _dense(code.logical_z, "z", code.n).astype(np.int64)
    if len(code.logical_x) != len(code.logical_z):
        rep.problems.append("logical_x and logical_z have different lengths")
        return rep
    for i, p in enumerate(code.logical_x):
        if not p.is_x_type():
            rep.problems.append(f"logical_x[{i}] is not X-type")
        elif ((hz @ lx[i]) % 2).any():
            rep.problems.append(f"logical_x[{i}] anticommutes with a Z-check")
        elif code.hx.in_rowspace(p.x):
            rep.problems.append(f"logical_x[{i}] is a stabilizer")
    for i, p in enumerate(code.logical_z):
        if not p.is_z_type():
            rep.problems.append(f"logical_z[{i}] is not Z-type")
        elif ((hx @ lz[i]) % 2).any():
            rep.problems.append(f"logical_z[{i}] anticommutes with an X-check")
        elif code.hz.in_rowspace(p.z):
            rep.problems.append(f"logical_z[{i}] is a stabilizer")
    if code.logical_x:
        pairing = (lx @ lz.T) % 2
        if not np.array_equal(pairing, np.eye(len(code.logical_x), dtype=np.int64)):
            rep.problems.append("logical representatives are not symplectically paired")
    return rep


def _require_valid(code: CssCode) -> None:
    rep = validate(code)
    if rep.noncommuting or any("check" in p and "logical" not in p for p in rep.problems):
        raise InvalidCodeError(str(rep))


def num_logical(code: CssCode) -> int:
    _require_valid(code)
    return code.n - code.rank_x - code.rank_z


def _quotient_basis(kernel: list[BitVector], stabilizers: BitMatrix) -> list[BitVector]:
    """Kernel vectors independent modulo the stabilizer row space."""
    span = stabilizers.independent_rows()
    chosen = []
    r = span.rows
    for v in kernel:
        trial = span.vstack(BitMatrix.from_vectors([v], span.cols))
        rr = trial.rank()
        if rr > r:
            span, r = trial.independent_rows(), rr
            chosen.append(v)
    return chosen


def _greedy_reduce(v: np.ndarray, stabs: np.ndarray) -> np.ndarray:
    """Lower the weight of ``v`` by multiplying single and paired stabilizer rows."""
    v = v.copy()
    if stabs.shape[0] == 0:
        return v
    while True:
        singles = v[None, :] ^ stabs
        w1 = singles.sum(axis=1)
        best = int(w1.min())
        cand = singles[int(w1.argmin())]
        if best >= v.sum() and stabs.shape[0] > 1:
            pairs = singles[:, None, :] ^ stabs[None, :, :]
            w2 = pairs.sum(axis=2)
            i, j = np.unravel_index(int(w2.argmin()), w2.shape)
            best, cand = int(w2[i, j]), pairs[i, j]
        if best < v.sum():
            v = cand.copy()
        else:
            return v


def _shorten(v: np.ndarray, stabs: np.ndarray, tries: int = 64, seed: int = 0) -> np.ndarray:
    """Reduce ``v`` modulo the row space of ``stabs`` under random column orders.

    Each reduction clears the pivot columns of a permuted echelon form, which
    confines the result to the complementary columns; the lightest outcome is
    then refined greedily. The fixed seed keeps the output deterministic.
    """
    best = _greedy_reduce(v, stabs)
    if stabs.shape[0] == 0:
        return best
    n = v.shape[0]
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        perm = rng.permutation(n)
        red, piv = BitMatrix.from_dense(stabs[:, perm], n).rref()
        rows = red.to_dense()
        w = v[perm].copy()
        for r, c in enumerate(piv):
            if w[c]:
                w ^= rows[r]
        cand = np.empty_like(w)
        cand[perm] = w
        if cand.sum() < best.sum():
            best = _greedy_reduce(cand, stabs)
    return best


def logical_representatives(code: CssCode) -> tuple[list[PauliOperator], list[PauliOperator]]:
    """Symplectically paired (X-bar, Z-bar) representatives, greedily shortened."""
    k = num_logical(code)
    if k == 0:
        raise InvalidCodeError("code encodes no logical qubits")
    n = code.n
    zs = _quotient_basis(code.hx.kernel_basis(), code.hz)
    xs = _quotient_basis(code.hz.kernel_basis(), code.hx)
    assert len(zs) == len(xs) == k
    zd = np.array([v.to_array() for v in zs], dtype=np.uint8)
    xd = np.array([v.to_array() for v in xs], dtype=np.uint8)
    gram = (xd.astype(np.int64) @ zd.T.astype(np.int64)) % 2
    m = inverse(BitMatrix.from_dense(gram, k)).to_dense().astype(np.int64)
    xd = ((m @ xd.astype(np.int64)) % 2).astype(np.uint8)

    hx = code.hx.independent_rows().to_dense()
    hz = code.hz.independent_rows().to_dense()
    xd = np.array([_shorten(v, hx) for v in xd])
    zd = np.array([_shorten(v, hz) for v in zd])
    return (
        [PauliOperator.x_on(n, np.flatnonzero(r)) for r in xd],
        [PauliOperator.z_on(n, np.flatnonzero(r)) for r in zd],
    )


def ensure_logicals(code: CssCode) -> CssCode:
    if code.logical_x and code.logical_z:
        return code
    xs, zs = logical_representatives(code)
    return code.with_logicals(xs, zs)


# distance ---------------------------------------------------------------


@dataclass
class DistanceCertificate:
    """Outcome of an exhaustive search over single-type errors.

    ``found_weight is None`` means no nontrivial logical of weight up to
    ``checked_weight`` exists.
    """

    checked_weight: int
    found_weight: int | None = None
    witness: PauliOperator | None = None
    witness_type: str | None = None
    partial: bool = False

    def summary(self) -> str:
        if self.found_weight is None:
            return f"no logical <= {self.checked_weight}"
        return f"min-weight logical {self.found_weight} ({self.witness_type}-type: {self.witness})"


def signature_columns(code: CssCode, kind: str) -> tuple[np.ndarray, np.ndarray]:
    """Packed per-qubit check / logical signatures for ``kind``-type errors.

    A ``kind='Z'`` error is caught by X-checks and flips X-bar logicals.
    """
    code = ensure_logicals(code)
    if kind == "Z":
        checks, logicals = code.hx.independent_rows().to_dense(), _dense(code.logical_x, "x", code.n)
    elif kind == "X":
        checks, logicals = code.hz.independent_rows().to_dense(), _dense(code.logical_z, "z", code.n)
    else:
        raise ValueError("kind must be 'X' or 'Z'")
    return pack(checks.T, checks.shape[0]), pack(logicals.T, logicals.shape[0])


def _search_shard(args):
    syn, log, w, lo, hi, max_hits = args
    return kernels.search_weight(syn, log, w, lo, hi, max_hits)


def search_logicals(
    code: CssCode, kind: str, weight: int, max_hits: int = 1, jobs: int = 1
) -> list[tuple[int, ...]]:
    """Lexicographically ordered supports of ``kind``-type logicals of exact ``weight``."""
    syn, log = signature_columns(code, kind)
    n = code.n
    top = n - weight + 1
    if jobs <= 1 or top <= 1:
        return kernels.search_weight(syn, log, weight, 0, top, max_hits)
    bounds = np.linspace(0, top, jobs + 1).astype(int)
    tasks = [(syn, log, weight, int(a), int(b), max_hits) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_search_shard, tasks))
    merged = [h for part in parts for h in part]
    return merged if max_hits <= 0 else merged[:max_hits]


def distance_brute_force(
    code: CssCode,
    w_max: int,
    budget: int = DEFAULT_DISTANCE_BUDGET,
    jobs: int = 1,
    partial_ok: bool = False,
) -> DistanceCertificate:
    """Exhaustively search pure-X and pure-Z errors of weight up to ``w_max``.

    The witness is the lexicographically smallest support at the minimum
    weight, X- and Z-type compared together.
    """
    code = ensure_logicals(code)
    limit = w_max
    cost = 0
    for w in range(1, w_max + 1):
        cost += 2 * math.comb(code.n, w)
        if cost > budget:
            if not partial_ok:
                raise DistanceBudgetExceeded(
                    f"weight {w} needs {cost} candidates, budget is {budget}"
                )
            limit = w - 1
            break
    for w in range(1, limit + 1):
        found = []
        for kind in ("Z", "X"):
            hits = search_logicals(code, kind, w, max_hits=1, jobs=jobs)
            if hits:
                found.append((hits[0], kind))
        if found:
            support, kind = min(found)
            make = PauliOperator.z_on if kind == "Z" else PauliOperator.x_on
            return DistanceCertificate(w, w, make(code.n, support), kind, partial=limit < w_max)
    return DistanceCertificate(limit, None, None, None, partial=limit < w_max)


def is_logical(code: CssCode, op: PauliOperator) -> bool:
    """True when ``op`` commutes with every check and is not a stabilizer."""
    if op.is_z_type():
        return not code.hx.matvec(op.z).any() and not code.hz.in_rowspace(op.z)
    if op.is_x_type():
        return not code.hz.matvec(op.x).any() and not code.hx.in_rowspace(op.x)
    raise ValueError("only single-type operators are supported")


def same_logical_class(code: CssCode, a: PauliOperator, b: PauliOperator) -> bool:
    """Whether ``a`` and ``b`` differ by a stabilizer (single-type operators)."""
    if a.is_z_type() and b.is_z_type():
        return code.hz.in_rowspace(a.z ^ b.z)
    if a.is_x_type() and b.is_x_type():
        return code.hx.in_rowspace(a.x ^ b.x)
    return False


# JSON ---------------------------------------------------------------------


def code_to_dict(code: CssCode) -> dict[str, Any]:
    return {
        "n": code.n,
        "x_checks": [str(p) for p in code.x_checks],
        "z_checks": [str(p) for p in code.z_checks],
        "logical_x": [str(p) for p in code.logical_x],
        "logical_z": [str(p) for p in code.logical_z],
        "labels": code.labels,
    }


def code_from_dict(data: dict[str, Any]) -> CssCode:
    parse = PauliOperator.from_string
    return CssCode(
        n=int(data["n"]),
        x_checks=tuple(parse(s) for s in data["x_checks"]),
        z_checks=tuple(parse(s) for s in data["z_checks"]),
        logical_x=tuple(parse(s) for s in data.get("logical_x", [])),
        logical_z=tuple(parse(s) for s in data.get("logical_z", [])),
        labels=data.get("labels", {}),
    )


def dumps(code: CssCode, extra: dict[str, Any] | None = None) -> str:
    data = code_to_dict(code)
    if extra:
        data.update(extra)
    return json.dumps(data, sort_keys=True, indent=1)


def save(code: CssCode, path: str | Path, extra: dict[str, Any] | None = None) -> None:
    Path(path).write_text(dumps(code, extra) + "\n", encoding="utf-8")


def load(path: str | Path) -> CssCode:
    return code_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
