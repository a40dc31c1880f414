"""Code-capacity Monte Carlo with error detection and post-selection.

A trial samples an iid Pauli error, is accepted when every check is
satisfied, and fails when an accepted error flips a logical
representative. Trials are generated in fixed-size chunks, each with its
own generator ``SeedSequence(seed, spawn_key=(chunk,))``; counts therefore
do not depend on how chunks are distributed over workers.

Undetected failures need an error of weight at least the code distance, so
at small ``p`` plain sampling sees almost none. :func:`stratified_table`
computes the same probability by conditioning on the error weight:
low weights are enumerated exhaustively, a few higher weights are sampled,
and the remainder is bounded.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from scipy import stats

from . import kernels
from .css import CssCode
from .gf2 import pack

KINDS = ("depolarizing", "independent-XZ")
CHUNK = 1 << 16


class InsufficientData(ValueError):
    pass


@dataclass(frozen=True)
class NoiseModel:
    kind: str = "depolarizing"
    p: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")


@dataclass
class McResult:
    p: float
    trials: int
    accepted: int
    failures: int
    ci_low: float = 0.0
    ci_high: float = 0.0
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.trials if self.trials else 0.0

    @property
    def post_selected_rate(self) -> float:
        return self.failures / self.accepted if self.accepted else 0.0


def binomial_ci(k: int, n: int, level: float = 0.95) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    ci = stats.binomtest(k, n).proportion_ci(confidence_level=level, method="exact")
    return float(ci.low), float(ci.high)


def _matrices(code: CssCode):
    if not code.logical_x or not code.logical_z:
        raise ValueError("code has no logical representatives")
    n = code.n
    hz = code.hz.words
    hx = code.hx.words
    lz = pack(np.array([p.z.to_array() for p in code.logical_z]), n)
    lx = pack(np.array([p.x.to_array() for p in code.logical_x]), n)
    return hz, lz, hx, lx


def sample_errors(model: NoiseModel, n: int, size: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Dense 0/1 arrays ``(ex, ez)`` of shape ``(size, n)``.

    Depolarizing: one uniform ``u`` per qubit; ``u < p`` selects X, Y, Z
    according to ``floor(3u/p)``.
    """
    if model.kind == "depolarizing":
        u = rng.random((size, n))
        hit = u < model.p
        kind = np.floor(3 * u / model.p) if model.p > 0 else np.zeros_like(u)
        ex = hit & (kind <= 1)
        ez = hit & (kind >= 1)
    else:
        ex = rng.random((size, n)) < model.p
        ez = rng.random((size, n)) < model.p
    return ex.astype(np.uint8), ez.astype(np.uint8)


def _chunk_counts(args) -> tuple[int, int]:
    code_mats, n, model, chunk, size = args
    hz, lz, hx, lx = code_mats
    rng = np.random.default_rng(np.random.SeedSequence(model.seed, spawn_key=(chunk,)))
    ex, ez = sample_errors(model, n, size, rng)
    acc, fail = kernels.error_flags(pack(ex, n), pack(ez, n), hz, lz, hx, lx)
    return int(acc.sum()), int(fail.sum())


def run_mc(code: CssCode, model: NoiseModel, trials: int, jobs: int = 1, chunk: int = CHUNK) -> McResult:
    mats = _matrices(code)
    sizes = [min(chunk, trials - s) for s in range(0, trials, chunk)]
    tasks = [(mats, code.n, model, i, sz) for i, sz in enumerate(sizes)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_chunk_counts, tasks))
    else:
        parts = [_chunk_counts(t) for t in tasks]
    accepted = sum(a for a, _ in parts)
    failures = sum(f for _, f in parts)
    lo, hi = binomial_ci(failures, accepted)
    meta = {"kind": model.kind, "seed": model.seed, "chunk": chunk, "n": code.n}
    return McResult(model.p, trials, accepted, failures, lo, hi, meta)


# weight-resolved analysis ------------------------------------------------------


def _signatures(code: CssCode) -> tuple[np.ndarray, np.ndarray]:
    """Packed syndrome and logical-flip bits of each single-qubit Pauli.

    Row ``3q + t`` belongs to X, Y, Z (``t = 0, 1, 2``) on qubit ``q``.
    """
    n = code.n
    hz = code.hz.to_dense().astype(np.int64)
    hx = code.hx.to_dense().astype(np.int64)
    lz = np.array([p.z.to_array() for p in code.logical_z], dtype=np.int64)
    lx = np.array([p.x.to_array() for p in code.logical_x], dtype=np.int64)
    q = np.repeat(np.arange(n), 3)
    t = np.tile(np.arange(3), n)
    ex = np.zeros((3 * n, n), dtype=np.int64)
    ez = np.zeros((3 * n, n), dtype=np.int64)
    ex[np.arange(3 * n), q] = t <= 1
    ez[np.arange(3 * n), q] = t >= 1
    syn = np.concatenate([ex @ hz.T, ez @ hx.T], axis=1) % 2
    log = np.concatenate([ex @ lz.T, ez @ lx.T], axis=1) % 2
    return pack(syn, syn.shape[1]), pack(log, log.shape[1])


def _classify(rows: np.ndarray, syn: np.ndarray, log: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Accepted / failed flags for errors given as rows of signature indices."""
    s = np.bitwise_xor.reduce(syn[rows], axis=1)
    lg = np.bitwise_xor.reduce(log[rows], axis=1)
    accepted = ~s.any(axis=1)
    return accepted, accepted & lg.any(axis=1)


@dataclass
class WeightStratum:
    weight: int
    total: int
    accepted: int
    failures: int
    exhaustive: bool


def enumerate_weight(code: CssCode, weight: int, max_rows: int = 1 << 22) -> WeightStratum:
    """Exhaustive count over all single-qubit Pauli assignments of ``weight`` qubits."""
    syn, log = _signatures(code)
    n = code.n
    acc = fail = total = 0
    types = np.array(list(itertools.product(range(3), repeat=weight)), dtype=np.int64).reshape(-1, weight)
    batch = max(1, max_rows // max(1, len(types)))
    combos = itertools.combinations(range(n), weight)
    while True:
        block = np.array(list(itertools.islice(combos, batch)), dtype=np.int64)
        if block.size == 0:
            break
        rows = (3 * block[:, None, :] + types[None, :, :]).reshape(-1, weight)
        a, f = _classify(rows, syn, log)
        acc += int(a.sum())
        fail += int(f.sum())
        total += rows.shape[0]
    return WeightStratum(weight, total, acc, fail, True)


def sample_weight(code: CssCode, weight: int, samples: int, seed: int = 0) -> WeightStratum:
    syn, log = _signatures(code)
    n = code.n
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(weight,)))
    support = np.argsort(rng.random((samples, n)), axis=1)[:, :weight]
    kinds = rng.integers(0, 3, size=(samples, weight))
    a, f = _classify(3 * support + kinds, syn, log)
    return WeightStratum(weight, samples, int(a.sum()), int(f.sum()), False)


def weight_one_audit(code: CssCode) -> WeightStratum:
    """All ``3n`` single-qubit Paulis; a distance-3 code accepts none of them."""
    return enumerate_weight(code, 1)


@dataclass
class StratifiedTable:
    n: int
    strata: list[WeightStratum]
    seed: int

    def rate(self, p: float, level: float = 0.95) -> dict[str, float]:
        """Post-selected logical rate for depolarizing noise at ``p``.

        Sampled strata contribute their Clopper-Pearson bounds, and weights
        above the largest stratum contribute between 0 and their full mass.
        """
        n = self.n
        acc = [0.0, 0.0, 0.0]  # estimate, low, high
        fail = [0.0, 0.0, 0.0]
        for s in self.strata:
            mass = math.comb(n, s.weight) * p**s.weight * (1 - p) ** (n - s.weight)
            fa, fl = s.accepted / s.total, s.failures / s.total
            if s.exhaustive:
                a_lo = a_hi = fa
                f_lo = f_hi = fl
            else:
                a_lo, a_hi = binomial_ci(s.accepted, s.total, level)
                f_lo, f_hi = binomial_ci(s.failures, s.total, level)
            for vec, vals in ((acc, (fa, a_lo, a_hi)), (fail, (fl, f_lo, f_hi))):
                for i in range(3):
                    vec[i] += mass * vals[i]
        top = max(s.weight for s in self.strata)
        tail = float(stats.binom.sf(top, n, p))
        acc[2] += tail
        fail[2] += tail
        rate = fail[0] / acc[0]
        return {
            "p": p,
            "accept": acc[0],
            "fail": fail[0],
            "rate": rate,
            "rate_low": fail[1] / (acc[2]),
            "rate_high": fail[2] / acc[1],
            "tail_mass": tail,
        }


def stratified_table(
    code: CssCode, exhaustive_upto: int = 4, sampled_upto: int = 8, samples: int = 200_000, seed: int = 0
) -> StratifiedTable:
    strata = [WeightStratum(0, 1, 1, 0, True)]
    strata += [enumerate_weight(code, w) for w in range(1, exhaustive_upto + 1)]
    strata += [sample_weight(code, w, samples, seed) for w in range(exhaustive_upto + 1, sampled_upto + 1)]
    return StratifiedTable(code.n, strata, seed)


def slope_fit(ps, rates, weights=None) -> tuple[float, float]:
    """Least-squares slope of ``log(rate)`` against ``log(p)`` and its standard error."""
    ps = np.asarray(ps, dtype=float)
    rates = np.asarray(rates, dtype=float)
    keep = rates > 0
    if keep.sum() < 3:
        raise InsufficientData("need at least three points with nonzero rate")
    x, y = np.log(ps[keep]), np.log(rates[keep])
    if weights is None:
        res = stats.linregress(x, y)
        return float(res.slope), float(res.stderr)
    w = np.asarray(weights, dtype=float)[keep]
    a = np.vstack([x, np.ones_like(x)]).T * np.sqrt(w)[:, None]
    coef, *_ = np.linalg.lstsq(a, y * np.sqrt(w), rcond=None)
    resid = y * np.sqrt(w) - a @ coef
    dof = max(1, len(x) - 2)
    cov = np.linalg.inv(a.T @ a) * float(resid @ resid) / dof
    return float(coef[0]), float(math.sqrt(cov[0, 0]))


def results_csv(results: list[McResult], metadata: dict[str, Any]) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(metadata, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "trials", "accepted", "failures", "rate", "ci_low", "ci_high"])
    for r in results:
        w.writerow([repr(r.p), r.trials, r.accepted, r.failures, repr(r.post_selected_rate), repr(r.ci_low), repr(r.ci_high)])
    return buf.getvalue()


def save_results(results: list[McResult], metadata: dict[str, Any], path: str | Path) -> None:
    Path(path).write_text(results_csv(results, metadata), encoding="utf-8")


def result_dict(r: McResult) -> dict[str, Any]:
    d = asdict(r)
    d["acceptance_rate"] = r.acceptance_rate
    d["post_selected_rate"] = r.post_selected_rate
    return d
