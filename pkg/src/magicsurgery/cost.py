"""Qubit-overhead model: teleportation from a transversal-T code versus distillation.

Logical error per code block at odd distance ``d`` is
``A * (p/p_th) ** ((d + 1) / 2)``; every scheme picks the smallest odd
distance meeting the target. Teleportation schemes add their parts,
distillation schemes multiply base-code size by distillation cost.

Besides the integer-valued breakdowns, each curve has a "smooth" variant
in which distances and round counts are taken as real numbers solving the
error equations exactly. Step functions have no useful local slope; the
smooth curves do, and their logarithmic slopes tend to the asymptotic
exponents as the target error goes to zero.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

import numpy as np

SCHEMES = ("colorcode-teleport", "qldpc-teleport", "msd-small-code", "msd-single-round", "msd-optimized")
TELEPORT = SCHEMES[:2]
MSD = SCHEMES[2:]


class CostError(ValueError):
    pass


@dataclass(frozen=True)
class CostModelParams:
    amplitude: float = 0.1  # A
    p_ratio: float = 0.1  # p / p_th
    n_d: int = 15
    k_d: int = 1
    d_d: int = 3
    c_d: float = 35.0  # eps_out = c_d * eps_in ** d_d
    eps_in: float = 1e-3  # raw magic-state error fed to distillation
    alpha: float = 0.25
    beta: float = 0.5
    qldpc_magic_const: float = 1.0
    meas_const: float = 1.0  # Q_meas = meas_const * d * log2(d)**2 for qLDPC surgery
    msd_final_round_factor: float = 4.0  # c in c * ln(1/eps)**2

    def __post_init__(self):
        if not 0 < self.p_ratio < 1:
            raise CostError("need 0 < p/p_th < 1")
        if self.amplitude <= 0:
            raise CostError("amplitude must be positive")
        if self.alpha < 0 or not 0 < self.beta <= 1:
            raise CostError("need alpha >= 0 and 0 < beta <= 1")
        if min(self.n_d, self.k_d) < 1 or self.n_d < self.k_d or self.d_d < 2:
            raise CostError("distillation code parameters out of range")
        if self.c_d <= 0 or not 0 < self.eps_in < 1:
            raise CostError("distillation law parameters out of range")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CostModelParams:
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise CostError(f"unknown cost parameters: {sorted(extra)}")
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> CostModelParams:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def logical_error(self, d: float) -> float:
        return self.amplitude * self.p_ratio ** ((d + 1) / 2)

    def break_even(self) -> float:
        """Input error below which one distillation round improves the state."""
        return self.c_d ** (-1.0 / (self.d_d - 1))


@dataclass
class CostBreakdown:
    scheme: str
    epsilon: float
    d: int
    q_base: float
    q_total: float
    q_magic: float | None = None
    q_meas: float | None = None
    q_distil: float | None = None
    rounds: int | None = None
    d_distil: int | None = None
    provenance: dict[str, str] = field(default_factory=dict)


def gamma(n_d: float, k_d: float, d_d: float) -> float:
    if k_d < 1 or n_d < k_d:
        raise CostError("need n_D >= k_D >= 1")
    if d_d < 2:
        raise CostError("need d_D >= 2")
    return math.log(n_d / k_d) / math.log(d_d)


def surface_qubits(d: float) -> float:
    return d**2 + (d - 1) ** 2


def color_qubits(d: float) -> float:
    l = (d - 1) / 2
    return 4 * l**3 + 6 * l**2 + 4 * l + 1


def min_odd_distance(params: CostModelParams, epsilon: float) -> int:
    if not 0 < epsilon < 1:
        raise CostError("epsilon must lie in (0, 1)")
    d = 2 * math.ceil(math.log(epsilon / params.amplitude) / math.log(params.p_ratio)) - 1
    d = max(3, d if d % 2 else d + 1)
    tol = epsilon * (1 + 1e-12)  # 0.1 * 0.1**2 rounds above 1e-3
    while params.logical_error(d) > tol:
        d += 2
    while d > 3 and params.logical_error(d - 2) <= tol:
        d -= 2
    return d


def smooth_distance(params: CostModelParams, epsilon: float) -> float:
    """Real ``d`` with ``logical_error(d) == epsilon``."""
    return 2 * math.log(epsilon / params.amplitude) / math.log(params.p_ratio) - 1


def _meas_qldpc(params: CostModelParams, d: float) -> float:
    return params.meas_const * d * math.log2(d) ** 2


def q_total_teleport(params: CostModelParams, epsilon: float, scheme: str = "colorcode-teleport") -> CostBreakdown:
    if scheme not in TELEPORT:
        raise CostError(f"not a teleportation scheme: {scheme}")
    d = min_odd_distance(params, epsilon)
    base = surface_qubits(d)
    if scheme == "colorcode-teleport":
        magic = color_qubits(d)
        meas = float(d - 1)
        prov = {"q_magic": "tetrahedral color code, 4l^3+6l^2+4l+1 with d=2l+1", "q_meas": "2l surgery ancillas"}
    else:
        magic = params.qldpc_magic_const * d ** (params.alpha / params.beta)
        meas = _meas_qldpc(params, d)
        prov = {"q_magic": "n/k ~ d^(alpha/beta)", "q_meas": "d log2(d)^2 measurement gadget"}
    prov["q_base"] = "surface code d^2+(d-1)^2"
    prov["q_total"] = "q_base + q_magic + q_meas"
    return CostBreakdown(scheme, epsilon, d, base, base + magic + meas, q_magic=magic, q_meas=meas, provenance=prov)


def distillation_rounds(params: CostModelParams, epsilon: float) -> int:
    if params.eps_in >= params.break_even():
        raise CostError(f"input error {params.eps_in} is above the break-even point {params.break_even():.4g}")
    r, e = 0, params.eps_in
    while e > epsilon:
        e = params.c_d * e**params.d_d
        r += 1
    return r


def smooth_rounds_factor(params: CostModelParams, epsilon: float) -> float:
    """Real ``u = d_D ** r`` solving ``eps_r = epsilon`` in closed form."""
    k = math.log(params.c_d) / (params.d_d - 1)
    return (math.log(epsilon) + k) / (math.log(params.eps_in) + k)


def q_total_msd(params: CostModelParams, epsilon: float, scheme: str = "msd-small-code") -> CostBreakdown:
    if scheme not in MSD:
        raise CostError(f"not a distillation scheme: {scheme}")
    if params.eps_in >= params.break_even():
        raise CostError(f"input error {params.eps_in} is above the break-even point {params.break_even():.4g}")
    d = min_odd_distance(params, epsilon)
    base = surface_qubits(d)
    rounds = d_dist = None
    if scheme == "msd-small-code":
        rounds = distillation_rounds(params, epsilon)
        distil = (params.n_d / params.k_d) ** rounds
        prov = {"q_distil": "(n_D/k_D)^r with eps_(k+1) = c_D eps_k^d_D"}
    elif scheme == "msd-single-round":
        d_dist = 3
        while params.c_d * params.eps_in**d_dist > epsilon:
            d_dist += 2
        distil = color_qubits(d_dist)
        prov = {"q_distil": "one round with a tetrahedral color code of distance d_D"}
    else:
        distil = params.msd_final_round_factor * math.log(1 / epsilon) ** 2
        prov = {"q_distil": "c ln(1/eps)^2, final-round dominated"}
    prov["q_base"] = "surface code d^2+(d-1)^2"
    prov["q_total"] = "q_base * q_distil"
    return CostBreakdown(
        scheme, epsilon, d, base, base * distil, q_distil=distil, rounds=rounds, d_distil=d_dist, provenance=prov
    )


def breakdown(params: CostModelParams, epsilon: float, scheme: str) -> CostBreakdown:
    if scheme in TELEPORT:
        return q_total_teleport(params, epsilon, scheme)
    return q_total_msd(params, epsilon, scheme)


def smooth_total(params: CostModelParams, epsilon: float, scheme: str) -> float:
    """Real-valued relaxation of ``breakdown(...).q_total``."""
    d = smooth_distance(params, epsilon)
    base = surface_qubits(d)
    if scheme == "colorcode-teleport":
        return base + color_qubits(d) + (d - 1)
    if scheme == "qldpc-teleport":
        return base + params.qldpc_magic_const * d ** (params.alpha / params.beta) + _meas_qldpc(params, d)
    if scheme == "msd-small-code":
        return base * smooth_rounds_factor(params, epsilon) ** gamma(params.n_d, params.k_d, params.d_d)
    if scheme == "msd-single-round":
        d_dist = math.log(epsilon / params.c_d) / math.log(params.eps_in)
        return base * color_qubits(d_dist)
    if scheme == "msd-optimized":
        return base * params.msd_final_round_factor * math.log(1 / epsilon) ** 2
    raise CostError(f"unknown scheme {scheme}")


def default_grid(points: int = 46) -> np.ndarray:
    return np.logspace(-3, -15, points) if points > 1 else np.array([1e-3])


def local_slopes(eps: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Centered ``d log Q / d log log(1/eps)`` on the grid (one-sided at the ends)."""
    x = np.log(np.log(1 / np.asarray(eps, dtype=float)))
    y = np.log(np.asarray(q, dtype=float))
    if len(x) < 2:
        return np.full(len(x), np.nan)
    return np.gradient(y, x)


@dataclass
class ExponentEstimate:
    scheme: str
    extrapolated: float
    linear: float
    slope_at_low: float
    secant: float


def asymptotic_exponent(
    params: CostModelParams, scheme: str, eps_low: float = 1e-15, eps_high: float = 1e-6, points: int = 64
) -> ExponentEstimate:
    """Limit of the smooth local slope as ``log(1/eps)`` grows.

    Local slopes behave like ``k + a/L + b/L^2`` with ``L = ln(1/eps)``; a
    quadratic fit in ``1/L`` over the window is evaluated at ``1/L = 0``.
    """
    eps = np.logspace(math.log10(eps_high), math.log10(eps_low), points)
    q = np.array([smooth_total(params, e, scheme) for e in eps])
    s = local_slopes(eps, q)
    inv = 1 / np.log(1 / eps)
    quad = float(np.polyval(np.polyfit(inv, s, 2), 0.0))
    lin = float(np.polyval(np.polyfit(inv, s, 1), 0.0))
    sec = float((math.log(q[-1]) - math.log(q[0])) / (math.log(math.log(1 / eps[-1])) - math.log(math.log(1 / eps[0]))))
    return ExponentEstimate(scheme, quad, lin, float(s[-1]), sec)


COLUMNS = [
    "scheme",
    "epsilon",
    "d",
    "rounds",
    "d_distil",
    "q_base",
    "q_magic",
    "q_meas",
    "q_distil",
    "q_total",
    "q_total_smooth",
    "slope_smooth",
]


def emit_comparison(params: CostModelParams, grid, schemes=SCHEMES) -> list[dict[str, Any]]:
    grid = sorted((float(e) for e in grid), reverse=True)
    if not grid:
        raise CostError("epsilon grid is empty")
    rows = []
    for scheme in schemes:
        smooth = np.array([smooth_total(params, e, scheme) for e in grid])
        slopes = local_slopes(np.array(grid), smooth)
        for e, qs, sl in zip(grid, smooth, slopes):
            b = breakdown(params, e, scheme)
            rows.append(
                {
                    "scheme": scheme,
                    "epsilon": e,
                    "d": b.d,
                    "rounds": b.rounds,
                    "d_distil": b.d_distil,
                    "q_base": b.q_base,
                    "q_magic": b.q_magic,
                    "q_meas": b.q_meas,
                    "q_distil": b.q_distil,
                    "q_total": b.q_total,
                    "q_total_smooth": float(qs),
                    "slope_smooth": float(sl),
                }
            )
    return rows


def crossover(params: CostModelParams, grid, a: str = "colorcode-teleport", b: str = "msd-small-code") -> float | None:
    """Largest grid epsilon from which ``a`` stays cheaper than ``b`` for all smaller targets."""
    grid = sorted((float(e) for e in grid), reverse=True)
    better = [breakdown(params, e, a).q_total < breakdown(params, e, b).q_total for e in grid]
    for i, e in enumerate(grid):
        if all(better[i:]):
            return e
    return None


def comparison_csv(rows: list[dict[str, Any]], params: CostModelParams, extra: dict[str, Any] | None = None) -> str:
    meta = {"params": params.to_dict(), **(extra or {})}
    buf = io.StringIO()
    buf.write("# " + json.dumps(meta, sort_keys=True) + "\n")
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if r[k] is None else r[k]) for k in COLUMNS})
    return buf.getvalue()
