"""Z-bar Z-bar lattice surgery between two CSS codes with repetition interfaces.

An interface is an ordered list of qubits ``q_0..q_m`` carrying a Z-bar
logical, together with X-checks ``s_1..s_m`` where ``s_i`` meets the
interface exactly in ``{q_{i-1}, q_i}``. Merging two codes with interfaces
of equal length adds ancillas ``c_1..c_m`` (``c_i`` joins ``s_i`` on both
sides) and Z-checks ``Z(a_j) Z(b_j) Z(c_j) Z(c_{j+1})``, whose product is
``Z-bar_A Z-bar_B``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .css import CssCode, code_from_dict, code_to_dict, ensure_logicals, is_logical
from .pauli import PauliOperator


class InterfaceError(ValueError):
    pass


@dataclass(frozen=True)
class SurgeryInterface:
    qubit_ids: tuple[int, ...]
    chain_check_ids: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "qubit_ids", tuple(int(q) for q in self.qubit_ids))
        object.__setattr__(self, "chain_check_ids", tuple(int(c) for c in self.chain_check_ids))

    def __len__(self) -> int:
        return len(self.qubit_ids)

    def logical_z(self, n: int) -> PauliOperator:
        return PauliOperator.z_on(n, self.qubit_ids)

    def check(self, code: CssCode) -> None:
        """Raise :class:`InterfaceError` unless the repetition structure holds on ``code``."""
        q = self.qubit_ids
        if len(self.chain_check_ids) != len(q) - 1:
            raise InterfaceError(f"{len(q)} qubits need {len(q) - 1} chain checks, got {len(self.chain_check_ids)}")
        if len(set(q)) != len(q):
            raise InterfaceError("repeated interface qubit")
        qset = set(q)
        chain = set(self.chain_check_ids)
        for idx, chk in enumerate(code.x_checks):
            touched = qset.intersection(chk.x.support())
            if idx in chain:
                pos = self.chain_check_ids.index(idx)
                want = {q[pos], q[pos + 1]}
                if touched != want:
                    raise InterfaceError(
                        f"chain check {idx} meets the interface in {sorted(touched)}, expected {sorted(want)}"
                    )
            elif touched:
                raise InterfaceError(f"X-check {idx} outside the chain touches interface qubits {sorted(touched)}")
        if not is_logical(code, self.logical_z(code.n)):
            raise InterfaceError("interface Z string is not a logical operator")

    def to_dict(self) -> dict[str, Any]:
        return {"qubit_ids": list(self.qubit_ids), "chain_check_ids": list(self.chain_check_ids)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SurgeryInterface:
        return cls(tuple(data["qubit_ids"]), tuple(data["chain_check_ids"]))


@dataclass(frozen=True)
class MergedCode:
    """Result of :func:`merge`.

    Qubits are laid out as A's qubits, then B's, then the ancillas. X-checks
    are A's then B's (chain checks extended in place); Z-checks are A's, B's,
    then the new ones.
    """

    code: CssCode
    code_a: CssCode
    code_b: CssCode
    interface_a: SurgeryInterface
    interface_b: SurgeryInterface
    ancilla_ids: tuple[int, ...]
    new_z_check_ids: tuple[int, ...]
    extended_x_check_ids: tuple[int, ...]
    provenance: dict[str, Any] = field(default_factory=dict)

    @property
    def n_a(self) -> int:
        return self.code_a.n

    @property
    def n_b(self) -> int:
        return self.code_b.n

    def qubits_a(self) -> list[int]:
        return list(range(self.n_a))

    def qubits_b(self) -> list[int]:
        return list(range(self.n_a, self.n_a + self.n_b))

    def new_z_checks(self) -> list[PauliOperator]:
        return [self.code.z_checks[i] for i in self.new_z_check_ids]

    def logical_zz(self) -> PauliOperator:
        n = self.code.n
        za = [q for q in self.interface_a.qubit_ids]
        zb = [self.n_a + q for q in self.interface_b.qubit_ids]
        return PauliOperator.z_on(n, za + zb)


def merge(
    code_a: CssCode,
    iface_a: SurgeryInterface,
    code_b: CssCode,
    iface_b: SurgeryInterface,
) -> MergedCode:
    if len(iface_a) != len(iface_b):
        raise InterfaceError(f"interface lengths differ: {len(iface_a)} vs {len(iface_b)}")
    iface_a.check(code_a)
    iface_b.check(code_b)
    na, nb = code_a.n, code_b.n
    m = len(iface_a) - 1
    n = na + nb + m
    anc = tuple(range(na + nb, n))

    def lift(op: PauliOperator, offset: int) -> PauliOperator:
        return op.embed(n, list(range(offset, offset + op.n)))

    x_checks = []
    extended = []
    for code, iface, offset in ((code_a, iface_a, 0), (code_b, iface_b, na)):
        for idx, chk in enumerate(code.x_checks):
            op = lift(chk, offset)
            if idx in iface.chain_check_ids:
                i = iface.chain_check_ids.index(idx)
                op = op * PauliOperator.x_on(n, [anc[i]])
                extended.append(len(x_checks))
            x_checks.append(op)

    z_checks = [lift(c, 0) for c in code_a.z_checks] + [lift(c, na) for c in code_b.z_checks]
    new_ids = []
    for j in range(m + 1):
        support = [iface_a.qubit_ids[j], na + iface_b.qubit_ids[j]]
        if j >= 1:
            support.append(anc[j - 1])
        if j < m:
            support.append(anc[j])
        new_ids.append(len(z_checks))
        z_checks.append(PauliOperator.z_on(n, support))

    provenance = {
        "parents": ["A", "B"],
        "qubit_origin": [["A", q] for q in range(na)] + [["B", q] for q in range(nb)] + [["ancilla", i] for i in range(m)],
        "x_check_origin": [["A", i] for i in range(len(code_a.x_checks))]
        + [["B", i] for i in range(len(code_b.x_checks))],
        "z_check_origin": [["A", i] for i in range(len(code_a.z_checks))]
        + [["B", i] for i in range(len(code_b.z_checks))]
        + [["new", j] for j in range(m + 1)],
        "interface_a": iface_a.to_dict(),
        "interface_b": iface_b.to_dict(),
    }
    labels = {"family": "merged", "ancillas": list(anc), "new_z_checks": new_ids}
    code = CssCode(n, tuple(x_checks), tuple(z_checks), labels=labels)
    xs, zs = _merged_logicals(code, code_a, code_b, iface_a, iface_b)
    code = code.with_logicals(xs, zs)
    return MergedCode(code, code_a, code_b, iface_a, iface_b, anc, tuple(new_ids), tuple(extended), provenance)


def _merged_logicals(code, code_a, code_b, iface_a, iface_b):
    """X-bar_A X-bar_B (patched on ancillas) and Z-bar_A of the merged code."""
    a = ensure_logicals(code_a)
    b = ensure_logicals(code_b)
    n, na, m = code.n, code_a.n, len(iface_a) - 1
    xa = a.logical_x[0].embed(n, list(range(na)))
    xb = b.logical_x[0].embed(n, list(range(na, na + code_b.n)))
    za = iface_a.logical_z(na).embed(n, list(range(na)))
    if xa.commutes(za):
        raise InterfaceError("parent X-bar does not pair with the interface Z-bar")
    # new check j sees a_j, b_j, c_{j-1}, c_j; put X on c_i where the running
    # parity mismatch between the two sides is odd
    mismatch = np.array(
        [a.logical_x[0].x[qa] ^ b.logical_x[0].x[qb] for qa, qb in zip(iface_a.qubit_ids, iface_b.qubit_ids)],
        dtype=np.uint8,
    )
    running = np.cumsum(mismatch[:m]) % 2
    anc = [na + code_b.n + i for i in range(m) if running[i]]
    return [xa * xb * PauliOperator.x_on(n, anc)], [za]


def split(merged: MergedCode) -> tuple[CssCode, CssCode, SplitFrame]:
    """Parent codes plus the Z-frame rule for the ancilla X outcomes."""
    return merged.code_a, merged.code_b, SplitFrame.from_merged(merged)


@dataclass(frozen=True)
class SplitFrame:
    """Z corrections after measuring ancilla ``c_i`` in the X basis.

    Outcome 1 on ``c_i`` leaves the parent chain checks ``s_i`` of both
    codes at eigenvalue -1. Z on the interface prefix ``q_0..q_i`` of each
    side flips exactly those two checks and no other parent X-check.
    """

    n: int
    per_ancilla: tuple[tuple[int, ...], ...]

    @classmethod
    def from_merged(cls, merged: MergedCode) -> SplitFrame:
        qa = merged.interface_a.qubit_ids
        qb = merged.interface_b.qubit_ids
        na = merged.n_a
        rules = []
        for i in range(len(merged.ancilla_ids)):
            rules.append(tuple(sorted(list(qa[: i + 1]) + [na + q for q in qb[: i + 1]])))
        return cls(merged.code.n, tuple(rules))

    def correction(self, outcomes) -> PauliOperator:
        outcomes = list(outcomes)
        if len(outcomes) != len(self.per_ancilla):
            raise ValueError(f"expected {len(self.per_ancilla)} ancilla outcomes, got {len(outcomes)}")
        flips = np.zeros(self.n, dtype=np.uint8)
        for bit, support in zip(outcomes, self.per_ancilla):
            if bit:
                flips[list(support)] ^= 1
        return PauliOperator.from_xz(np.zeros(self.n, dtype=np.uint8), flips)


def logical_zz_from_checks(merged: MergedCode, outcomes) -> int:
    outcomes = list(outcomes)
    if len(outcomes) != len(merged.new_z_check_ids):
        raise ValueError(f"expected {len(merged.new_z_check_ids)} outcomes, got {len(outcomes)}")
    return int(np.bitwise_xor.reduce(np.asarray(outcomes, dtype=np.uint8) & 1))


def product_of_new_checks(merged: MergedCode) -> PauliOperator:
    out = PauliOperator.identity(merged.code.n)
    for op in merged.new_z_checks():
        out = out * op
    return out


def merged_to_dict(merged: MergedCode) -> dict[str, Any]:
    data = code_to_dict(merged.code)
    data["provenance"] = {
        **merged.provenance,
        "parent_a": code_to_dict(merged.code_a),
        "parent_b": code_to_dict(merged.code_b),
        "ancilla_ids": list(merged.ancilla_ids),
        "new_z_check_ids": list(merged.new_z_check_ids),
        "extended_x_check_ids": list(merged.extended_x_check_ids),
    }
    return data


def merged_from_dict(data: dict[str, Any]) -> MergedCode:
    prov = data["provenance"]
    return merge(
        code_from_dict(prov["parent_a"]),
        SurgeryInterface.from_dict(prov["interface_a"]),
        code_from_dict(prov["parent_b"]),
        SurgeryInterface.from_dict(prov["interface_b"]),
    )


def save_merged(merged: MergedCode, path: str | Path) -> None:
    Path(path).write_text(json.dumps(merged_to_dict(merged), sort_keys=True, indent=1) + "\n", encoding="utf-8")
