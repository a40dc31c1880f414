"""Unrotated planar surface code.

Qubits sit at grid points ``(i, j)`` with ``i + j`` even and
``0 <= i, j <= 2d - 2``. X-checks are at odd ``i``/even ``j``, Z-checks at
even ``i``/odd ``j``; each acts on its grid neighbours. The columns
``j = 0`` and ``j = 2d - 2`` carry Z-bar, the rows ``i = 0`` and
``i = 2d - 2`` carry X-bar.
"""

from __future__ import annotations

from dataclasses import dataclass

from .css import CssCode, InvalidCodeError, validate
from .pauli import PauliOperator
from .surgery import SurgeryInterface


@dataclass(frozen=True)
class SurfaceCodeBundle:
    d: int
    code: CssCode
    interface: SurgeryInterface
    layout: tuple[tuple[int, int], ...]

    def qubit_index(self, i: int, j: int) -> int:
        return self.layout.index((i, j))


def build_surface(d: int) -> SurfaceCodeBundle:
    if d < 3 or d % 2 == 0:
        raise ValueError(f"distance must be odd and at least 3, got {d}")
    size = 2 * d - 1
    layout = tuple((i, j) for i in range(size) for j in range(size) if (i + j) % 2 == 0)
    index = {p: q for q, p in enumerate(layout)}
    n = len(layout)

    def nbrs(i: int, j: int) -> list[int]:
        pts = [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)]
        return sorted(index[p] for p in pts if p in index)

    x_sites = [(i, j) for i in range(1, size, 2) for j in range(0, size, 2)]
    z_sites = [(i, j) for i in range(0, size, 2) for j in range(1, size, 2)]
    x_checks = tuple(PauliOperator.x_on(n, nbrs(*s)) for s in x_sites)
    z_checks = tuple(PauliOperator.z_on(n, nbrs(*s)) for s in z_sites)
    logical_z = PauliOperator.z_on(n, [index[(i, 0)] for i in range(0, size, 2)])
    logical_x = PauliOperator.x_on(n, [index[(0, j)] for j in range(0, size, 2)])
    labels = {
        "family": "surface",
        "d": d,
        "layout": [list(p) for p in layout],
        "x_checks": [list(s) for s in x_sites],
        "z_checks": [list(s) for s in z_sites],
    }
    code = CssCode(n, x_checks, z_checks, (logical_x,), (logical_z,), labels)
    rep = validate(code)
    if not rep.ok:
        raise InvalidCodeError(str(rep))
    iface = SurgeryInterface(
        tuple(index[(i, 0)] for i in range(0, size, 2)),
        tuple(x_sites.index((i, 0)) for i in range(1, size, 2)),
    )
    iface.check(code)
    return SurfaceCodeBundle(d, code, iface, layout)


def boundary_interface(bundle: SurfaceCodeBundle) -> SurgeryInterface:
    bundle.interface.check(bundle.code)
    return bundle.interface
