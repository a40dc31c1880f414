"""Tetrahedral 3D color codes built from a 4-colorable simplicial complex.

Inner vertices of color ``c`` sit at ``O_c + x i + y j + z k`` with
``x + y + z < l``. Coordinates are stored doubled so that every position is
an integer triple. Each color also has one outer vertex without coordinates;
outer ``c`` is joined to every inner vertex on a boundary triangle whose
vertices avoid color ``c``.

Qubits live on tetrahedra, X-checks on inner vertices, Z-checks on edges
that are not outer-outer.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .css import CssCode, InvalidCodeError, code_to_dict, logical_representatives, num_logical, validate
from .pauli import PauliOperator
from .surgery import SurgeryInterface

COLORS = ("r", "g", "b", "y")

# doubled coordinates
_OFFSET = {"r": (0, 0, 0), "g": (2, 0, 0), "b": (1, 1, 1), "y": (1, 1, -1)}
_UNIT = ((0, 2, 2), (2, 0, 2), (2, 2, 0))


@dataclass(frozen=True)
class Vertex:
    color: str
    coords: tuple[int, int, int] | None  # doubled; None for outer vertices

    @property
    def inner(self) -> bool:
        return self.coords is not None

    def position(self) -> tuple[Fraction, Fraction, Fraction] | None:
        if self.coords is None:
            return None
        return tuple(Fraction(c, 2) for c in self.coords)  # type: ignore[return-value]

    def label(self) -> str:
        if self.coords is None:
            return f"{self.color}*"
        return f"{self.color}(" + ",".join(str(p) for p in self.position()) + ")"


def vertex_count(l: int) -> int:
    return 2 * l * (l + 1) * (l + 2) // 3 + 4


def edge_count(l: int) -> int:
    return (14 * l**3 + 24 * l**2 + 16 * l + 18) // 3


def face_count(l: int) -> int:
    return 8 * l**3 + 12 * l**2 + 8 * l + 4


def tetrahedron_count(l: int) -> int:
    return 4 * l**3 + 6 * l**2 + 4 * l + 1


def x_rank(l: int) -> int:
    return (2 * l**3 + 6 * l**2 + 4 * l) // 3


def z_rank(l: int) -> int:
    return (10 * l**3 + 12 * l**2 + 8 * l) // 3


@dataclass(frozen=True)
class ColorComplex:
    l: int
    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[int, ...], ...]
    faces: tuple[tuple[int, ...], ...]
    tetrahedra: tuple[tuple[int, ...], ...]
    boundary_regions: dict[str, frozenset[int]]

    def outer(self, color: str) -> int:
        return len(self.vertices) - 4 + COLORS.index(color)

    def inner_ids(self) -> list[int]:
        return [i for i, v in enumerate(self.vertices) if v.inner]

    def is_boundary_edge(self, e: tuple[int, ...]) -> bool:
        return all(not self.vertices[v].inner for v in e)

    def to_dict(self) -> dict[str, Any]:
        return {
            "l": self.l,
            "vertices": [
                {
                    "color": v.color,
                    "inner": v.inner,
                    "coords": None if v.coords is None else [str(p) for p in v.position()],
                    "label": v.label(),
                }
                for v in self.vertices
            ],
            "edges": [list(e) for e in self.edges],
            "faces": [list(f) for f in self.faces],
            "tetrahedra": [list(t) for t in self.tetrahedra],
        }


def _det3(a, b, c) -> int:
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def _volume6(points) -> int:
    p0 = points[0]
    rel = [tuple(p[k] - p0[k] for k in range(3)) for p in points[1:]]
    return _det3(*rel)


def _cliques(adj: list[set[int]], size: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []

    def grow(clique: tuple[int, ...], cand: set[int]):
        if len(clique) == size:
            out.append(clique)
            return
        for v in sorted(cand):
            grow(clique + (v,), {u for u in cand if u > v} & adj[v])

    for v in range(len(adj)):
        grow((v,), {u for u in adj[v] if u > v})
    return out


def build_complex(l: int) -> ColorComplex:
    if l < 1:
        raise ValueError("l must be a positive integer")
    inner = []
    for color in COLORS:
        o = _OFFSET[color]
        pts = []
        for x in range(l):
            for y in range(l - x):
                for z in range(l - x - y):
                    pts.append(tuple(o[k] + x * _UNIT[0][k] + y * _UNIT[1][k] + z * _UNIT[2][k] for k in range(3)))
        inner.extend(Vertex(color, p) for p in sorted(pts))
    vertices = tuple(inner) + tuple(Vertex(c, None) for c in COLORS)
    ni = len(inner)
    nv = len(vertices)
    adj: list[set[int]] = [set() for _ in range(nv)]

    coords = np.array([v.coords for v in inner], dtype=np.int64)
    d2 = ((coords[:, None, :] - coords[None, :, :]) ** 2).sum(axis=2)
    for i, j in zip(*np.nonzero(np.triu(d2 <= 4, k=1))):
        adj[i].add(int(j))
        adj[j].add(int(i))

    inner_tets = [
        t for t in _cliques(adj[:ni], 4) if _volume6([inner[k].coords for k in t]) != 0
    ]
    tri_use: dict[tuple[int, ...], int] = {}
    for t in inner_tets:
        for f in itertools.combinations(t, 3):
            tri_use[f] = tri_use.get(f, 0) + 1
    regions: dict[str, set[int]] = {c: set() for c in COLORS}
    for f, uses in tri_use.items():
        if uses == 1:
            (missing,) = set(COLORS) - {inner[k].color for k in f}
            regions[missing].update(f)

    for c in COLORS:
        o = ni + COLORS.index(c)
        for v in regions[c]:
            adj[o].add(v)
            adj[v].add(o)
    for a, b in itertools.combinations(range(ni, nv), 2):
        adj[a].add(b)
        adj[b].add(a)

    for v in range(nv):
        for u in adj[v]:
            if vertices[u].color == vertices[v].color:
                raise InvalidCodeError(f"same-color edge {vertices[u].label()} - {vertices[v].label()}")

    edges = tuple(sorted((a, b) for a in range(nv) for b in adj[a] if b > a))
    faces = tuple(_cliques(adj, 3))
    tets = []
    for t in _cliques(adj, 4):
        if all(k >= ni for k in t):
            continue
        if all(k < ni for k in t) and _volume6([inner[k].coords for k in t]) == 0:
            continue
        tets.append(t)

    cx = ColorComplex(l, vertices, edges, faces, tuple(tets), {c: frozenset(regions[c]) for c in COLORS})
    want = (vertex_count(l), edge_count(l), face_count(l), tetrahedron_count(l))
    got = (len(vertices), len(edges), len(faces), len(tets))
    if got != want:
        raise InvalidCodeError(f"simplex counts {got} differ from expected {want} at l={l}")
    return cx


@dataclass(frozen=True)
class ColorCodeBundle:
    complex: ColorComplex
    code: CssCode
    interface: SurgeryInterface

    @property
    def l(self) -> int:
        return self.complex.l


def build_code(l: int) -> ColorCodeBundle:
    cx = build_complex(l)
    n = len(cx.tetrahedra)
    containing: dict[int, list[int]] = {v: [] for v in range(len(cx.vertices))}
    for q, t in enumerate(cx.tetrahedra):
        for v in t:
            containing[v].append(q)
    tet_sets = [set(t) for t in cx.tetrahedra]

    x_ids = cx.inner_ids()
    x_checks = tuple(PauliOperator.x_on(n, containing[v]) for v in x_ids)
    z_edges = [e for e in cx.edges if not cx.is_boundary_edge(e)]
    z_checks = tuple(
        PauliOperator.z_on(n, [q for q in containing[e[0]] if e[1] in tet_sets[q]]) for e in z_edges
    )
    labels = {
        "family": "color3d",
        "l": l,
        "qubits": ["".join(cx.vertices[v].label() for v in t) for t in cx.tetrahedra],
        "x_checks": [cx.vertices[v].label() for v in x_ids],
        "z_checks": [cx.vertices[a].label() + cx.vertices[b].label() for a, b in z_edges],
    }
    code = CssCode(n, x_checks, z_checks, labels=labels)
    iface = _interface(cx, code)

    rep = validate(code)
    if not rep.ok:
        raise InvalidCodeError(str(rep))
    if (len(x_checks), code.rank_x, code.rank_z, num_logical(code)) != (
        len(x_ids),
        x_rank(l),
        z_rank(l),
        1,
    ):
        raise InvalidCodeError(
            f"l={l}: r_X={code.rank_x} (want {x_rank(l)}), r_Z={code.rank_z} (want {z_rank(l)})"
        )
    xs, _ = logical_representatives(code)
    code = code.with_logicals(xs, [iface.logical_z(n)])
    rep = validate(code)
    if not rep.ok:
        raise InvalidCodeError(str(rep))
    iface.check(code)
    return ColorCodeBundle(cx, code, iface)


def _interface(cx: ColorComplex, code: CssCode) -> SurgeryInterface:
    """Tetrahedra around the outer r-b edge, ordered along the inner chain."""
    o_r, o_b = cx.outer("r"), cx.outer("b")
    chain = sorted(cx.boundary_regions["r"] & cx.boundary_regions["b"])
    cset = set(chain)
    edges = [e for e in cx.edges if e[0] in cset and e[1] in cset]
    nbrs: dict[int, list[int]] = {v: [] for v in chain}
    for a, b in edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    ends = sorted(v for v in chain if len(nbrs[v]) <= 1)
    path = [ends[0]]
    while len(path) < len(chain):
        nxt = [u for u in nbrs[path[-1]] if u not in path]
        if len(nxt) != 1:
            raise InvalidCodeError("interface vertices do not form a path")
        path.append(nxt[0])

    around = {q: set(t) for q, t in enumerate(cx.tetrahedra) if o_r in t and o_b in t}
    qubits = []
    for k in range(len(path) + 1):
        want = set(path[max(k - 1, 0) : k + 1])
        hit = [q for q, t in around.items() if want <= t and not ((t - want - {o_r, o_b}) & cset)]
        if len(hit) != 1:
            raise InvalidCodeError(f"interface tetrahedron {k} is ambiguous: {hit}")
        qubits.append(hit[0])
    if len(qubits) != len(around):
        raise InvalidCodeError("interface does not cover every tetrahedron on the r-b edge")
    x_ids = cx.inner_ids()
    checks = [x_ids.index(v) for v in path]
    return SurgeryInterface(tuple(qubits), tuple(checks))


def boundary_interface(bundle: ColorCodeBundle) -> SurgeryInterface:
    bundle.interface.check(bundle.code)
    return bundle.interface


# transversal T on the l = 1 code -----------------------------------------


def _codeword_states(code: CssCode) -> tuple[np.ndarray, np.ndarray]:
    """Dense |0-bar> and |1-bar> (qubit 0 is the most significant bit)."""
    n = code.n
    if n > 20:
        raise ValueError("dense code states are limited to 20 qubits")
    gens = code.hx.independent_rows().to_dense()
    weights = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
    gen_idx = gens.astype(np.int64) @ weights
    span = np.zeros(1, dtype=np.int64)
    for g in gen_idx:
        span = np.concatenate([span, span ^ g])
    shift = int(code.logical_x[0].x.to_array().astype(np.int64) @ weights)
    zero = np.zeros(2**n, dtype=complex)
    one = np.zeros(2**n, dtype=complex)
    zero[span] = 1.0
    one[span ^ shift] = 1.0
    return zero / np.linalg.norm(zero), one / np.linalg.norm(one)


def transversal_overlap(code: CssCode, a: int, power: int = 1) -> float:
    """|<target|out>| for ``(T^a)^power`` on every qubit of the encoded |+>.

    The target is the logical ``T^power |+>``.
    """
    zero, one = _codeword_states(code)
    n = code.n
    idx = np.arange(2**n, dtype=np.int64)
    hamming = np.zeros(2**n, dtype=np.int64)
    for k in range(n):
        hamming += (idx >> k) & 1
    plus = (zero + one) / np.sqrt(2)
    out = plus * np.exp(1j * np.pi * a * power * hamming / 4)
    target = (zero + np.exp(1j * np.pi * power / 4) * one) / np.sqrt(2)
    return float(abs(np.vdot(target, out)))


def transversal_t_exponent(bundle: ColorCodeBundle | None = None, tol: float = 1e-10) -> tuple[int, bool]:
    """Sign ``a`` such that physical ``T^a`` on all qubits acts as logical T."""
    if bundle is None:
        bundle = build_code(1)
    if bundle.l != 1:
        raise ValueError("transversal T is only checked on the l = 1 code")
    ok = [a for a in (1, -1) if transversal_overlap(bundle.code, a) >= 1 - tol]
    if len(ok) != 1:
        raise InvalidCodeError(f"transversal T verified for signs {ok}")
    return ok[0], True


def save_complex(cx: ColorComplex, path: str | Path) -> None:
    Path(path).write_text(json.dumps(cx.to_dict(), sort_keys=True, indent=1) + "\n", encoding="utf-8")


def bundle_to_dict(bundle: ColorCodeBundle) -> dict[str, Any]:
    data = code_to_dict(bundle.code)
    data["interface"] = bundle.interface.to_dict()
    return data
