"""Time the compiled kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from magicsurgery import kernels
from magicsurgery.color_code import build_code
from magicsurgery.css import signature_columns
from magicsurgery.gf2 import pack
from magicsurgery.noise import _matrices
from magicsurgery.surface_code import build_surface
from magicsurgery.surgery import merge


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    dense = (rng.random((400, 600)) < 0.3).astype(np.uint8)
    rows = pack(dense, 600)
    yield "rref 400x600", lambda k: k.rref_inplace(rows.copy(), 600)

    syn, log = signature_columns(build_code(2).code, "Z")
    yield "search weight 4, n=65", lambda k: k.search_weight(syn, log, 4, 0, 65, 0)

    b, s = build_code(1), build_surface(3)
    code = merge(b.code, b.interface, s.code, s.interface).code
    hz, lz, hx, lx = _matrices(code)
    ex = pack((rng.random((200_000, code.n)) < 0.01).astype(np.uint8), code.n)
    ez = pack((rng.random((200_000, code.n)) < 0.01).astype(np.uint8), code.n)
    yield "error flags 2e5 x n=30", lambda k: k.error_flags(ex, ez, hz, lz, hx, lx)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    impls = kernels.backends()
    if "cython" not in impls:
        print("compiled extension not available; timing the fallback only")
    print(f"{'kernel':28s}" + "".join(f"{name:>12s}" for name in impls) + ("     speedup" if len(impls) > 1 else ""))
    for label, fn in cases():
        t = {name: best_of(lambda: fn(mod), args.repeat) for name, mod in impls.items()}
        line = f"{label:28s}" + "".join(f"{v * 1e3:10.1f}ms" for v in t.values())
        if len(t) > 1:
            line += f"{t['python'] / t['cython']:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
