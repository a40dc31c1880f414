"""Pure numpy twins of the compiled kernels in ``_kernels.pyx``.

Signatures and results match the compiled versions exactly; only speed
differs. See ``benchmarks/bench_kernels.py``.
"""

from __future__ import annotations

import itertools

import numpy as np


def rref_inplace(rows: np.ndarray, ncols: int) -> list[int]:
    nrows = rows.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        w, bit = c >> 6, np.uint64(1 << (c & 63))
        col = (rows[r:, w] & bit) != 0
        if not col.any():
            continue
        p = r + int(np.argmax(col))
        if p != r:
            rows[[r, p]] = rows[[p, r]]
        hit = (rows[:, w] & bit) != 0
        hit[r] = False
        rows[hit, w:] ^= rows[r, w:]
        pivots.append(c)
        r += 1
    return pivots


def _pair_table(n: int):
    jj, kk = np.triu_indices(n, k=1)  # lexicographic (j, k) order
    starts = np.searchsorted(jj, np.arange(n + 1))
    return jj, kk, starts


def search_weight(
    syn: np.ndarray,
    log: np.ndarray,
    weight: int,
    first_lo: int,
    first_hi: int,
    max_hits: int,
) -> list[tuple[int, ...]]:
    n = syn.shape[0]
    hits: list[tuple[int, ...]] = []
    if weight <= 0 or weight > n:
        return hits
    first_hi = min(first_hi, n - weight + 1)
    if first_lo >= first_hi:
        return hits

    def _done() -> bool:
        return 0 < max_hits <= len(hits)

    if weight == 1:
        for j in range(first_lo, first_hi):
            if not syn[j].any() and log[j].any():
                hits.append((j,))
                if _done():
                    break
        return hits

    jj, kk, starts = _pair_table(n)
    pair_s = syn[jj] ^ syn[kk]
    pair_l = log[jj] ^ log[kk]
    zero_s = np.zeros(syn.shape[1], dtype=np.uint64)
    zero_l = np.zeros(log.shape[1], dtype=np.uint64)

    if weight == 2:
        prefixes = [()]
    else:
        prefixes = (
            (i0,) + rest
            for i0 in range(first_lo, first_hi)
            for rest in itertools.combinations(range(i0 + 1, n), weight - 3)
        )
    for prefix in prefixes:
        if prefix:
            acc_s = np.bitwise_xor.reduce(syn[list(prefix)], axis=0)
            acc_l = np.bitwise_xor.reduce(log[list(prefix)], axis=0)
            lo, hi = starts[prefix[-1] + 1], len(jj)
        else:
            acc_s, acc_l = zero_s, zero_l
            lo, hi = starts[first_lo], starts[first_hi]
        if lo >= hi:
            continue
        ok = ~(pair_s[lo:hi] ^ acc_s).any(axis=1) & (pair_l[lo:hi] ^ acc_l).any(axis=1)
        for off in np.flatnonzero(ok):
            hits.append(prefix + (int(jj[lo + off]), int(kk[lo + off])))
            if _done():
                return hits
    return hits


def _parities(err: np.ndarray, rows: np.ndarray) -> np.ndarray:
    if rows.shape[0] == 0:
        return np.zeros((err.shape[0], 0), dtype=bool)
    counts = np.bitwise_count(err[:, None, :] & rows[None, :, :]).sum(axis=2)
    return (counts & 1).astype(bool)


def error_flags(ex, ez, hz, lz, hx, lx) -> tuple[np.ndarray, np.ndarray]:
    accepted = ~(_parities(ex, hz).any(axis=1) | _parities(ez, hx).any(axis=1))
    failed = accepted & (_parities(ex, lz).any(axis=1) | _parities(ez, lx).any(axis=1))
    return accepted.astype(np.uint8), failed.astype(np.uint8)
