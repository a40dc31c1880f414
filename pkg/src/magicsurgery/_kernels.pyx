# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled GF(2) kernels.

Every function here has a numpy twin in ``_pykernels`` with the same
signature and bit-identical results. Bits are packed little-endian into
``uint64`` words: bit ``c`` of a row lives in word ``c >> 6`` at position
``c & 63``.
"""
import numpy as np

cimport numpy as cnp
from libc.stdint cimport uint64_t

cnp.import_array()


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int _parity_and(const uint64_t* a, const uint64_t* b, Py_ssize_t nw) noexcept nogil:
    cdef Py_ssize_t k
    cdef uint64_t acc = 0
    for k in range(nw):
        acc ^= a[k] & b[k]
    return __builtin_popcountll(acc) & 1


cdef inline bint _any_odd(const uint64_t* e, const uint64_t[:, ::1] rows, Py_ssize_t nw) noexcept nogil:
    cdef Py_ssize_t r
    for r in range(rows.shape[0]):
        if _parity_and(e, &rows[r, 0], nw):
            return True
    return False


def rref_inplace(uint64_t[:, ::1] rows, Py_ssize_t ncols):
    """Reduce packed ``rows`` to reduced row echelon form in place.

    Returns the list of pivot columns; its length is the rank.
    """
    cdef Py_ssize_t nrows = rows.shape[0]
    cdef Py_ssize_t nw = rows.shape[1]
    cdef Py_ssize_t r = 0, c, w, p, i, k
    cdef uint64_t bit, tmp
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        w = c >> 6
        bit = (<uint64_t>1) << (c & 63)
        p = -1
        for i in range(r, nrows):
            if rows[i, w] & bit:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for k in range(w, nw):
                tmp = rows[p, k]
                rows[p, k] = rows[r, k]
                rows[r, k] = tmp
        for i in range(nrows):
            if i != r and (rows[i, w] & bit):
                for k in range(w, nw):
                    rows[i, k] ^= rows[r, k]
        pivots.append(c)
        r += 1
    return pivots


def search_weight(
    const uint64_t[:, ::1] syn,
    const uint64_t[:, ::1] log,
    Py_ssize_t weight,
    Py_ssize_t first_lo,
    Py_ssize_t first_hi,
    Py_ssize_t max_hits,
):
    """Enumerate weight-``weight`` supports in lexicographic order.

    ``syn[j]`` and ``log[j]`` are the packed check and logical signatures of
    qubit ``j``. A support is a hit when its check signatures XOR to zero and
    its logical signatures do not. Only supports whose smallest index lies in
    ``[first_lo, first_hi)`` are visited. Returns at most ``max_hits`` index
    tuples (``max_hits <= 0`` means no limit).
    """
    cdef Py_ssize_t n = syn.shape[0]
    cdef Py_ssize_t ws = syn.shape[1]
    cdef Py_ssize_t wl = log.shape[1]
    cdef Py_ssize_t level, k, j
    cdef bint zero, nonzero
    hits = []
    if weight <= 0 or weight > n:
        return hits
    if first_hi > n - weight + 1:
        first_hi = n - weight + 1
    if first_lo >= first_hi:
        return hits

    cdef cnp.ndarray[cnp.intp_t, ndim=1] idx_arr = np.zeros(weight, dtype=np.intp)
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] acc_s_arr = np.zeros((weight + 1, max(ws, 1)), dtype=np.uint64)
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] acc_l_arr = np.zeros((weight + 1, max(wl, 1)), dtype=np.uint64)
    cdef Py_ssize_t[::1] idx = idx_arr
    cdef uint64_t[:, ::1] acc_s = acc_s_arr
    cdef uint64_t[:, ::1] acc_l = acc_l_arr

    level = 0
    idx[0] = first_lo
    while True:
        j = idx[level]
        if (level == 0 and j >= first_hi) or j > n - (weight - level):
            if level == 0:
                break
            level -= 1
            idx[level] += 1
            continue
        for k in range(ws):
            acc_s[level + 1, k] = acc_s[level, k] ^ syn[j, k]
        for k in range(wl):
            acc_l[level + 1, k] = acc_l[level, k] ^ log[j, k]
        if level == weight - 1:
            zero = True
            for k in range(ws):
                if acc_s[weight, k]:
                    zero = False
                    break
            if zero:
                nonzero = False
                for k in range(wl):
                    if acc_l[weight, k]:
                        nonzero = True
                        break
                if nonzero:
                    hits.append(tuple(idx_arr.tolist()))
                    if 0 < max_hits <= len(hits):
                        return hits
            idx[level] += 1
        else:
            level += 1
            idx[level] = idx[level - 1] + 1
    return hits


def error_flags(
    const uint64_t[:, ::1] ex,
    const uint64_t[:, ::1] ez,
    const uint64_t[:, ::1] hz,
    const uint64_t[:, ::1] lz,
    const uint64_t[:, ::1] hx,
    const uint64_t[:, ::1] lx,
):
    """Per-trial detection and logical-failure flags for packed Pauli errors.

    ``ex``/``ez`` hold the X and Z parts of one error per row. X parts are
    checked against Z-type rows (``hz``, ``lz``) and Z parts against X-type
    rows. Returns ``(accepted, failed)`` as uint8 arrays; ``failed`` is only
    set on accepted trials.
    """
    cdef Py_ssize_t t_count = ex.shape[0]
    cdef Py_ssize_t nw = ex.shape[1]
    cdef Py_ssize_t t
    accepted_arr = np.zeros(t_count, dtype=np.uint8)
    failed_arr = np.zeros(t_count, dtype=np.uint8)
    cdef unsigned char[::1] accepted = accepted_arr
    cdef unsigned char[::1] failed = failed_arr
    if t_count == 0:
        return accepted_arr, failed_arr
    with nogil:
        for t in range(t_count):
            if _any_odd(&ex[t, 0], hz, nw) or _any_odd(&ez[t, 0], hx, nw):
                continue
            accepted[t] = 1
            if _any_odd(&ex[t, 0], lz, nw) or _any_odd(&ez[t, 0], lx, nw):
                failed[t] = 1
    return accepted_arr, failed_arr
