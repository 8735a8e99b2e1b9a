# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in _pykernels."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t

cnp.import_array()


cdef inline int _bit(const uint64_t[:, ::1] a, Py_ssize_t r, Py_ssize_t c) nogil:
    return <int>((a[r, c >> 6] >> (c & 63)) & 1)


def _to_words(rows, Py_ssize_t ncols):
    cdef Py_ssize_t nw = (ncols + 63) // 64
    cdef Py_ssize_t nbytes = nw * 8
    arr = np.zeros((len(rows), max(nw, 1)), dtype=np.uint64)
    mask = (1 << int(ncols)) - 1  # Python int: a C shift overflows past 63
    for k, r in enumerate(rows):
        r &= mask
        if r:
            arr[k, :nw] = np.frombuffer(r.to_bytes(nbytes, "little"), dtype=np.uint64)
    return arr


cdef Py_ssize_t _eliminate(uint64_t[:, ::1] a, Py_ssize_t ncols, bint reduced, Py_ssize_t[::1] piv) nogil:
    cdef Py_ssize_t nrows = a.shape[0]
    cdef Py_ssize_t nw = a.shape[1]
    cdef Py_ssize_t rank = 0
    cdef Py_ssize_t col, r, rr, w, k, start
    cdef uint64_t bitm, tmp
    for col in range(ncols):
        if rank == nrows:
            break
        w = col >> 6
        bitm = (<uint64_t>1) << (col & 63)
        r = -1
        for rr in range(rank, nrows):
            if a[rr, w] & bitm:
                r = rr
                break
        if r < 0:
            continue
        if r != rank:
            for k in range(nw):
                tmp = a[r, k]
                a[r, k] = a[rank, k]
                a[rank, k] = tmp
        start = 0 if reduced else rank + 1
        for rr in range(start, nrows):
            if rr != rank and (a[rr, w] & bitm):
                for k in range(w, nw):
                    a[rr, k] ^= a[rank, k]
        piv[rank] = col
        rank += 1
    return rank


def rank_rows(rows, Py_ssize_t ncols):
    if not rows or ncols == 0:
        return 0
    arr = _to_words(rows, ncols)
    cdef uint64_t[:, ::1] a = arr
    piv = np.zeros(len(rows), dtype=np.intp)
    cdef Py_ssize_t[::1] pv = piv
    cdef Py_ssize_t rank
    with nogil:
        rank = _eliminate(a, ncols, False, pv)
    return int(rank)


def rref_rows(rows, Py_ssize_t ncols):
    if not rows or ncols == 0:
        return []
    arr = _to_words(rows, ncols)
    cdef uint64_t[:, ::1] a = arr
    piv = np.zeros(len(rows), dtype=np.intp)
    cdef Py_ssize_t[::1] pv = piv
    cdef Py_ssize_t rank
    with nogil:
        rank = _eliminate(a, ncols, True, pv)
    out = []
    for k in range(rank):
        out.append(int.from_bytes(arr[k].tobytes(), "little"))
    return out


cdef inline uint64_t _cross(uint64_t gh, uint64_t gg, const Py_ssize_t* offs) nogil:
    cdef uint64_t out = 0
    cdef uint64_t low
    cdef int i
    while gh:
        low = gh & (~gh + 1)
        i = 0
        while not ((low >> i) & 1):
            i += 1
        out |= (gg >> (i + 1)) << offs[i]
        gh ^= low
    return out


def gal_mul_many(const uint64_t[::1] gs, const uint64_t[::1] hs, int n,
                 vrows, vpivots):
    """Batch W-group products, reduced against a central subspace basis."""
    cdef Py_ssize_t N = gs.shape[0]
    cdef int m = n + n * (n - 1) // 2
    if m + n > 64:
        raise OverflowError("packed W element does not fit in 64 bits")
    cdef Py_ssize_t offs[16]
    cdef Py_ssize_t acc = 0
    cdef int i
    for i in range(n):
        offs[i] = acc
        acc += n - 1 - i
    vr_arr = np.ascontiguousarray(np.asarray(vrows, dtype=np.uint64).reshape(-1))
    vp_arr = np.ascontiguousarray(np.asarray(vpivots, dtype=np.int64).reshape(-1))
    cdef const uint64_t[::1] vr = vr_arr
    cdef const long long[::1] vp = vp_arr
    cdef Py_ssize_t nv = vr.shape[0]
    out = np.empty(N, dtype=np.uint64)
    cdef uint64_t[::1] o = out
    cdef Py_ssize_t k, j
    cdef uint64_t g, h, gg, gh, x
    with nogil:
        for k in range(N):
            g = gs[k]
            h = hs[k]
            gg = g >> m
            gh = h >> m
            x = g ^ h ^ (gg & gh) ^ (_cross(gh, gg, offs) << n)
            for j in range(nv):
                if (x >> vp[j]) & 1:
                    x ^= vr[j]
            o[k] = x
    return out
