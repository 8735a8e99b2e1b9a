"""Pure-Python implementations of the hot kernels.

Rows are Python ints used as bitsets (bit i = coordinate i). W-group elements
are packed ints: alpha in bits [0, n), beta in [n, n + n(n-1)/2) with pairs
(i, j), i < j, in lexicographic order, gamma in the top n bits.
"""

from __future__ import annotations

import numpy as np


def rref_rows(rows, ncols):
    """Reduced echelon basis of the row span, sorted by pivot (lowest set bit)."""
    basis: dict[int, int] = {}
    for r in rows:
        r &= (1 << ncols) - 1
        while r:
            low = r & -r
            p = low.bit_length() - 1
            b = basis.get(p)
            if b is None:
                basis[p] = r
                break
            r ^= b
    piv = sorted(basis)
    out = []
    for p in reversed(piv):
        r = basis[p]
        # clear later pivots, already reduced
        for q in piv:
            if q > p and (r >> q) & 1:
                r ^= basis[q]
        basis[p] = r
    for p in piv:
        out.append(basis[p])
    return out


def rank_rows(rows, ncols):
    basis: dict[int, int] = {}
    mask = (1 << ncols) - 1
    for r in rows:
        r &= mask
        while r:
            p = (r & -r).bit_length() - 1
            b = basis.get(p)
            if b is None:
                basis[p] = r
                break
            r ^= b
        if len(basis) == ncols:
            break
    return len(basis)


def pair_offsets(n):
    offs = []
    acc = 0
    for i in range(n):
        offs.append(acc)
        acc += n - 1 - i
    return offs


def cross(gh, gg, offs):
    """Beta bits with (i, j) set iff bit i of gh and bit j of gg, i < j."""
    out = 0
    while gh:
        low = gh & -gh
        i = low.bit_length() - 1
        out |= (gg >> (i + 1)) << offs[i]
        gh ^= low
    return out


def w_mul(g, h, n, offs):
    m = n + n * (n - 1) // 2
    gg = g >> m
    gh = h >> m
    return g ^ h ^ (gg & gh) ^ (cross(gh, gg, offs) << n)


def reduce_by(x, vrows, vpivots):
    for row, p in zip(vrows, vpivots):
        if (x >> p) & 1:
            x ^= row
    return x


def gal_mul_many(gs, hs, n, vrows, vpivots):
    """Products g_k * h_k reduced modulo the central subspace spanned by vrows."""
    offs = pair_offsets(n)
    out = np.empty(len(gs), dtype=np.uint64)
    vr = [int(r) for r in vrows]
    vp = [int(p) for p in vpivots]
    for k in range(len(gs)):
        out[k] = reduce_by(w_mul(int(gs[k]), int(hs[k]), n, offs), vr, vp)
    return out
