"""@njit compiled kernels; the hot path.

Same surface as ``_numpy``.  Loops iterate over group indices and expand them
into amplitude indices with bit insertion, so every update is index-disjoint.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def apply_1q_pairs(s, u, t_bit):
    u00, u01, u10, u11 = u[0, 0], u[0, 1], u[1, 0], u[1, 1]
    mask = (1 << t_bit) - 1
    step = 1 << t_bit
    for g in range(s.size >> 1):
        i0 = ((g >> t_bit) << (t_bit + 1)) | (g & mask)
        i1 = i0 | step
        a0 = s[i0]
        a1 = s[i1]
        s[i0] = u00 * a0 + u01 * a1
        s[i1] = u10 * a0 + u11 * a1


@njit(cache=True, nogil=True)
def apply_x_pairs(s, t_bit):
    mask = (1 << t_bit) - 1
    step = 1 << t_bit
    for g in range(s.size >> 1):
        i0 = ((g >> t_bit) << (t_bit + 1)) | (g & mask)
        i1 = i0 | step
        tmp = s[i0]
        s[i0] = s[i1]
        s[i1] = tmp


@njit(cache=True, nogil=True)
def apply_y_pairs(s, t_bit):
    mask = (1 << t_bit) - 1
    step = 1 << t_bit
    for g in range(s.size >> 1):
        i0 = ((g >> t_bit) << (t_bit + 1)) | (g & mask)
        i1 = i0 | step
        tmp = s[i0]
        s[i0] = -1j * s[i1]
        s[i1] = 1j * tmp


@njit(cache=True, nogil=True)
def apply_h_pairs(s, t_bit):
    inv = 0.7071067811865476
    mask = (1 << t_bit) - 1
    step = 1 << t_bit
    for g in range(s.size >> 1):
        i0 = ((g >> t_bit) << (t_bit + 1)) | (g & mask)
        i1 = i0 | step
        a0 = s[i0]
        a1 = s[i1]
        s[i0] = (a0 + a1) * inv
        s[i1] = (a0 - a1) * inv


@njit(cache=True, nogil=True)
def apply_diag(s, d0, d1, t_bit):
    mask = (1 << t_bit) - 1
    step = 1 << t_bit
    if d0 == 1.0:
        for g in range(s.size >> 1):
            i1 = ((g >> t_bit) << (t_bit + 1)) | (g & mask) | step
            s[i1] *= d1
    else:
        for g in range(s.size >> 1):
            i0 = ((g >> t_bit) << (t_bit + 1)) | (g & mask)
            s[i0] *= d0
            s[i0 | step] *= d1


@njit(cache=True, nogil=True)
def apply_cdiag(s, d1, c_bit, t_bit):
    lo = min(c_bit, t_bit)
    hi = max(c_bit, t_bit)
    both = (1 << c_bit) | (1 << t_bit)
    for g in range(s.size >> 2):
        i = ((g >> lo) << (lo + 1)) | (g & ((1 << lo) - 1))
        i = ((i >> hi) << (hi + 1)) | (i & ((1 << hi) - 1))
        s[i | both] *= d1


@njit(cache=True, nogil=True)
def scale_all(s, factor):
    for i in range(s.size):
        s[i] *= factor


@njit(cache=True, nogil=True)
def apply_controlled_pairs(s, u, c_bit, t_bit):
    u00, u01, u10, u11 = u[0, 0], u[0, 1], u[1, 0], u[1, 1]
    lo = min(c_bit, t_bit)
    hi = max(c_bit, t_bit)
    cmask = 1 << c_bit
    tmask = 1 << t_bit
    for g in range(s.size >> 2):
        i = ((g >> lo) << (lo + 1)) | (g & ((1 << lo) - 1))
        i = ((i >> hi) << (hi + 1)) | (i & ((1 << hi) - 1))
        i0 = i | cmask
        i1 = i0 | tmask
        a0 = s[i0]
        a1 = s[i1]
        s[i0] = u00 * a0 + u01 * a1
        s[i1] = u10 * a0 + u11 * a1


@njit(cache=True, nogil=True)
def apply_cx_pairs(s, c_bit, t_bit):
    lo = min(c_bit, t_bit)
    hi = max(c_bit, t_bit)
    cmask = 1 << c_bit
    tmask = 1 << t_bit
    for g in range(s.size >> 2):
        i = ((g >> lo) << (lo + 1)) | (g & ((1 << lo) - 1))
        i = ((i >> hi) << (hi + 1)) | (i & ((1 << hi) - 1))
        i0 = i | cmask
        i1 = i0 | tmask
        tmp = s[i0]
        s[i0] = s[i1]
        s[i1] = tmp


@njit(cache=True, nogil=True)
def swap_pairs(s, a_bit, b_bit):
    lo = min(a_bit, b_bit)
    hi = max(a_bit, b_bit)
    amask = 1 << a_bit
    bmask = 1 << b_bit
    for g in range(s.size >> 2):
        i = ((g >> lo) << (lo + 1)) | (g & ((1 << lo) - 1))
        i = ((i >> hi) << (hi + 1)) | (i & ((1 << hi) - 1))
        i01 = i | bmask
        i10 = i | amask
        tmp = s[i01]
        s[i01] = s[i10]
        s[i10] = tmp


@njit(cache=True, nogil=True)
def combine_after_exchange(mine, theirs, u, side):
    if side == 0:
        ua, ub = u[0, 0], u[0, 1]
    else:
        ua, ub = u[1, 1], u[1, 0]
    for i in range(mine.size):
        mine[i] = ua * mine[i] + ub * theirs[i]


@njit(cache=True, nogil=True)
def combine_after_exchange_masked(mine, theirs, u, side, c_bit):
    if side == 0:
        ua, ub = u[0, 0], u[0, 1]
    else:
        ua, ub = u[1, 1], u[1, 0]
    mask = (1 << c_bit) - 1
    cmask = 1 << c_bit
    for g in range(mine.size >> 1):
        i = ((g >> c_bit) << (c_bit + 1)) | (g & mask) | cmask
        mine[i] = ua * mine[i] + ub * theirs[i]


@njit(cache=True, nogil=True)
def adopt(mine, theirs):
    for i in range(mine.size):
        mine[i] = theirs[i]


@njit(cache=True, nogil=True)
def adopt_masked(mine, theirs, c_bit):
    mask = (1 << c_bit) - 1
    cmask = 1 << c_bit
    for g in range(mine.size >> 1):
        i = ((g >> c_bit) << (c_bit + 1)) | (g & mask) | cmask
        mine[i] = theirs[i]


@njit(cache=True, nogil=True)
def combine_h(mine, theirs, side):
    inv = 0.7071067811865476
    if side == 0:
        for i in range(mine.size):
            mine[i] = (mine[i] + theirs[i]) * inv
    else:
        for i in range(mine.size):
            mine[i] = (theirs[i] - mine[i]) * inv


@njit(cache=True, nogil=True)
def combine_y(mine, theirs, side):
    if side == 0:
        for i in range(mine.size):
            mine[i] = -1j * theirs[i]
    else:
        for i in range(mine.size):
            mine[i] = 1j * theirs[i]


@njit(cache=True, nogil=True)
def apply_dense_local(s, u, t_bits):
    m = t_bits.size
    dim = 1 << m
    bits_sorted = np.sort(t_bits)
    offsets = np.zeros(dim, dtype=np.int64)
    for v in range(dim):
        for j in range(m):
            offsets[v] |= ((v >> j) & 1) << t_bits[j]
    sub = np.empty(dim, dtype=np.complex128)
    out = np.empty(dim, dtype=np.complex128)
    for g in range(s.size >> m):
        base = g
        for j in range(m):
            b = bits_sorted[j]
            base = ((base >> b) << (b + 1)) | (base & ((1 << b) - 1))
        for v in range(dim):
            sub[v] = s[base | offsets[v]]
        for r in range(dim):
            acc = 0.0 + 0.0j
            for c in range(dim):
                acc += u[r, c] * sub[c]
            out[r] = acc
        for v in range(dim):
            s[base | offsets[v]] = out[v]
