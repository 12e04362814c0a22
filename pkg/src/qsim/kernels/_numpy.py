"""Vectorized numpy kernels: the fallback path and the instrumented build.

When the multiplication counter is enabled, each kernel records how many
complex multiplications it issued; the move-only kernels (X, SWAP, adopt)
issue none, which is the point of the specialized gate paths.
"""
from __future__ import annotations

import numpy as np

mult_counter = {"mults": 0}
_counting = False


def enable_mult_count(on: bool) -> None:
    global _counting
    _counting = on


def reset_mult_count() -> None:
    mult_counter["mults"] = 0


def _count(n: int) -> None:
    if _counting:
        mult_counter["mults"] += n


def _halves(s, t_bit):
    v = s.reshape(-1, 2, 1 << t_bit)
    return v[:, 0, :], v[:, 1, :]


def apply_1q_pairs(s, u, t_bit):
    a0, a1 = _halves(s, t_bit)
    t0 = a0.copy()
    a0[:] = u[0, 0] * t0 + u[0, 1] * a1
    a1[:] = u[1, 0] * t0 + u[1, 1] * a1
    _count(2 * s.size)


def apply_x_pairs(s, t_bit):
    a0, a1 = _halves(s, t_bit)
    t0 = a0.copy()
    a0[:] = a1
    a1[:] = t0


def apply_y_pairs(s, t_bit):
    a0, a1 = _halves(s, t_bit)
    t0 = a0.copy()
    a0[:] = -1j * a1
    a1[:] = 1j * t0
    _count(s.size)


def apply_h_pairs(s, t_bit):
    inv = 0.7071067811865476
    a0, a1 = _halves(s, t_bit)
    t0 = a0.copy()
    a0[:] = (t0 + a1) * inv
    a1[:] = (t0 - a1) * inv
    _count(s.size)


def apply_diag(s, d0, d1, t_bit):
    a0, a1 = _halves(s, t_bit)
    if d0 == 1.0:
        a1 *= d1
        _count(s.size // 2)
    else:
        a0 *= d0
        a1 *= d1
        _count(s.size)


def apply_cdiag(s, d1, c_bit, t_bit):
    idx = np.arange(s.size)
    sel = ((idx >> c_bit) & 1).astype(bool) & ((idx >> t_bit) & 1).astype(bool)
    s[sel] *= d1
    _count(s.size // 4)


def scale_all(s, factor):
    s *= factor
    _count(s.size)


def apply_controlled_pairs(s, u, c_bit, t_bit):
    idx = np.arange(s.size)
    sel = ((idx >> c_bit) & 1).astype(bool) & (~((idx >> t_bit) & 1).astype(bool))
    i0 = idx[sel]
    i1 = i0 | (1 << t_bit)
    t0 = s[i0]
    t1 = s[i1]
    s[i0] = u[0, 0] * t0 + u[0, 1] * t1
    s[i1] = u[1, 0] * t0 + u[1, 1] * t1
    _count(s.size)


def apply_cx_pairs(s, c_bit, t_bit):
    idx = np.arange(s.size)
    sel = ((idx >> c_bit) & 1).astype(bool) & (~((idx >> t_bit) & 1).astype(bool))
    i0 = idx[sel]
    i1 = i0 | (1 << t_bit)
    s[i0], s[i1] = s[i1], s[i0].copy()


def swap_pairs(s, a_bit, b_bit):
    idx = np.arange(s.size)
    sel = ((idx >> a_bit) & 1).astype(bool) & (~((idx >> b_bit) & 1).astype(bool))
    i10 = idx[sel]
    i01 = i10 ^ ((1 << a_bit) | (1 << b_bit))
    s[i10], s[i01] = s[i01], s[i10].copy()


def combine_after_exchange(mine, theirs, u, side):
    if side == 0:
        mine *= u[0, 0]
        mine += u[0, 1] * theirs
    else:
        mine *= u[1, 1]
        mine += u[1, 0] * theirs
    _count(2 * mine.size)


def combine_after_exchange_masked(mine, theirs, u, side, c_bit):
    idx = np.arange(mine.size)
    sel = ((idx >> c_bit) & 1).astype(bool)
    if side == 0:
        mine[sel] = u[0, 0] * mine[sel] + u[0, 1] * theirs[sel]
    else:
        mine[sel] = u[1, 1] * mine[sel] + u[1, 0] * theirs[sel]
    _count(mine.size)


def adopt(mine, theirs):
    mine[:] = theirs


def adopt_masked(mine, theirs, c_bit):
    idx = np.arange(mine.size)
    sel = ((idx >> c_bit) & 1).astype(bool)
    mine[sel] = theirs[sel]


def combine_h(mine, theirs, side):
    inv = 0.7071067811865476
    if side == 0:
        mine += theirs
        mine *= inv
    else:
        mine -= theirs
        mine *= -inv
    _count(mine.size)


def combine_y(mine, theirs, side):
    if side == 0:
        mine[:] = -1j * theirs
    else:
        mine[:] = 1j * theirs
    _count(mine.size)


def apply_dense_local(s, u, t_bits):
    m = len(t_bits)
    g = np.arange(s.size >> m)
    base = g
    for b in sorted(t_bits):
        base = ((base >> b) << (b + 1)) | (base & ((1 << b) - 1))
    offsets = np.zeros(1 << m, dtype=np.int64)
    for v in range(1 << m):
        for j, b in enumerate(t_bits):
            offsets[v] |= ((v >> j) & 1) << b
    idx = offsets[:, None] | base[None, :]
    s[idx] = u @ s[idx]
    _count((1 << m) * s.size)
