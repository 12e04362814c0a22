"""Kernel-level checks.

Every kernel is compared against the dense reference's tensor application
on the same slice, for both backends.  The numpy build additionally counts
complex multiplications, which pins down the move-only property of the
specialized X/SWAP paths.
"""
import numpy as np
import pytest

from qsim import Gate, kernels
from qsim.oracle import _apply_matrix, _controlled_4x4, _SWAP

from conftest import random_state


def _slice(rng, m=6):
    return random_state(rng, m)


def _u(rng):
    raw = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, _ = np.linalg.qr(raw)
    return q.astype(np.complex128)


class TestPairKernels:
    @pytest.mark.parametrize("t_bit", [0, 2, 5])
    def test_apply_1q_pairs(self, backend, rng, t_bit):
        k = kernels.get()
        s = _slice(rng)
        u = _u(rng)
        expected = _apply_matrix(s.copy(), 6, (t_bit,), u)
        k.apply_1q_pairs(s, u, t_bit)
        np.testing.assert_allclose(s, expected, atol=1e-14)

    @pytest.mark.parametrize("t_bit", [0, 3])
    @pytest.mark.parametrize("name, matrix", [
        ("apply_x_pairs", np.array([[0, 1], [1, 0]], dtype=complex)),
        ("apply_y_pairs", np.array([[0, -1j], [1j, 0]])),
        ("apply_h_pairs", np.sqrt(0.5) * np.array([[1, 1], [1, -1]],
                                                  dtype=complex)),
    ])
    def test_specialized_1q(self, backend, rng, t_bit, name, matrix):
        k = kernels.get()
        s = _slice(rng)
        expected = _apply_matrix(s.copy(), 6, (t_bit,), matrix)
        getattr(k, name)(s, t_bit)
        np.testing.assert_allclose(s, expected, atol=1e-14)

    @pytest.mark.parametrize("d0, d1", [
        (1.0 + 0j, -1.0 + 0j),
        (np.exp(-0.35j), np.exp(0.35j)),
    ])
    def test_apply_diag(self, backend, rng, d0, d1):
        k = kernels.get()
        s = _slice(rng)
        expected = _apply_matrix(s.copy(), 6, (4,),
                                 np.diag([d0, d1]).astype(complex))
        k.apply_diag(s, d0, d1, 4)
        np.testing.assert_allclose(s, expected, atol=1e-14)

    def test_scale_all(self, backend, rng):
        k = kernels.get()
        s = _slice(rng)
        expected = s * 1j
        k.scale_all(s, 1j)
        np.testing.assert_allclose(s, expected, atol=1e-14)


class TestControlledKernels:
    @pytest.mark.parametrize("c_bit, t_bit", [(0, 1), (1, 0), (5, 2), (2, 5)])
    def test_apply_controlled_pairs(self, backend, rng, c_bit, t_bit):
        k = kernels.get()
        s = _slice(rng)
        u = _u(rng)
        expected = _apply_matrix(s.copy(), 6, (c_bit, t_bit),
                                 _controlled_4x4(u))
        k.apply_controlled_pairs(s, u, c_bit, t_bit)
        np.testing.assert_allclose(s, expected, atol=1e-14)

    @pytest.mark.parametrize("c_bit, t_bit", [(0, 1), (4, 2), (3, 5)])
    def test_apply_cx_pairs(self, backend, rng, c_bit, t_bit):
        k = kernels.get()
        s = _slice(rng)
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        expected = _apply_matrix(s.copy(), 6, (c_bit, t_bit),
                                 _controlled_4x4(x))
        k.apply_cx_pairs(s, c_bit, t_bit)
        np.testing.assert_allclose(s, expected, atol=1e-15)

    def test_apply_cdiag(self, backend, rng):
        k = kernels.get()
        s = _slice(rng)
        d1 = np.exp(0.4j)
        expected = _apply_matrix(s.copy(), 6, (2, 4),
                                 _controlled_4x4(np.diag([1.0, d1])))
        k.apply_cdiag(s, d1, 2, 4)
        np.testing.assert_allclose(s, expected, atol=1e-14)

    @pytest.mark.parametrize("a_bit, b_bit", [(0, 1), (5, 3)])
    def test_swap_pairs(self, backend, rng, a_bit, b_bit):
        k = kernels.get()
        s = _slice(rng)
        expected = _apply_matrix(s.copy(), 6, (a_bit, b_bit), _SWAP)
        k.swap_pairs(s, a_bit, b_bit)
        np.testing.assert_allclose(s, expected, atol=1e-15)


class TestCombineKernels:
    """Post-exchange halves: `mine` and `theirs` play global bit 0/1."""

    @pytest.mark.parametrize("side", [0, 1])
    def test_combine_after_exchange(self, backend, rng, side):
        k = kernels.get()
        mine, theirs = _slice(rng), _slice(rng)
        u = _u(rng)
        expected = u[side, side] * mine + u[side, 1 - side] * theirs
        k.combine_after_exchange(mine, theirs, u, side)
        np.testing.assert_allclose(mine, expected, atol=1e-14)

    @pytest.mark.parametrize("side", [0, 1])
    def test_combine_after_exchange_masked(self, backend, rng, side):
        k = kernels.get()
        mine, theirs = _slice(rng), _slice(rng)
        u = _u(rng)
        c_bit = 2
        sel = ((np.arange(mine.size) >> c_bit) & 1).astype(bool)
        expected = mine.copy()
        expected[sel] = u[side, side] * mine[sel] + \
            u[side, 1 - side] * theirs[sel]
        k.combine_after_exchange_masked(mine, theirs, u, side, c_bit)
        np.testing.assert_allclose(mine, expected, atol=1e-14)

    @pytest.mark.parametrize("side", [0, 1])
    def test_combine_h(self, backend, rng, side):
        k = kernels.get()
        mine, theirs = _slice(rng), _slice(rng)
        inv = np.sqrt(0.5)
        expected = (mine + theirs) * inv if side == 0 \
            else (theirs - mine) * inv
        k.combine_h(mine, theirs, side)
        np.testing.assert_allclose(mine, expected, atol=1e-14)

    @pytest.mark.parametrize("side", [0, 1])
    def test_combine_y(self, backend, rng, side):
        k = kernels.get()
        mine, theirs = _slice(rng), _slice(rng)
        expected = (-1j if side == 0 else 1j) * theirs
        k.combine_y(mine, theirs, side)
        np.testing.assert_allclose(mine, expected, atol=1e-15)

    def test_adopt(self, backend, rng):
        k = kernels.get()
        mine, theirs = _slice(rng), _slice(rng)
        k.adopt(mine, theirs)
        np.testing.assert_array_equal(mine, theirs)

    def test_adopt_masked(self, backend, rng):
        k = kernels.get()
        mine, theirs = _slice(rng), _slice(rng)
        before = mine.copy()
        k.adopt_masked(mine, theirs, 1)
        sel = ((np.arange(mine.size) >> 1) & 1).astype(bool)
        np.testing.assert_array_equal(mine[sel], theirs[sel])
        np.testing.assert_array_equal(mine[~sel], before[~sel])


class TestDenseKernel:
    @pytest.mark.parametrize("bits", [(3,), (0, 4), (4, 0), (1, 3, 5)])
    def test_matches_reference(self, backend, rng, bits):
        k = kernels.get()
        s = _slice(rng)
        dim = 1 << len(bits)
        raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        u, _ = np.linalg.qr(raw)
        expected = _apply_matrix(s.copy(), 6, bits, u)
        k.apply_dense_local(s, u, np.array(bits, dtype=np.int64))
        np.testing.assert_allclose(s, expected, atol=1e-13)


class TestBackendParity:
    """Both implementations produce the same numbers."""

    def test_cross_agreement(self, rng):
        if "numba" not in kernels.available_backends():
            pytest.skip("numba not importable")
        u = _u(rng)
        s0 = _slice(rng)
        results = {}
        for name in ("numba", "numpy"):
            kernels.use(name)
            k = kernels.get()
            s = s0.copy()
            k.apply_1q_pairs(s, u, 2)
            k.apply_h_pairs(s, 0)
            k.apply_controlled_pairs(s, u, 1, 4)
            k.apply_diag(s, 1.0 + 0j, 1j, 3)
            results[name] = s
        np.testing.assert_allclose(results["numba"], results["numpy"],
                                   atol=1e-14)

    def test_use_rejects_unknown(self):
        with pytest.raises(ValueError):
            kernels.use("fortran")

    def test_backend_name_tracks_selection(self):
        prev = kernels.backend_name()
        kernels.use("numpy")
        assert kernels.backend_name() == "numpy"
        kernels.use(prev)


class TestMultiplicationCounting:
    """The instrumented numpy build proves which paths move data without
    arithmetic."""

    def test_x_is_move_only(self, rng):
        s = _slice(rng)
        with kernels.count_multiplications() as counter:
            kernels.get().apply_x_pairs(s, 3)
            kernels.get().apply_cx_pairs(s, 1, 2)
            kernels.get().swap_pairs(s, 0, 4)
            kernels.get().adopt(s, s.copy())
            kernels.get().adopt_masked(s, s.copy(), 2)
        assert counter["mults"] == 0

    def test_general_paths_do_multiply(self, rng):
        s = _slice(rng)
        u = _u(rng)
        with kernels.count_multiplications() as counter:
            kernels.get().apply_1q_pairs(s, u, 3)
        assert counter["mults"] == 2 * s.size
        with kernels.count_multiplications() as counter:
            kernels.get().apply_h_pairs(s, 3)
        assert counter["mults"] == s.size
        with kernels.count_multiplications() as counter:
            kernels.get().apply_diag(s, 1.0 + 0j, 1j, 3)
        assert counter["mults"] == s.size // 2

    def test_counter_restores_backend(self):
        prev = kernels.backend_name()
        with kernels.count_multiplications():
            assert kernels.backend_name() == "numpy"
        assert kernels.backend_name() == prev


class TestInfinityProbe:
    """0*inf would surface as nan; the move-only X path keeps inf intact."""

    @pytest.mark.parametrize("name", ["numba", "numpy"])
    def test_x_propagates_inf_cleanly(self, name):
        if name not in kernels.available_backends():
            pytest.skip(f"{name} not importable")
        prev = kernels.backend_name()
        kernels.use(name)
        try:
            s = np.zeros(8, dtype=np.complex128)
            s[0] = np.inf
            kernels.get().apply_x_pairs(s, 1)
            assert s[2] == np.inf
            assert not np.isnan(s).any()

            s = np.zeros(8, dtype=np.complex128)
            s[0] = np.inf
            x = np.array([[0, 1], [1, 0]], dtype=np.complex128)
            with np.errstate(invalid="ignore"):
                kernels.get().apply_1q_pairs(s, x, 1)
            # The generic path multiplies by the zero entries.
            assert np.isnan(s).any()
        finally:
            kernels.use(prev)
