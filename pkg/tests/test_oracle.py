"""Dense single-buffer reference and the analytic transform it is checked
against."""
import numpy as np
import pytest

from qsim import Circuit, Gate
from qsim.circuits import build_qft
from qsim.errors import GateError, QsimError
from qsim.measure import PauliTerm
from qsim.oracle import (DenseState, dense_apply, dense_expval, dense_run,
                         dft_reference)

from conftest import random_state


class TestDenseState:
    def test_starts_in_given_basis_state(self):
        st = DenseState(3, basis_state=4)
        assert st.vec[4] == 1.0
        assert np.count_nonzero(st.vec) == 1

    def test_rejects_oversized_register(self):
        with pytest.raises(QsimError, match="20"):
            DenseState(21)

    def test_rejects_bad_basis_state(self):
        with pytest.raises(QsimError):
            DenseState(3, basis_state=8)


class TestDenseApply:
    def test_h_on_zero(self):
        st = DenseState(1)
        dense_apply(st, Gate.h(0))
        np.testing.assert_allclose(st.vec,
                                   [np.sqrt(0.5), np.sqrt(0.5)], atol=1e-15)

    def test_x_flips_bit_two(self):
        st = DenseState(3)
        dense_apply(st, Gate.x(2))
        assert st.vec[4] == 1.0

    def test_cnot_only_when_control_set(self):
        st = DenseState(2)                      # |00>
        dense_apply(st, Gate.cnot(0, 1))
        assert st.vec[0] == 1.0
        dense_apply(st, Gate.x(0))              # |01>
        dense_apply(st, Gate.cnot(0, 1))        # |11>
        assert st.vec[3] == 1.0

    def test_swap_exchanges_bits(self):
        st = DenseState(3, basis_state=1)
        dense_apply(st, Gate.swap(0, 2))
        assert st.vec[4] == 1.0

    def test_crk_phases_all_four_blocks(self):
        st = DenseState(2)
        st.vec[:] = 0.5
        dense_apply(st, Gate.crk(0, 1, 2))
        phase = np.exp(2j * np.pi / 4)
        np.testing.assert_allclose(st.vec, [0.5, 0.5, 0.5, 0.5 * phase],
                                   atol=1e-15)

    def test_norm_preserved_over_random_gates(self, rng):
        from qsim.cli import random_circuit
        st = DenseState(5)
        st.vec[:] = random_state(rng, 5)
        for g in random_circuit(rng, 5, 20, text_only=False).gates:
            dense_apply(st, g)
        assert abs(np.linalg.norm(st.vec) - 1.0) < 1e-13


class TestDftReference:
    def test_basis_zero_is_uniform(self):
        out = dft_reference(0, 2)
        np.testing.assert_allclose(out, np.full(4, 0.5), atol=1e-15)

    def test_single_qubit_one(self):
        out = dft_reference(1, 1)
        np.testing.assert_allclose(out, [np.sqrt(0.5), -np.sqrt(0.5)],
                                   atol=1e-15)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_matches_qft_circuit(self, n):
        circ = build_qft(n, with_swaps=True)
        for x in range(1 << n):
            got = dense_run(circ, basis_state=x)
            np.testing.assert_allclose(got, dft_reference(x, n), atol=1e-12)

    def test_unitarity(self):
        cols = np.stack([dft_reference(x, 4) for x in range(16)], axis=1)
        np.testing.assert_allclose(cols @ cols.conj().T, np.eye(16),
                                   atol=1e-13)


class TestDenseExpval:
    def test_z_on_one(self):
        st = DenseState(1, basis_state=1)
        val = dense_expval(st.vec, [PauliTerm(1.0, {0: "Z"})])
        assert val == pytest.approx(-1.0, abs=1e-14)

    def test_x_on_plus(self):
        st = DenseState(1)
        dense_apply(st, Gate.h(0))
        val = dense_expval(st.vec, [PauliTerm(1.0, {0: "X"})])
        assert val == pytest.approx(1.0, abs=1e-14)

    def test_y_on_y_eigenstate(self):
        vec = np.array([1.0, 1j]) * np.sqrt(0.5)
        val = dense_expval(vec, [PauliTerm(2.0, {0: "Y"})])
        assert val == pytest.approx(2.0, abs=1e-14)

    def test_matches_kron_hamiltonian(self, rng):
        # Independent check: build the operator matrix explicitly.
        paulis = {
            "X": np.array([[0, 1], [1, 0]], dtype=complex),
            "Y": np.array([[0, -1j], [1j, 0]]),
            "Z": np.diag([1.0, -1.0]).astype(complex),
        }
        n = 4
        terms = [PauliTerm(0.7, {0: "Z", 2: "X"}),
                 PauliTerm(-1.2, {1: "Y"}),
                 PauliTerm(0.3, {0: "X", 1: "X", 3: "Z"})]
        h = np.zeros((16, 16), dtype=complex)
        for term in terms:
            op = np.eye(1, dtype=complex)
            for q in range(n):                 # qubit 0 is the low bit
                f = paulis.get(term.factors.get(q, ""), np.eye(2))
                op = np.kron(f, op)
            h += term.coefficient * op
        vec = random_state(rng, n)
        expected = np.vdot(vec, h @ vec).real
        assert dense_expval(vec, terms) == pytest.approx(expected,
                                                         abs=1e-12)

    def test_rejects_oversized_register(self):
        vec = np.zeros(1 << 15, dtype=complex)
        vec[0] = 1.0
        with pytest.raises(QsimError, match="14"):
            dense_expval(vec, [PauliTerm(1.0, {0: "Z"})])

    def test_rejects_qubit_out_of_range(self):
        vec = np.array([1.0, 0.0], dtype=complex)
        with pytest.raises(QsimError, match="out of range"):
            dense_expval(vec, [PauliTerm(1.0, {5: "Z"})])


class TestDenseRun:
    def test_unknown_width_raises_before_gates(self):
        with pytest.raises(QsimError):
            dense_run(Circuit(21, []))

    def test_runs_whole_circuit(self):
        circ = Circuit(2, [Gate.h(0), Gate.cnot(0, 1)])
        out = dense_run(circ)
        np.testing.assert_allclose(out, [np.sqrt(0.5), 0, 0, np.sqrt(0.5)],
                                   atol=1e-15)

    def test_dense_gate_width_guard(self):
        with pytest.raises(GateError):
            Gate.dense((0, 1, 2, 3), np.eye(16, dtype=complex))
