import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsim import (Circuit, CircuitParseError, Gate, GateError, parse_circuit,
                  render_circuit)
from qsim.cli import random_circuit


class TestCircuitContainer:
    def test_len_and_equality(self):
        c1 = Circuit(2, [Gate.h(0), Gate.cnot(0, 1)])
        c2 = Circuit(2, [Gate.h(0), Gate.cnot(0, 1)])
        assert len(c1) == 2
        assert c1 == c2
        assert c1 != Circuit(2, [Gate.h(0)])
        assert c1 != Circuit(3, [Gate.h(0), Gate.cnot(0, 1)])

    def test_operand_range_checked(self):
        with pytest.raises(GateError):
            Circuit(2, [Gate.x(2)])


class TestParse:
    def test_basic(self):
        circuit = parse_circuit("qubits 2\nH 0\nCNOT 0 1\n")
        assert circuit == Circuit(2, [Gate.h(0), Gate.cnot(0, 1)])

    def test_comments_and_blanks(self):
        text = """
        # a comment
        qubits 3   # trailing comment

        X 2
        # another
        RZ 1 0.5
        """
        circuit = parse_circuit(text)
        assert circuit.n_qubits == 3
        assert circuit.gates == (Gate.x(2), Gate.rz(1, 0.5))

    def test_u1q_row_major_pairs(self):
        text = "qubits 1\nU1Q 0 0 0 1 0 1 0 0 0\n"
        gate = parse_circuit(text).gates[0]
        np.testing.assert_array_equal(gate.matrix,
                                      [[0, 1], [1, 0]])

    @pytest.mark.parametrize("text, lineno, fragment", [
        ("", 1, "missing"),
        ("H 0\n", 1, "header"),
        ("qubits 0\n", 1, ">= 1"),
        ("qubits x\n", 1, "integer"),
        ("qubits 2\nBOGUS 0\n", 2, "unknown gate"),
        ("qubits 2\nH\n", 2, "takes 1 qubit"),
        ("qubits 2\nH 0 1\n", 2, "takes 1 qubit"),
        ("qubits 2\nH 2\n", 2, "out of range"),
        ("qubits 2\nCNOT 1 1\n", 2, "duplicate"),
        ("qubits 2\nRZ 0 abc\n", 2, "number"),
        ("qubits 2\nRK 0 1.5\n", 2, "integer"),
        ("qubits 2\nRK 0 0\n", 2, ">= 1"),
        ("qubits 2\nCRK 0 1 2.7\n", 2, "integer"),
        ("qubits 1\nU1Q 0 1 0 0 0 0 0 2 0\n", 2, "unitary"),
        ("qubits 2\nH 0\nqubits 2\n", 3, "unknown gate"),
    ])
    def test_errors_carry_line_numbers(self, text, lineno, fragment):
        with pytest.raises(CircuitParseError) as err:
            parse_circuit(text)
        assert err.value.lineno == lineno
        assert fragment in str(err.value)


class TestRender:
    def test_round_trip_exact(self, rng):
        for _ in range(20):
            circuit = random_circuit(rng, int(rng.integers(1, 9)),
                                     int(rng.integers(0, 30)))
            assert parse_circuit(render_circuit(circuit)) == circuit

    def test_repr_floats_survive(self):
        theta = 0.1 + 0.2  # not representable prettily
        circuit = Circuit(1, [Gate.rz(0, theta)])
        again = parse_circuit(render_circuit(circuit))
        assert again.gates[0].theta == theta

    def test_api_only_gates_refuse_to_render(self):
        with pytest.raises(GateError):
            render_circuit(Circuit(1, [Gate.dense((0,), np.eye(2))]))
        with pytest.raises(GateError):
            render_circuit(Circuit(2, [Gate.cu1q(0, 1, np.eye(2))]))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.integers(1, 8), st.integers(0, 25))
    def test_round_trip_property(self, seed, n_qubits, n_gates):
        circuit = random_circuit(np.random.default_rng(seed), n_qubits,
                                 n_gates)
        assert parse_circuit(render_circuit(circuit)) == circuit
