import numpy as np
import pytest

from qsim import Gate, GateError, GateKind
from qsim.gates import DIAGONAL_KINDS


def test_duplicate_operands_rejected():
    with pytest.raises(GateError):
        Gate.cnot(2, 2)
    with pytest.raises(GateError):
        Gate.swap(0, 0)
    with pytest.raises(GateError):
        Gate.dense((1, 1), np.eye(4))


def test_negative_operand_rejected():
    with pytest.raises(GateError):
        Gate.x(-1)


def test_rk_order_must_be_positive():
    with pytest.raises(GateError):
        Gate.rk(0, 0)
    with pytest.raises(GateError):
        Gate.crk(0, 1, -2)


def test_non_unitary_matrix_rejected():
    with pytest.raises(GateError):
        Gate.u1q(0, np.array([[1, 0], [0, 2]]))
    with pytest.raises(GateError):
        Gate.u1q(0, np.eye(3))
    with pytest.raises(GateError):
        Gate.dense((0, 1), np.ones((4, 4)))


def test_dense_width_limits():
    Gate.dense((0,), np.eye(2))
    Gate.dense((0, 1, 2), np.eye(8))
    with pytest.raises(GateError):
        Gate.dense((), np.eye(1))
    with pytest.raises(GateError):
        Gate.dense((0, 1, 2, 3), np.eye(16))


def test_control_target_accessors():
    gate = Gate.cnot(3, 1)
    assert gate.control == 3
    assert gate.target == 1
    assert Gate.h(2).target == 2


class TestPhaseConventions:
    """The low phase orders coincide with the named gates."""

    def test_rk1_is_z(self):
        np.testing.assert_allclose(Gate.rk(0, 1).diag_factors(),
                                   Gate.z(0).diag_factors(), atol=1e-15)

    def test_rk2_is_s(self):
        np.testing.assert_allclose(Gate.rk(0, 2).diag_factors(),
                                   Gate.s(0).diag_factors(), atol=1e-15)

    def test_rk3_is_t(self):
        np.testing.assert_allclose(Gate.rk(0, 3).diag_factors(),
                                   Gate.t(0).diag_factors(), atol=1e-15)

    @pytest.mark.parametrize("k", [1, 2, 3, 4, 6, 10])
    def test_rk_phase_value(self, k):
        d0, d1 = Gate.rk(0, k).diag_factors()
        assert d0 == 1.0
        assert abs(d1 - np.exp(2j * np.pi / 2 ** k)) < 1e-15

    def test_crk_matches_rk_payload(self):
        np.testing.assert_allclose(Gate.crk(0, 1, 5).diag_factors(),
                                   Gate.rk(1, 5).diag_factors(), atol=1e-15)

    def test_rz_half_angle_split(self):
        theta = 1.234
        d0, d1 = Gate.rz(0, theta).diag_factors()
        assert abs(d0 - np.exp(-0.5j * theta)) < 1e-15
        assert abs(d1 - np.exp(0.5j * theta)) < 1e-15


class TestUnitary2x2:
    @pytest.mark.parametrize("gate, expected", [
        (Gate.x(0), [[0, 1], [1, 0]]),
        (Gate.y(0), [[0, -1j], [1j, 0]]),
        (Gate.z(0), [[1, 0], [0, -1]]),
        (Gate.cnot(1, 0), [[0, 1], [1, 0]]),
    ])
    def test_values(self, gate, expected):
        np.testing.assert_allclose(gate.unitary_2x2(), expected, atol=1e-15)

    def test_h_is_unitary_and_self_inverse(self):
        h = Gate.h(0).unitary_2x2()
        np.testing.assert_allclose(h @ h, np.eye(2), atol=1e-15)

    @pytest.mark.parametrize("kind", sorted(DIAGONAL_KINDS,
                                            key=lambda k: k.value))
    def test_diagonal_kinds_have_diagonal_matrix(self, kind):
        gate = {
            GateKind.Z: Gate.z(0), GateKind.S: Gate.s(0),
            GateKind.T: Gate.t(0), GateKind.RZ: Gate.rz(0, 0.7),
            GateKind.RK: Gate.rk(0, 4), GateKind.CRK: Gate.crk(1, 0, 4),
        }[kind]
        u = gate.unitary_2x2()
        assert u[0, 1] == 0 and u[1, 0] == 0


def test_equality_covers_parameters():
    assert Gate.rz(0, 0.5) == Gate.rz(0, 0.5)
    assert Gate.rz(0, 0.5) != Gate.rz(0, 0.6)
    assert Gate.rk(0, 2) != Gate.rk(0, 3)
    m = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    assert Gate.u1q(0, m) == Gate.u1q(0, m.copy())
    assert Gate.x(0) != Gate.y(0)


def test_repr_mentions_kind_and_operands():
    text = repr(Gate.crk(2, 5, 3))
    assert "CRK" in text and "2" in text and "5" in text
