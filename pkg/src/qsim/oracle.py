"""Dense single-array reference simulator.

Ground truth for the distributed engine.  Everything here is derived
independently of the kernel code: matrix gates go through tensor reshapes
and ``tensordot``, diagonal gates through explicit index-bit masks, and the
gate matrices are written out inline.  Slow on purpose; clarity wins.
"""
from __future__ import annotations

import numpy as np

from .circuit import Circuit
from .errors import QsimError
from .gates import Gate, GateKind

DENSE_QUBIT_LIMIT = 20
EXPVAL_QUBIT_LIMIT = 14


class DenseState:
    """Full 2^N amplitude array on one rank."""

    def __init__(self, n_qubits: int, basis_state: int = 0):
        if not 1 <= n_qubits <= DENSE_QUBIT_LIMIT:
            raise QsimError(
                f"dense reference handles 1..{DENSE_QUBIT_LIMIT} qubits, "
                f"got {n_qubits}")
        if not 0 <= basis_state < (1 << n_qubits):
            raise QsimError(f"basis state {basis_state} out of range")
        self.n_qubits = n_qubits
        self.vec = np.zeros(1 << n_qubits, dtype=np.complex128)
        self.vec[basis_state] = 1.0


def _apply_matrix(vec: np.ndarray, n: int, qubits: tuple,
                  matrix: np.ndarray) -> np.ndarray:
    """Multiply ``matrix`` into the axes of ``qubits``.

    Matrix index convention: bit j of a row/column index is the value of
    ``qubits[j]``, i.e. the first listed qubit is the least significant
    bit of the matrix index.
    """
    m = len(qubits)
    psi = vec.reshape([2] * n)
    # Qubit q is bit q of the flat index, hence axis n-1-q in C order.
    # Reversed so the first listed qubit lands least significant.
    axes = [n - 1 - q for q in reversed(qubits)]
    psi = np.moveaxis(psi, axes, range(m))
    folded = psi.reshape(1 << m, -1)
    folded = matrix @ folded
    psi = folded.reshape([2] * n)
    psi = np.moveaxis(psi, range(m), axes)
    return np.ascontiguousarray(psi).reshape(-1)


def _controlled_4x4(u: np.ndarray) -> np.ndarray:
    # Index = control + 2*target (control listed first -> LSB).
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = m[2, 2] = 1.0
    for a in (0, 1):
        for b in (0, 1):
            m[1 + 2 * a, 1 + 2 * b] = u[a, b]
    return m


_SQ2 = np.sqrt(0.5)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_H = np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=np.complex128)
_SWAP = np.array([[1, 0, 0, 0],
                  [0, 0, 1, 0],
                  [0, 1, 0, 0],
                  [0, 0, 0, 1]], dtype=np.complex128)


def _diag_phase(vec: np.ndarray, qubit: int, d0: complex,
                d1: complex) -> None:
    bit = (np.arange(vec.size) >> qubit) & 1
    vec *= np.where(bit == 1, d1, d0)


def dense_apply(state: DenseState, gate: Gate) -> None:
    """Apply one gate to the full vector, in place."""
    kind = gate.kind
    v = state.vec
    n = state.n_qubits
    for q in gate.qubits:
        if not 0 <= q < n:
            raise QsimError(f"qubit {q} out of range for {n} qubits")
    if kind is GateKind.Z:
        _diag_phase(v, gate.target, 1.0, -1.0)
    elif kind is GateKind.S:
        _diag_phase(v, gate.target, 1.0, 1j)
    elif kind is GateKind.T:
        _diag_phase(v, gate.target, 1.0, np.exp(0.25j * np.pi))
    elif kind is GateKind.RZ:
        _diag_phase(v, gate.target, np.exp(-0.5j * gate.theta),
                    np.exp(0.5j * gate.theta))
    elif kind is GateKind.RK:
        _diag_phase(v, gate.target, 1.0, np.exp(2j * np.pi / (1 << gate.k)))
    elif kind is GateKind.CRK:
        idx = np.arange(v.size)
        both = (((idx >> gate.control) & 1) == 1) & \
            (((idx >> gate.target) & 1) == 1)
        v[both] *= np.exp(2j * np.pi / (1 << gate.k))
    elif kind is GateKind.X:
        state.vec = _apply_matrix(v, n, gate.qubits, _X)
    elif kind is GateKind.Y:
        state.vec = _apply_matrix(v, n, gate.qubits, _Y)
    elif kind is GateKind.H:
        state.vec = _apply_matrix(v, n, gate.qubits, _H)
    elif kind is GateKind.U1Q:
        state.vec = _apply_matrix(v, n, gate.qubits, gate.matrix)
    elif kind is GateKind.CNOT:
        state.vec = _apply_matrix(v, n, gate.qubits, _controlled_4x4(_X))
    elif kind is GateKind.CU1Q:
        state.vec = _apply_matrix(v, n, gate.qubits,
                                  _controlled_4x4(gate.matrix))
    elif kind is GateKind.SWAP:
        state.vec = _apply_matrix(v, n, gate.qubits, _SWAP)
    elif kind is GateKind.DENSE:
        state.vec = _apply_matrix(v, n, gate.qubits, gate.matrix)
    else:  # pragma: no cover
        raise QsimError(f"unhandled gate kind {kind}")


def dense_run(circuit: Circuit, basis_state: int = 0) -> np.ndarray:
    """Run a whole circuit from |basis_state> and return the final vector."""
    state = DenseState(circuit.n_qubits, basis_state)
    for gate in circuit.gates:
        dense_apply(state, gate)
    return state.vec


def dft_reference(x: int, n_qubits: int) -> np.ndarray:
    """Analytic Fourier amplitudes of |x>: a_j = 2^(-N/2) e^(2*pi*i*x*j/2^N)."""
    if not 1 <= n_qubits <= DENSE_QUBIT_LIMIT:
        raise QsimError(f"n_qubits {n_qubits} out of range")
    dim = 1 << n_qubits
    if not 0 <= x < dim:
        raise QsimError(f"basis state {x} out of range for {n_qubits} qubits")
    j = np.arange(dim)
    return np.exp(2j * np.pi * x * j / dim) / np.sqrt(dim)


def dense_expval(state, pauli_terms) -> float:
    """Exact <psi|H|psi> by applying each Pauli string to a copy.

    ``state`` is a DenseState or a bare amplitude array; ``pauli_terms``
    is a sequence of objects with ``coefficient`` and a qubit->letter
    ``factors`` map.
    """
    vec = state.vec if isinstance(state, DenseState) else np.asarray(state)
    n = vec.size.bit_length() - 1
    if (1 << n) != vec.size:
        raise QsimError("state length is not a power of two")
    if n > EXPVAL_QUBIT_LIMIT:
        raise QsimError(
            f"dense expectation limited to {EXPVAL_QUBIT_LIMIT} qubits")
    idx = np.arange(vec.size)
    total = 0.0 + 0.0j
    for term in pauli_terms:
        phi = vec.copy()
        for q, letter in term.factors.items():
            if not 0 <= q < n:
                raise QsimError(f"qubit {q} out of range for {n} qubits")
            bit = (idx >> q) & 1
            if letter == "X":
                phi = phi[idx ^ (1 << q)]
            elif letter == "Y":
                phi = np.where(bit == 1, 1j, -1j) * phi[idx ^ (1 << q)]
            elif letter == "Z":
                phi = np.where(bit == 1, -1.0, 1.0) * phi
            else:
                raise QsimError(f"unknown Pauli letter {letter!r}")
        total += term.coefficient * np.vdot(vec, phi)
    return float(total.real)
