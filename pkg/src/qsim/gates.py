"""Gate set: enumerated kinds with parameters, validated at construction.

The phase-gate family RK(k) is diag(1, exp(i*pi/2^(k-1))), so RK(1) = Z,
RK(2) = S, RK(3) = T, and the controlled version CRK(k) applies the standard
Fourier-transform phase 2*pi/2^k on |11>.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import GateError

UNITARY_TOL = 1e-10


class GateKind(Enum):
    X = "X"
    Y = "Y"
    Z = "Z"
    H = "H"
    S = "S"
    T = "T"
    RZ = "RZ"
    RK = "RK"
    U1Q = "U1Q"
    CNOT = "CNOT"
    CRK = "CRK"
    CU1Q = "CU1Q"
    SWAP = "SWAP"
    DENSE = "DENSE"


DIAGONAL_KINDS = frozenset(
    {GateKind.Z, GateKind.S, GateKind.T, GateKind.RZ, GateKind.RK, GateKind.CRK}
)
CONTROLLED_KINDS = frozenset({GateKind.CNOT, GateKind.CRK, GateKind.CU1Q})


def _check_unitary(matrix: np.ndarray, dim: int) -> np.ndarray:
    m = np.asarray(matrix, dtype=np.complex128)
    if m.shape != (dim, dim):
        raise GateError(f"expected a {dim}x{dim} matrix, got shape {m.shape}")
    dev = np.max(np.abs(m.conj().T @ m - np.eye(dim)))
    if dev > UNITARY_TOL:
        raise GateError(f"matrix is not unitary (deviation {dev:.2e} > {UNITARY_TOL})")
    return m


@dataclass(frozen=True, eq=False)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]
    theta: float | None = None
    k: int | None = None
    matrix: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if len(set(self.qubits)) != len(self.qubits):
            raise GateError(f"{self.kind.value}: duplicate qubit operands {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise GateError(f"{self.kind.value}: negative qubit operand in {self.qubits}")

    # -- constructors -------------------------------------------------------

    @classmethod
    def x(cls, t: int) -> "Gate":
        return cls(GateKind.X, (t,))

    @classmethod
    def y(cls, t: int) -> "Gate":
        return cls(GateKind.Y, (t,))

    @classmethod
    def z(cls, t: int) -> "Gate":
        return cls(GateKind.Z, (t,))

    @classmethod
    def h(cls, t: int) -> "Gate":
        return cls(GateKind.H, (t,))

    @classmethod
    def s(cls, t: int) -> "Gate":
        return cls(GateKind.S, (t,))

    @classmethod
    def t(cls, t: int) -> "Gate":
        return cls(GateKind.T, (t,))

    @classmethod
    def rz(cls, t: int, theta: float) -> "Gate":
        return cls(GateKind.RZ, (t,), theta=float(theta))

    @classmethod
    def rk(cls, t: int, k: int) -> "Gate":
        if k < 1:
            raise GateError(f"RK: k must be >= 1, got {k}")
        return cls(GateKind.RK, (t,), k=int(k))

    @classmethod
    def u1q(cls, t: int, matrix) -> "Gate":
        return cls(GateKind.U1Q, (t,), matrix=_check_unitary(matrix, 2))

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls(GateKind.CNOT, (control, target))

    @classmethod
    def crk(cls, control: int, target: int, k: int) -> "Gate":
        if k < 1:
            raise GateError(f"CRK: k must be >= 1, got {k}")
        return cls(GateKind.CRK, (control, target), k=int(k))

    @classmethod
    def cu1q(cls, control: int, target: int, matrix) -> "Gate":
        return cls(GateKind.CU1Q, (control, target), matrix=_check_unitary(matrix, 2))

    @classmethod
    def swap(cls, a: int, b: int) -> "Gate":
        return cls(GateKind.SWAP, (a, b))

    @classmethod
    def dense(cls, targets, matrix) -> "Gate":
        targets = tuple(int(q) for q in targets)
        if not 1 <= len(targets) <= 3:
            raise GateError(f"DENSE supports 1..3 targets, got {len(targets)}")
        return cls(GateKind.DENSE, targets, matrix=_check_unitary(matrix, 1 << len(targets)))

    # -- accessors ----------------------------------------------------------

    @property
    def control(self) -> int:
        assert self.kind in CONTROLLED_KINDS
        return self.qubits[0]

    @property
    def target(self) -> int:
        if self.kind in CONTROLLED_KINDS:
            return self.qubits[1]
        return self.qubits[0]

    def unitary_2x2(self) -> np.ndarray:
        """The 2x2 payload acting on the target qubit (the controlled kinds
        return the matrix applied when the control is 1)."""
        k = self.kind
        if k in (GateKind.U1Q, GateKind.CU1Q):
            return self.matrix
        if k == GateKind.X or k == GateKind.CNOT:
            return np.array([[0, 1], [1, 0]], dtype=np.complex128)
        if k == GateKind.Y:
            return np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
        if k == GateKind.H:
            inv = 1.0 / math.sqrt(2.0)
            return np.array([[inv, inv], [inv, -inv]], dtype=np.complex128)
        d0, d1 = self.diag_factors()
        return np.array([[d0, 0], [0, d1]], dtype=np.complex128)

    def diag_factors(self) -> tuple[complex, complex]:
        """(factor for target bit 0, factor for target bit 1) of the diagonal
        kinds; for CRK the factors apply only where the control bit is 1."""
        k = self.kind
        if k == GateKind.Z:
            return 1.0, -1.0
        if k == GateKind.S:
            return 1.0, 1j
        if k == GateKind.T:
            return 1.0, complex(math.cos(math.pi / 4), math.sin(math.pi / 4))
        if k == GateKind.RZ:
            half = self.theta / 2.0
            return complex(math.cos(half), -math.sin(half)), complex(math.cos(half), math.sin(half))
        if k in (GateKind.RK, GateKind.CRK):
            ang = math.pi / (1 << (self.k - 1))
            return 1.0, complex(math.cos(ang), math.sin(ang))
        raise GateError(f"{k.value} is not diagonal")

    def __eq__(self, other):
        if not isinstance(other, Gate):
            return NotImplemented
        if (self.kind, self.qubits, self.theta, self.k) != (other.kind, other.qubits, other.theta, other.k):
            return False
        if (self.matrix is None) != (other.matrix is None):
            return False
        return self.matrix is None or np.array_equal(self.matrix, other.matrix)

    def __repr__(self):
        parts = [self.kind.value, *map(str, self.qubits)]
        if self.theta is not None:
            parts.append(repr(self.theta))
        if self.k is not None:
            parts.append(str(self.k))
        if self.matrix is not None:
            parts.append("<matrix>")
        return f"Gate({' '.join(parts)})"
