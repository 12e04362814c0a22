"""Circuit container plus the line-oriented text format.

Format: the first non-comment line is ``qubits <N>``; every following line is
one gate, ``#`` starts a comment.  Gate lines::

    X t | Y t | Z t | H t | S t | T t
    RZ t theta
    RK t k
    CNOT c t
    CRK c t k
    SWAP a b
    U1Q t re00 im00 re01 im01 re10 im10 re11 im11

CU1Q and DENSE gates exist only in the API; they have no text form.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CircuitParseError, GateError
from .gates import Gate, GateKind


@dataclass(eq=False)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        self.gates = tuple(self.gates)
        for g in self.gates:
            for q in g.qubits:
                if q >= self.n_qubits:
                    raise GateError(
                        f"{g.kind.value}: qubit {q} out of range for n_qubits={self.n_qubits}"
                    )

    def __len__(self):
        return len(self.gates)

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self.gates == other.gates


# name -> (number of qubit operands, number of trailing numeric parameters)
_TEXT_GATES: dict[str, tuple[int, int]] = {
    "X": (1, 0),
    "Y": (1, 0),
    "Z": (1, 0),
    "H": (1, 0),
    "S": (1, 0),
    "T": (1, 0),
    "RZ": (1, 1),
    "RK": (1, 1),
    "CNOT": (2, 0),
    "CRK": (2, 1),
    "SWAP": (2, 0),
    "U1Q": (1, 8),
}


def _parse_int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise CircuitParseError(lineno, f"{what}: expected an integer, got {token!r}") from None


def _parse_float(token: str, lineno: int, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise CircuitParseError(lineno, f"{what}: expected a number, got {token!r}") from None


def _build_gate(name: str, qubits: list[int], params: list[float], lineno: int) -> Gate:
    try:
        if name == "RZ":
            return Gate.rz(qubits[0], params[0])
        if name == "RK":
            if params[0] != int(params[0]):
                raise CircuitParseError(lineno, f"RK: k must be an integer, got {params[0]!r}")
            return Gate.rk(qubits[0], int(params[0]))
        if name == "CNOT":
            return Gate.cnot(qubits[0], qubits[1])
        if name == "CRK":
            if params[0] != int(params[0]):
                raise CircuitParseError(lineno, f"CRK: k must be an integer, got {params[0]!r}")
            return Gate.crk(qubits[0], qubits[1], int(params[0]))
        if name == "SWAP":
            return Gate.swap(qubits[0], qubits[1])
        if name == "U1Q":
            m = np.array(
                [
                    [complex(params[0], params[1]), complex(params[2], params[3])],
                    [complex(params[4], params[5]), complex(params[6], params[7])],
                ]
            )
            return Gate.u1q(qubits[0], m)
        return Gate(GateKind(name), tuple(qubits))
    except GateError as exc:
        raise CircuitParseError(lineno, str(exc)) from None


def parse_circuit(text: str) -> Circuit:
    """Parse the text format; all errors carry the offending line number."""
    n_qubits = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if n_qubits is None:
            if tokens[0] != "qubits" or len(tokens) != 2:
                raise CircuitParseError(lineno, f"expected 'qubits <N>' header, got {line!r}")
            n_qubits = _parse_int(tokens[1], lineno, "qubit count")
            if n_qubits < 1:
                raise CircuitParseError(lineno, f"qubit count must be >= 1, got {n_qubits}")
            continue
        name = tokens[0]
        if name not in _TEXT_GATES:
            raise CircuitParseError(lineno, f"unknown gate {name!r}")
        n_q, n_p = _TEXT_GATES[name]
        if len(tokens) != 1 + n_q + n_p:
            raise CircuitParseError(
                lineno, f"{name} takes {n_q} qubit(s) and {n_p} parameter(s), got {len(tokens) - 1} token(s)"
            )
        qubits = [_parse_int(t, lineno, f"{name} operand") for t in tokens[1 : 1 + n_q]]
        for q in qubits:
            if not 0 <= q < n_qubits:
                raise CircuitParseError(lineno, f"{name}: qubit {q} out of range for qubits {n_qubits}")
        params = [_parse_float(t, lineno, f"{name} parameter") for t in tokens[1 + n_q :]]
        gates.append(_build_gate(name, qubits, params, lineno))
    if n_qubits is None:
        raise CircuitParseError(1, "empty circuit: missing 'qubits <N>' header")
    return Circuit(n_qubits, gates)


def render_circuit(circuit: Circuit) -> str:
    """Inverse of :func:`parse_circuit` for the textual gate kinds.

    Floats are written with repr so parse(render(c)) == c exactly.
    """
    lines = [f"qubits {circuit.n_qubits}"]
    for g in circuit.gates:
        name = g.kind.value
        if g.kind == GateKind.RZ:
            # Builtin-float repr: numpy scalar reprs do not parse back.
            lines.append(f"{name} {g.qubits[0]} {float(g.theta)!r}")
        elif g.kind == GateKind.RK:
            lines.append(f"{name} {g.qubits[0]} {g.k}")
        elif g.kind == GateKind.CRK:
            lines.append(f"{name} {g.qubits[0]} {g.qubits[1]} {g.k}")
        elif g.kind == GateKind.U1Q:
            vals = " ".join(repr(float(v))
                            for e in g.matrix.ravel()
                            for v in (e.real, e.imag))
            lines.append(f"{name} {g.qubits[0]} {vals}")
        elif g.kind in (GateKind.CU1Q, GateKind.DENSE):
            raise GateError(f"{name} has no text representation")
        else:
            lines.append(f"{name} {' '.join(map(str, g.qubits))}")
    return "\n".join(lines) + "\n"
