"""Builders for the standard benchmark circuits: QFT, a dense
rotation/CNOT circuit with a fixed 2N^2 gate budget, and GHZ."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .circuit import Circuit
from .errors import GateError
from .gates import Gate


def build_qft(n_qubits: int, with_swaps: bool = False) -> Circuit:
    """Quantum Fourier transform as Hadamards plus controlled phases.

    Without the terminal swap layer the output is in bit-reversed order;
    with it, amplitudes match the analytic transform directly.
    """
    if n_qubits < 1:
        raise GateError(f"need at least 1 qubit, got {n_qubits}")
    gates = []
    for i in range(n_qubits - 1, -1, -1):
        gates.append(Gate.h(i))
        for k in range(2, i + 2):
            gates.append(Gate.crk(i - k + 1, i, k))
    if with_swaps:
        for j in range(n_qubits // 2):
            gates.append(Gate.swap(j, n_qubits - 1 - j))
    return Circuit(n_qubits, tuple(gates))


@dataclass(frozen=True)
class UniversalSpec:
    """Layout parameters for :func:`build_universal`.

    ``k_schedule`` maps a rotation slot index (layer * N + qubit) to the
    phase-gate order k; the default cycles 1..N so the circuit is not a
    trivial repetition of a single phase.
    """

    n_qubits: int
    k_schedule: Optional[Callable[[int], int]] = None

    def k_for_slot(self, slot: int) -> int:
        if self.k_schedule is not None:
            return self.k_schedule(slot)
        return 1 + slot % self.n_qubits


def build_universal(spec: UniversalSpec) -> Circuit:
    """N+1 rotation layers interleaved with N nearest-neighbor CNOT chains.

    Gate budget is exact: N(N+1) phase rotations plus N(N-1) CNOTs,
    2N^2 gates in total.
    """
    n = spec.n_qubits
    if n < 2:
        raise GateError(f"need at least 2 qubits, got {n}")
    gates = []
    for layer in range(n + 1):
        for q in range(n):
            gates.append(Gate.rk(q, spec.k_for_slot(layer * n + q)))
        if layer < n:
            for q in range(n - 1):
                gates.append(Gate.cnot(q, q + 1))
    return Circuit(n, tuple(gates))


def build_ghz(n_qubits: int) -> Circuit:
    """H then a CNOT ladder: (|0...0> + |1...1>)/sqrt(2)."""
    if n_qubits < 2:
        raise GateError(f"need at least 2 qubits, got {n_qubits}")
    gates = [Gate.h(0)]
    for q in range(n_qubits - 1):
        gates.append(Gate.cnot(q, q + 1))
    return Circuit(n_qubits, tuple(gates))
