"""Device-style binding for the qsim engine.

A user script opens a device over 2^p ranks, submits a tape (a list of
named gates) together with one measurement request, and gets plain
numbers back:

    handle = device_open(wires=2, ranks_log2=1)
    value = run_tape(handle, [("H", 0), ("CNOT", 0, 1)],
                     ("expval", [PauliTerm(1.0, {0: "Z", 1: "Z"})]))

Every call executes the whole tape from |0...0> in submission order and
delegates to the engine's public API; the binding itself adds no
arithmetic, so results are bit-for-bit equal to direct engine calls.
"""
from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence, Tuple, Union

from qsim import (Circuit, ExternalTransport, Gate, PauliTerm, TransportError,
                  apply_circuit, expval_pauli_sum, init_basis_state,
                  parse_pauli_sum, probability, run_spmd, sample,
                  topology_new)

__version__ = "0.1.0"

__all__ = [
    "DeviceHandle",
    "SUPPORTED_GATES",
    "TapeError",
    "device_open",
    "run_tape",
    "__version__",
]


class TapeError(ValueError):
    """A tape entry or measurement request the device cannot execute."""


# name -> (argument count, Gate constructor)
_GATE_BUILDERS = {
    "X": (1, Gate.x),
    "Y": (1, Gate.y),
    "Z": (1, Gate.z),
    "H": (1, Gate.h),
    "S": (1, Gate.s),
    "T": (1, Gate.t),
    "RZ": (2, Gate.rz),
    "RK": (2, Gate.rk),
    "U1Q": (2, Gate.u1q),
    "CNOT": (2, Gate.cnot),
    "SWAP": (2, Gate.swap),
    "CRK": (3, Gate.crk),
    "CU1Q": (3, Gate.cu1q),
}

SUPPORTED_GATES = tuple(sorted(_GATE_BUILDERS))

_MEASUREMENTS = ("expval", "probs", "sample")


@dataclass
class DeviceHandle:
    """One opened device: topology parameters plus the transport choice."""

    wires: int
    ranks_log2: int
    transport: str
    _external: Optional[ExternalTransport] = field(default=None, repr=False)


def device_open(wires: int, ranks_log2: int = 0,
                transport: str = "simulated") -> DeviceHandle:
    """Validate the topology and return a handle for run_tape.

    With the external transport the caller is one MPI rank among
    2^ranks_log2; with the simulated one, ranks are in-process threads.
    """
    # Surface bad (wires, ranks_log2) combinations now, not at run time.
    topology_new(wires, ranks_log2, rank=0)
    if transport == "simulated":
        return DeviceHandle(wires, ranks_log2, transport)
    if transport == "external":
        ext = ExternalTransport()
        if ext.n_ranks != (1 << ranks_log2):
            raise TransportError(
                f"ranks_log2={ranks_log2} expects {1 << ranks_log2} ranks "
                f"but the job was launched with {ext.n_ranks}")
        return DeviceHandle(wires, ranks_log2, transport, _external=ext)
    raise TapeError(f"unknown transport {transport!r} "
                    f"(simulated | external)")


def _build_gate(entry: Sequence[Any]) -> Gate:
    if not entry:
        raise TapeError("empty tape entry")
    name, args = entry[0], entry[1:]
    try:
        arity, builder = _GATE_BUILDERS[name]
    except (KeyError, TypeError):
        raise TapeError(
            f"unsupported gate {name!r}; supported: "
            f"{', '.join(SUPPORTED_GATES)}") from None
    if len(args) != arity:
        raise TapeError(f"{name} takes {arity} argument(s), got {len(args)}")
    return builder(*args)


def _build_measurement(measurement: Sequence[Any]) -> Tuple:
    if not measurement or measurement[0] not in _MEASUREMENTS:
        kinds = " | ".join(_MEASUREMENTS)
        raise TapeError(f"measurement must be one of: {kinds}")
    kind = measurement[0]
    if kind == "expval":
        if len(measurement) != 2:
            raise TapeError("expval takes one observable argument")
        terms = measurement[1]
        if isinstance(terms, str):
            terms = parse_pauli_sum(terms)
        return ("expval", list(terms))
    if kind == "probs":
        if len(measurement) != 2:
            raise TapeError("probs takes one qubit-subset argument")
        return ("probs", tuple(measurement[1]))
    if len(measurement) != 3:
        raise TapeError("sample takes shots and seed")
    return ("sample", int(measurement[1]), int(measurement[2]))


def run_tape(handle: DeviceHandle, gates: Sequence[Sequence[Any]],
             measurement: Sequence[Any]) -> Union[float, List[float],
                                                  Optional[List[int]]]:
    """Execute ``gates`` from |0...0> and evaluate ``measurement``.

    Returns a float for expval, a list of floats for probs, and a list
    of basis indices for sample (on rank 0; None elsewhere under MPI).
    """
    circuit = Circuit(handle.wires,
                      tuple(_build_gate(entry) for entry in gates))
    spec = _build_measurement(measurement)

    def program(transport):
        topo = topology_new(handle.wires, handle.ranks_log2, transport.rank)
        state = init_basis_state(topo, transport)
        apply_circuit(state, circuit)
        if spec[0] == "expval":
            return expval_pauli_sum(state, spec[1])
        if spec[0] == "probs":
            return probability(state, spec[1]).tolist()
        return sample(state, spec[1], spec[2])

    if handle.transport == "external":
        return program(handle._external)
    return run_spmd(handle.ranks_log2, program)[0]
