"""Distributed state-vector quantum circuit simulator.

2^N amplitudes are split contiguously across 2^p ranks; every gate gets a
communication plan from its operand localities (no data motion for local
and diagonal gates, one pairwise slice exchange otherwise), and results
are checked against an independent dense reference.
"""
from .circuit import Circuit, parse_circuit, render_circuit
from .circuits import UniversalSpec, build_ghz, build_qft, build_universal
from .core import (BYTES_PER_AMPLITUDE, Local, NonLocal, Topology, locality,
                   memory_bytes_per_rank, pair_rank, topology_new)
from .engine import (CommPlan, Decompose, DistState, NoComm, PairExchange,
                     SelectedRanksLocal, apply_circuit, apply_gate,
                     gather_full_state, init_basis_state, plan_gate,
                     run_circuit)
from .errors import (CircuitParseError, GateError, MeasureError, ParseError,
                     PauliParseError, PlanError, QsimError, TopologyError,
                     TransportError)
from .gates import Gate, GateKind
from .measure import (PauliTerm, expval_pauli_sum, norm_sq, parse_pauli_sum,
                      probability, sample)
from .oracle import (DenseState, dense_apply, dense_expval, dense_run,
                     dft_reference)
from .transport import (ExternalTransport, SimulatedFabric,
                        SimulatedTransport, TransportStats, run_spmd)

__version__ = "0.1.0"

__all__ = [
    "BYTES_PER_AMPLITUDE",
    "Circuit",
    "CircuitParseError",
    "CommPlan",
    "Decompose",
    "DenseState",
    "DistState",
    "ExternalTransport",
    "Gate",
    "GateError",
    "GateKind",
    "Local",
    "MeasureError",
    "NoComm",
    "NonLocal",
    "PairExchange",
    "ParseError",
    "PauliParseError",
    "PauliTerm",
    "PlanError",
    "QsimError",
    "SelectedRanksLocal",
    "SimulatedFabric",
    "SimulatedTransport",
    "Topology",
    "TopologyError",
    "TransportError",
    "TransportStats",
    "UniversalSpec",
    "apply_circuit",
    "apply_gate",
    "build_ghz",
    "build_qft",
    "build_universal",
    "dense_apply",
    "dense_expval",
    "dense_run",
    "dft_reference",
    "expval_pauli_sum",
    "gather_full_state",
    "init_basis_state",
    "locality",
    "memory_bytes_per_rank",
    "norm_sq",
    "pair_rank",
    "parse_circuit",
    "parse_pauli_sum",
    "plan_gate",
    "probability",
    "render_circuit",
    "run_circuit",
    "run_spmd",
    "sample",
    "topology_new",
    "__version__",
]
