"""Distributed state vector and the per-gate communication planner.

Amplitudes are split contiguously: rank r owns global indices
``[r * 2**L, (r + 1) * 2**L)`` where ``L = n_qubits - log_ranks``.  A gate
on a local qubit (bit below L) touches only the resident slice.  A gate on
a non-local qubit pairs each rank with exactly one partner, ``rank XOR
2**(q - L)``, and is done in a single full-slice exchange followed by a
local combine.  Controlled gates need less than that, and sometimes
nothing: the planner below picks the cheapest shape from the operand
localities alone, before any data moves.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from . import kernels
from .circuit import Circuit
from .core import Local, NonLocal, Topology, locality, topology_new
from .errors import PlanError, QsimError
from .gates import DIAGONAL_KINDS, Gate, GateKind
from .transport import run_spmd

# Gathering above this many qubits means a 1+ GiB dense vector; callers
# that really want it can raise the limit explicitly.
GATHER_QUBIT_LIMIT = 26


# ---------------------------------------------------------------------------
# communication plans


@dataclass(frozen=True)
class NoComm:
    """Every rank updates its slice independently; zero messages."""


@dataclass(frozen=True)
class SelectedRanksLocal:
    """Zero messages; only ranks with ``rank_bit`` set update their slice."""

    rank_bit: int


@dataclass(frozen=True)
class PairExchange:
    """One full-slice swap with ``rank XOR distance``, then a local combine.

    When ``control_rank_bit`` is set, only ranks with that rank bit equal
    to one participate; the rest neither send nor compute.
    """

    distance: int
    control_rank_bit: Optional[int] = None


@dataclass(frozen=True)
class Decompose:
    """Gate is rewritten into simpler steps, each with its own plan."""

    steps: Tuple[Tuple[Gate, "CommPlan"], ...]


CommPlan = Union[NoComm, SelectedRanksLocal, PairExchange, Decompose]


def plan_gate(topo: Topology, gate: Gate) -> CommPlan:
    """Decide what communication ``gate`` needs under ``topo``.

    Pure function of operand localities; safe to call on any rank and
    guaranteed to return the same plan on all of them.
    """
    if gate.kind in DIAGONAL_KINDS:
        # Phase factors depend only on bit values, and non-local bits are
        # constant across a slice, so diagonals never move data.
        return NoComm()
    if gate.kind is GateKind.DENSE:
        for q in gate.qubits:
            if isinstance(locality(topo, q), NonLocal):
                raise PlanError(
                    f"dense gate qubit {q} is non-local at "
                    f"log_ranks={topo.log_ranks}; move it below "
                    f"{topo.local_qubits} with swaps first")
        return NoComm()
    if gate.kind is GateKind.SWAP:
        a, b = gate.qubits
        if isinstance(locality(topo, a), Local) and \
                isinstance(locality(topo, b), Local):
            return NoComm()
        steps = []
        for c, t in ((a, b), (b, a), (a, b)):
            g = Gate.cnot(c, t)
            steps.append((g, plan_gate(topo, g)))
        return Decompose(tuple(steps))
    if gate.kind in (GateKind.CNOT, GateKind.CU1Q):
        loc_c = locality(topo, gate.control)
        loc_t = locality(topo, gate.target)
        if isinstance(loc_t, Local):
            if isinstance(loc_c, Local):
                return NoComm()
            return SelectedRanksLocal(rank_bit=loc_c.rank_bit)
        if isinstance(loc_c, Local):
            return PairExchange(distance=1 << loc_t.rank_bit)
        return PairExchange(distance=1 << loc_t.rank_bit,
                            control_rank_bit=loc_c.rank_bit)
    # X, Y, H, U1Q
    loc_t = locality(topo, gate.target)
    if isinstance(loc_t, Local):
        return NoComm()
    return PairExchange(distance=1 << loc_t.rank_bit)


# ---------------------------------------------------------------------------
# distributed state


class DistState:
    """One rank's share of a state vector plus its transport handle."""

    def __init__(self, topology: Topology, transport):
        if transport.n_ranks != topology.n_ranks:
            raise PlanError(
                f"topology expects {topology.n_ranks} ranks but transport "
                f"has {transport.n_ranks}")
        if transport.rank != topology.rank:
            raise PlanError(
                f"topology rank {topology.rank} does not match transport "
                f"rank {transport.rank}")
        self.topology = topology
        self.transport = transport
        self.slice = np.zeros(topology.slice_len, dtype=np.complex128)
        self._scratch: Optional[np.ndarray] = None
        self.gate_seq = 0

    @property
    def scratch(self) -> np.ndarray:
        # Receive buffer; allocated on first non-local gate only.
        if self._scratch is None:
            self._scratch = np.empty(self.topology.slice_len,
                                     dtype=np.complex128)
        return self._scratch


def init_basis_state(topology: Topology, transport,
                     basis_state: int = 0) -> DistState:
    """State |basis_state> distributed across ranks."""
    if not 0 <= basis_state < (1 << topology.n_qubits):
        raise QsimError(
            f"basis state {basis_state} out of range for "
            f"{topology.n_qubits} qubits")
    state = DistState(topology, transport)
    if (basis_state >> topology.local_qubits) == topology.rank:
        state.slice[basis_state & (topology.slice_len - 1)] = 1.0
    return state


def _rank_bit(rank: int, bit: int) -> int:
    return (rank >> bit) & 1


def _apply_diagonal(state: DistState, gate: Gate) -> None:
    k = kernels.get()
    topo = state.topology
    d0, d1 = gate.diag_factors()
    if gate.kind is GateKind.CRK:
        loc_c = locality(topo, gate.control)
        loc_t = locality(topo, gate.target)
        if isinstance(loc_c, Local) and isinstance(loc_t, Local):
            k.apply_cdiag(state.slice, d1, loc_c.bit, loc_t.bit)
        elif isinstance(loc_t, Local):
            if _rank_bit(topo.rank, loc_c.rank_bit):
                k.apply_diag(state.slice, 1.0 + 0j, d1, loc_t.bit)
        elif isinstance(loc_c, Local):
            if _rank_bit(topo.rank, loc_t.rank_bit):
                k.apply_diag(state.slice, 1.0 + 0j, d1, loc_c.bit)
        else:
            if _rank_bit(topo.rank, loc_c.rank_bit) and \
                    _rank_bit(topo.rank, loc_t.rank_bit):
                k.scale_all(state.slice, d1)
        return
    loc = locality(topo, gate.target)
    if isinstance(loc, Local):
        k.apply_diag(state.slice, d0, d1, loc.bit)
    elif _rank_bit(topo.rank, loc.rank_bit):
        k.scale_all(state.slice, d1)
    elif d0 != 1.0:
        k.scale_all(state.slice, d0)


def _exchange(state: DistState, plan: PairExchange, tag: str) -> int:
    """Swap slices with the plan's partner; return this rank's side bit."""
    rank_bit = plan.distance.bit_length() - 1
    partner = state.topology.rank ^ plan.distance
    state.transport.exchange(partner, state.slice, state.scratch, tag)
    return _rank_bit(state.topology.rank, rank_bit)


def _apply_pair_gate(state: DistState, gate: Gate, plan: CommPlan,
                     tag: str) -> None:
    """X/Y/H/U1Q dispatch."""
    k = kernels.get()
    if isinstance(plan, NoComm):
        bit = locality(state.topology, gate.target).bit
        if gate.kind is GateKind.X:
            k.apply_x_pairs(state.slice, bit)
        elif gate.kind is GateKind.Y:
            k.apply_y_pairs(state.slice, bit)
        elif gate.kind is GateKind.H:
            k.apply_h_pairs(state.slice, bit)
        else:
            k.apply_1q_pairs(state.slice, gate.unitary_2x2(), bit)
        return
    side = _exchange(state, plan, tag)
    if gate.kind is GateKind.X:
        # Partner slices simply trade places; no arithmetic at all.
        k.adopt(state.slice, state.scratch)
    elif gate.kind is GateKind.Y:
        k.combine_y(state.slice, state.scratch, side)
    elif gate.kind is GateKind.H:
        k.combine_h(state.slice, state.scratch, side)
    else:
        k.combine_after_exchange(state.slice, state.scratch,
                                 gate.unitary_2x2(), side)


def _apply_controlled_pair_gate(state: DistState, gate: Gate, plan: CommPlan,
                                tag: str) -> None:
    """CNOT/CU1Q dispatch."""
    k = kernels.get()
    topo = state.topology
    is_cnot = gate.kind is GateKind.CNOT
    if isinstance(plan, NoComm):
        c_bit = locality(topo, gate.control).bit
        t_bit = locality(topo, gate.target).bit
        if is_cnot:
            k.apply_cx_pairs(state.slice, c_bit, t_bit)
        else:
            k.apply_controlled_pairs(state.slice, gate.unitary_2x2(),
                                     c_bit, t_bit)
        return
    if isinstance(plan, SelectedRanksLocal):
        if not _rank_bit(topo.rank, plan.rank_bit):
            return
        t_bit = locality(topo, gate.target).bit
        if is_cnot:
            k.apply_x_pairs(state.slice, t_bit)
        else:
            k.apply_1q_pairs(state.slice, gate.unitary_2x2(), t_bit)
        return
    assert isinstance(plan, PairExchange)
    if plan.control_rank_bit is not None:
        # Control sits in the rank index: ranks with the bit clear hold
        # only control=0 amplitudes and sit this gate out entirely.
        if not _rank_bit(topo.rank, plan.control_rank_bit):
            return
        side = _exchange(state, plan, tag)
        if is_cnot:
            k.adopt(state.slice, state.scratch)
        else:
            k.combine_after_exchange(state.slice, state.scratch,
                                     gate.unitary_2x2(), side)
        return
    # Control local, target non-local: everyone trades, but only the
    # control=1 half of each slice changes.
    c_bit = locality(topo, gate.control).bit
    side = _exchange(state, plan, tag)
    if is_cnot:
        k.adopt_masked(state.slice, state.scratch, c_bit)
    else:
        k.combine_after_exchange_masked(state.slice, state.scratch,
                                        gate.unitary_2x2(), side, c_bit)


def apply_gate(state: DistState, gate: Gate) -> None:
    """Apply one gate, moving data only where its plan demands."""
    topo = state.topology
    for q in gate.qubits:
        topo.check_qubit(q)
    plan = plan_gate(topo, gate)
    tag = f"g{state.gate_seq}:{gate.kind.name}"
    state.gate_seq += 1
    if gate.kind in DIAGONAL_KINDS:
        _apply_diagonal(state, gate)
    elif gate.kind in (GateKind.CNOT, GateKind.CU1Q):
        _apply_controlled_pair_gate(state, gate, plan, tag)
    elif gate.kind is GateKind.SWAP:
        if isinstance(plan, NoComm):
            a, b = gate.qubits
            kernels.get().swap_pairs(state.slice,
                                     locality(topo, a).bit,
                                     locality(topo, b).bit)
        else:
            assert isinstance(plan, Decompose)
            for sub_gate, _sub_plan in plan.steps:
                apply_gate(state, sub_gate)
    elif gate.kind is GateKind.DENSE:
        bits = np.array([locality(topo, q).bit for q in gate.qubits],
                        dtype=np.int64)
        kernels.get().apply_dense_local(state.slice, gate.matrix, bits)
    else:
        _apply_pair_gate(state, gate, plan, tag)


def apply_circuit(state: DistState, circuit: Circuit) -> None:
    """Apply every gate in order; errors carry the failing gate's index."""
    if circuit.n_qubits != state.topology.n_qubits:
        raise PlanError(
            f"circuit is on {circuit.n_qubits} qubits but state has "
            f"{state.topology.n_qubits}")
    for idx, gate in enumerate(circuit.gates):
        try:
            apply_gate(state, gate)
        except PlanError as exc:
            raise PlanError(f"gate {idx} ({gate.kind.name}): {exc}") from exc


def gather_full_state(state: DistState,
                      limit: int = GATHER_QUBIT_LIMIT) -> Optional[np.ndarray]:
    """Assemble the dense vector on rank 0 (None on other ranks)."""
    n = state.topology.n_qubits
    if n > limit:
        raise QsimError(
            f"refusing to gather a {n}-qubit state (limit {limit}); "
            f"pass a higher limit explicitly if you mean it")
    parts = state.transport.gather(state.slice)
    if parts is None:
        return None
    return np.concatenate(parts)


def run_circuit(circuit: Circuit, log_ranks: int = 0, basis_state: int = 0,
                with_stats: bool = False):
    """Run ``circuit`` over the simulated transport and gather the result.

    Returns the dense final vector, or ``(vector, per_rank_stats)`` when
    ``with_stats`` is set.
    """

    def program(transport):
        topo = topology_new(circuit.n_qubits, log_ranks, transport.rank)
        state = init_basis_state(topo, transport, basis_state)
        apply_circuit(state, circuit)
        return gather_full_state(state), transport.stats

    results = run_spmd(log_ranks, program)
    full = results[0][0]
    if with_stats:
        return full, [r[1] for r in results]
    return full
