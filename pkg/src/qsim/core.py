"""Partitioning arithmetic for a state vector distributed over 2^p ranks.

Qubit q corresponds to bit q of the global amplitude index (bit 0 is the
least significant).  Rank r holds the contiguous block of global indices
[r * 2^L, (r+1) * 2^L), so the low L index bits select the offset inside a
rank's slice and the high p bits select the rank.  Qubits with q < L are
"local" (gates on them never leave the rank); qubits with q >= L map onto
rank-id bits and are "non-local".
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

from .errors import TopologyError

BYTES_PER_AMPLITUDE = 16  # two float64 components


@dataclass(frozen=True)
class Topology:
    """Partitioning of a 2^n_qubits state vector across 2^log_ranks ranks."""

    n_qubits: int
    log_ranks: int
    rank: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise TopologyError(f"need at least 1 qubit, got {self.n_qubits}")
        if self.log_ranks < 0:
            raise TopologyError(f"log_ranks must be >= 0, got {self.log_ranks}")
        if self.log_ranks > self.n_qubits - 1:
            raise TopologyError(
                f"log_ranks={self.log_ranks} leaves no local qubit for "
                f"n_qubits={self.n_qubits} (every rank must hold >= 2 amplitudes)"
            )
        if not 0 <= self.rank < (1 << self.log_ranks):
            raise TopologyError(
                f"rank {self.rank} out of range for {1 << self.log_ranks} ranks"
            )

    @property
    def local_qubits(self) -> int:
        return self.n_qubits - self.log_ranks

    @property
    def n_ranks(self) -> int:
        return 1 << self.log_ranks

    @property
    def slice_len(self) -> int:
        return 1 << self.local_qubits

    def check_qubit(self, q: int) -> None:
        if not 0 <= q < self.n_qubits:
            raise TopologyError(f"qubit {q} out of range for n_qubits={self.n_qubits}")

    def rank_bit(self, bit: int) -> int:
        """Value of rank-id bit `bit` for this rank."""
        return (self.rank >> bit) & 1


class Local(NamedTuple):
    bit: int  # offset bit inside the slice


class NonLocal(NamedTuple):
    rank_bit: int  # bit of the rank id


Locality = Union[Local, NonLocal]


def topology_new(n_qubits: int, log_ranks: int, rank: int) -> Topology:
    return Topology(n_qubits, log_ranks, rank)


def locality(topo: Topology, q: int) -> Locality:
    """Classify qubit q as Local(offset bit) or NonLocal(rank bit)."""
    topo.check_qubit(q)
    if q < topo.local_qubits:
        return Local(q)
    return NonLocal(q - topo.local_qubits)


def pair_rank(topo: Topology, target: int) -> int:
    """Exchange partner for a non-diagonal gate on non-local qubit `target`:
    the rank at XOR distance 2^(target - L)."""
    loc = locality(topo, target)
    if isinstance(loc, Local):
        raise TopologyError(f"qubit {target} is local; no exchange partner")
    return topo.rank ^ (1 << loc.rank_bit)


def memory_bytes_per_rank(n_qubits: int, log_ranks: int, include_scratch: bool = False) -> int:
    """Bytes one rank needs for its 2^(N-p) slice; doubled when the scratch
    receive buffer is counted."""
    topo = Topology(n_qubits, log_ranks, 0)
    base = topo.slice_len * BYTES_PER_AMPLITUDE
    return 2 * base if include_scratch else base
