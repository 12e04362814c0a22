"""Terminal measurements on a distributed state.

All operations are collective: every rank calls them in the same order and
every rank receives the same float values, bit for bit, because the only
cross-rank reduction is the transport's fixed-tree ``allreduce_sum``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .engine import DistState, apply_gate
from .errors import MeasureError, PauliParseError
from .gates import Gate

NORM_TOL = 1e-6
PROBABILITY_SUBSET_CAP = 20

# Rotation taking the Y axis onto the computational axis (H then S-dagger).
_Y_TO_Z = np.sqrt(0.5) * np.array([[1, -1j], [1, 1j]], dtype=np.complex128)


@dataclass(frozen=True)
class PauliTerm:
    """One weighted Pauli string: ``coefficient * prod_q factors[q]``.

    ``factors`` maps qubit index to a letter in {X, Y, Z}; qubits absent
    from the map carry the identity.  An empty map is the identity term.
    """

    coefficient: float
    factors: Dict[int, str]

    def __post_init__(self):
        clean = {}
        for q, letter in self.factors.items():
            if letter not in ("X", "Y", "Z"):
                raise MeasureError(
                    f"factor on qubit {q} must be X, Y or Z, got {letter!r}")
            if q < 0:
                raise MeasureError(f"negative qubit {q}")
            clean[int(q)] = letter
        object.__setattr__(self, "factors", clean)
        object.__setattr__(self, "coefficient", float(self.coefficient))


def parse_pauli_sum(text: str) -> List[PauliTerm]:
    """Parse observable text: one `<coeff> <letter q> ...` term per line.

    A line holding only a coefficient is an identity term.  Blank lines
    and `#` comments are skipped.
    """
    terms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            coeff = float(tokens[0])
        except ValueError:
            raise PauliParseError(
                lineno, f"expected a coefficient, got {tokens[0]!r}") from None
        rest = tokens[1:]
        if len(rest) % 2:
            raise PauliParseError(
                lineno, "factors must come in <letter> <qubit> pairs")
        factors: Dict[int, str] = {}
        for i in range(0, len(rest), 2):
            letter, qtok = rest[i], rest[i + 1]
            if letter not in ("X", "Y", "Z"):
                raise PauliParseError(
                    lineno,
                    f"unknown factor {letter!r} (identity terms are a bare "
                    f"coefficient)")
            try:
                q = int(qtok)
            except ValueError:
                raise PauliParseError(
                    lineno, f"expected a qubit index, got {qtok!r}") from None
            if q < 0:
                raise PauliParseError(lineno, f"negative qubit {q}")
            if q in factors:
                raise PauliParseError(lineno, f"duplicate qubit {q}")
            factors[q] = letter
        terms.append(PauliTerm(coeff, factors))
    return terms


def _allreduce_scalar(state: DistState, value: float) -> float:
    out = state.transport.allreduce_sum(np.array([value], dtype=np.float64))
    return float(out[0])


def norm_sq(state: DistState) -> float:
    """All-reduced squared norm; identical value on every rank."""
    local = float(np.real(np.vdot(state.slice, state.slice)))
    return _allreduce_scalar(state, local)


def _check_normalized(state: DistState) -> float:
    n2 = norm_sq(state)
    if abs(n2 - 1.0) > NORM_TOL:
        raise MeasureError(f"state is not normalized: norm^2 = {n2!r}")
    return n2


def _check_subset(state: DistState, qubit_subset: Sequence[int]) -> None:
    n = state.topology.n_qubits
    if len(qubit_subset) > PROBABILITY_SUBSET_CAP:
        raise MeasureError(
            f"subset of {len(qubit_subset)} qubits exceeds the "
            f"{PROBABILITY_SUBSET_CAP}-qubit table cap")
    if len(set(qubit_subset)) != len(qubit_subset):
        raise MeasureError(f"subset {qubit_subset!r} has duplicates")
    for q in qubit_subset:
        if not 0 <= q < n:
            raise MeasureError(f"qubit {q} out of range for {n} qubits")


def probability(state: DistState,
                qubit_subset: Sequence[int]) -> np.ndarray:
    """Marginal distribution over ``qubit_subset``.

    Entry ``b`` sums |amplitude|^2 over global indices whose subset bits
    read ``b``, with bit ``j`` of ``b`` taken from ``qubit_subset[j]``.
    """
    _check_subset(state, qubit_subset)
    topo = state.topology
    size = topo.slice_len
    # Non-local subset qubits are constant over this slice; they only
    # shift which table entries the local mass lands in.
    keys = np.zeros(size, dtype=np.int64)
    offsets = np.arange(size, dtype=np.int64)
    const = 0
    for j, q in enumerate(qubit_subset):
        if q < topo.local_qubits:
            keys |= ((offsets >> q) & 1) << j
        elif (topo.rank >> (q - topo.local_qubits)) & 1:
            const |= 1 << j
    weights = np.abs(state.slice) ** 2
    table = np.bincount(keys | const, weights=weights,
                        minlength=1 << len(qubit_subset))
    return state.transport.allreduce_sum(table)


def _parity_expval(state: DistState, support: Sequence[int]) -> float:
    """<psi| prod_{q in support} Z_q |psi> via signed local sums."""
    topo = state.topology
    par = np.zeros(topo.slice_len, dtype=np.int64)
    offsets = np.arange(topo.slice_len, dtype=np.int64)
    sign = 1.0
    for q in support:
        if q < topo.local_qubits:
            par ^= (offsets >> q) & 1
        elif (topo.rank >> (q - topo.local_qubits)) & 1:
            sign = -sign
    weights = np.abs(state.slice) ** 2
    local = sign * float(np.sum((1.0 - 2.0 * par) * weights))
    return _allreduce_scalar(state, local)


def _copy_state(state: DistState) -> DistState:
    dup = DistState(state.topology, state.transport)
    np.copyto(dup.slice, state.slice)
    return dup


def expval_pauli_sum(state: DistState,
                     terms: Sequence[PauliTerm]) -> float:
    """Expectation of a weighted Pauli sum on a normalized state.

    Each term rotates a scratch copy into the computational basis (H for
    X factors, the Y-to-Z rotation for Y factors) and then reads off a
    signed parity sum, so only diagonal bookkeeping runs per amplitude.
    """
    n2 = _check_normalized(state)
    n = state.topology.n_qubits
    total = 0.0
    for term in terms:
        if not term.factors:
            total += term.coefficient * n2
            continue
        for q in term.factors:
            if q >= n:
                raise MeasureError(
                    f"qubit {q} out of range for {n} qubits")
        scratch = _copy_state(state)
        for q, letter in term.factors.items():
            if letter == "X":
                apply_gate(scratch, Gate.h(q))
            elif letter == "Y":
                apply_gate(scratch, Gate.u1q(q, _Y_TO_Z))
        support = sorted(term.factors)
        total += term.coefficient * _parity_expval(scratch, support)
    return total


def sample(state: DistState, shots: int,
           seed: int) -> Optional[List[int]]:
    """Draw basis-state indices by two-level inverse CDF.

    Every rank derives the same per-shot uniforms from ``seed``, so rank
    selection needs no extra messages; the owning rank then inverts its
    local cumulative distribution.  Results land on rank 0 (None
    elsewhere).  Fixed seed and fixed rank count reproduce exactly.
    """
    if shots < 1:
        raise MeasureError(f"shots must be >= 1, got {shots}")
    _check_normalized(state)
    topo = state.topology
    uni = np.random.default_rng(seed).random((shots, 2))

    local_mass = float(np.sum(np.abs(state.slice) ** 2))
    one_hot = np.zeros(topo.n_ranks, dtype=np.float64)
    one_hot[topo.rank] = local_mass
    rank_prefix = np.cumsum(state.transport.allreduce_sum(one_hot))

    owners = np.searchsorted(rank_prefix, uni[:, 0] * rank_prefix[-1],
                             side="right")
    owners = np.minimum(owners, topo.n_ranks - 1)
    mine = np.nonzero(owners == topo.rank)[0]

    local_cdf = np.cumsum(np.abs(state.slice) ** 2)
    picks = np.searchsorted(local_cdf, uni[mine, 1] * local_cdf[-1],
                            side="right")
    picks = np.minimum(picks, topo.slice_len - 1)
    values = (topo.rank << topo.local_qubits) | picks

    pairs = np.column_stack([mine, values]).astype(np.int64)
    parts = state.transport.gather(pairs)
    if parts is None:
        return None
    out = np.empty(shots, dtype=np.int64)
    for part in parts:
        if len(part):
            out[part[:, 0]] = part[:, 1]
    return out.tolist()
