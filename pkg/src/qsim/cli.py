"""Command line front end.

Subcommands: ``run`` executes a circuit file and prints measurements,
``bench`` sweeps a single gate over target positions and reports wall
time plus exchange counts, ``verify`` cross-checks the engine against the
dense reference on random circuits, and ``qft``/``universal``/``ghz``
emit builder circuits in the text format.

Exit codes: 0 success, 1 generic failure or verify mismatch, 2 parse or
input error, 3 planning error, 4 transport error.
"""
from __future__ import annotations

import argparse
import os
import statistics
import sys
import time
from typing import List, Optional, Tuple

import numpy as np

from . import kernels
from .circuit import Circuit, parse_circuit, render_circuit
from .circuits import UniversalSpec, build_ghz, build_qft, build_universal
from .core import topology_new
from .engine import (apply_circuit, apply_gate, gather_full_state,
                     init_basis_state)
from .errors import ParseError, PlanError, QsimError, TransportError
from .gates import Gate, GateKind
from .measure import expval_pauli_sum, parse_pauli_sum, probability, sample
from .oracle import DenseState, dense_run
from .transport import ExternalTransport, run_spmd

_X_MATRIX = np.array([[0, 1], [1, 0]], dtype=np.complex128)

BENCH_GATES = ("X", "CNOT", "Z", "H", "CRK", "U1Q-general")


# ---------------------------------------------------------------------------
# shared plumbing


def _resolve_transport(args) -> str:
    name = getattr(args, "transport", None) \
        or os.environ.get("QSIM_TRANSPORT") or "simulated"
    if name not in ("simulated", "external"):
        raise TransportError(
            f"unknown transport {name!r} (choose simulated or external)")
    return name


def _emit(args, lines: List[str]) -> None:
    text = "\n".join(lines) + "\n" if lines else ""
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _spmd(args, program):
    """Run ``program(transport, log_ranks)`` on the chosen backend.

    Returns rank 0's result.  With the external backend the CLI process
    is one rank among many and only rank 0's result is non-None.
    """
    if _resolve_transport(args) == "external":
        transport = ExternalTransport()
        log_ranks = transport.n_ranks.bit_length() - 1
        wanted = getattr(args, "ranks_log2", None)
        if wanted is not None and wanted != log_ranks:
            raise TransportError(
                f"--ranks-log2 {wanted} does not match the launched "
                f"{transport.n_ranks} ranks")
        return program(transport, log_ranks)
    log_ranks = getattr(args, "ranks_log2", None) or 0
    results = run_spmd(log_ranks, lambda tr: program(tr, log_ranks))
    return results[0]


def _fmt(value: float) -> str:
    return repr(float(value))


# ---------------------------------------------------------------------------
# run


def _parse_output_spec(spec: str) -> Tuple:
    head, _, rest = spec.partition(":")
    if head == "state":
        if rest:
            raise ValueError(f"state output takes no argument: {spec!r}")
        return ("state",)
    if head == "probs":
        try:
            subset = tuple(int(tok) for tok in rest.split(",") if tok != "")
        except ValueError:
            raise ValueError(f"bad qubit list in {spec!r}") from None
        if not subset:
            raise ValueError(f"probs needs qubits, e.g. probs:0,1: {spec!r}")
        return ("probs", subset)
    if head == "expval":
        if not rest:
            raise ValueError(f"expval needs an observable file: {spec!r}")
        return ("expval", rest)
    if head == "samples":
        parts = rest.split(",")
        if len(parts) != 2:
            raise ValueError(
                f"samples needs shots,seed, e.g. samples:1000,7: {spec!r}")
        try:
            return ("samples", int(parts[0]), int(parts[1]))
        except ValueError:
            raise ValueError(f"bad shots/seed in {spec!r}") from None
    raise ValueError(f"unknown output {spec!r} "
                     f"(state | probs:<qubits> | expval:<file> | "
                     f"samples:<shots>,<seed>)")


def _bit_string(value: int, width: int) -> str:
    return "".join(str((value >> j) & 1) for j in range(width))


def cmd_run(args) -> int:
    try:
        circuit_text = open(args.circuit).read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    circuit = parse_circuit(circuit_text)
    try:
        outputs = [_parse_output_spec(s) for s in (args.output or ["state"])]
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    resolved = []
    for spec in outputs:
        if spec[0] == "expval":
            try:
                observable_text = open(spec[1]).read()
            except OSError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 2
            resolved.append(("expval", parse_pauli_sum(observable_text)))
        else:
            resolved.append(spec)

    def program(transport, log_ranks):
        topo = topology_new(circuit.n_qubits, log_ranks, transport.rank)
        state = init_basis_state(topo, transport)
        apply_circuit(state, circuit)
        lines: Optional[List[str]] = [] if transport.rank == 0 else None
        for spec in resolved:
            if spec[0] == "state":
                full = gather_full_state(state)
                if lines is not None:
                    for i, amp in enumerate(full):
                        lines.append(f"state,{i},{_fmt(amp.real)},"
                                     f"{_fmt(amp.imag)}")
            elif spec[0] == "probs":
                table = probability(state, spec[1])
                if lines is not None:
                    for b, val in enumerate(table):
                        lines.append(f"prob,{_bit_string(b, len(spec[1]))},"
                                     f"{_fmt(val)}")
            elif spec[0] == "expval":
                value = expval_pauli_sum(state, spec[1])
                if lines is not None:
                    lines.append(f"expval,{_fmt(value)}")
            else:
                drawn = sample(state, spec[1], spec[2])
                if lines is not None:
                    for shot, value in enumerate(drawn):
                        lines.append(f"sample,{shot},{value}")
        return lines

    lines = _spmd(args, program)
    if lines is not None:
        _emit(args, lines)
    return 0


# ---------------------------------------------------------------------------
# bench


def _bench_gate_for(name: str, q_t: int, q_c: Optional[int]) -> Gate:
    if name == "X":
        return Gate.x(q_t)
    if name == "Z":
        return Gate.z(q_t)
    if name == "H":
        return Gate.h(q_t)
    if name == "U1Q-general":
        # Same matrix as X but routed through the generic 2x2 path; the
        # dedicated-vs-general comparison hinges on this row.
        return Gate.u1q(q_t, _X_MATRIX)
    if name == "CNOT":
        return Gate.cnot(q_c, q_t)
    if name == "CRK":
        return Gate.crk(q_c, q_t, 2)
    raise QsimError(f"unknown bench gate {name!r}")


def bench_gate(args, gate: Gate, n_qubits: int,
               reps: int) -> Optional[Tuple[float, int, int]]:
    """Time one gate; returns (median seconds, exchanges, bytes) per apply.

    One warm-up application is discarded.  Exchange and byte counts are
    the worst over ranks, so a gate that moves data on any rank reports
    it even when rank 0 idles.
    """

    def program(transport, log_ranks):
        topo = topology_new(n_qubits, log_ranks, transport.rank)
        state = init_basis_state(topo, transport)
        ex0 = transport.stats.exchanges
        by0 = transport.stats.bytes_sent
        times = []
        for _ in range(reps + 1):
            transport.barrier()
            t0 = time.perf_counter()
            apply_gate(state, gate)
            transport.barrier()
            times.append(time.perf_counter() - t0)
        n_applies = reps + 1
        mine = np.array([statistics.median(times[1:]),
                         (transport.stats.exchanges - ex0) / n_applies,
                         (transport.stats.bytes_sent - by0) / n_applies])
        parts = transport.gather(mine)
        if parts is None:
            return None
        worst = np.max(np.stack(parts), axis=0)
        return float(worst[0]), int(worst[1]), int(worst[2])

    return _spmd(args, program)


def cmd_bench(args) -> int:
    n = args.n
    log_ranks = args.ranks_log2 or 0
    if n - log_ranks < 1:
        raise PlanError(f"need n - ranks_log2 >= 1, got {n} - {log_ranks}")
    if args.kernels:
        kernels.use(args.kernels)
    two_qubit = args.gate in ("CNOT", "CRK")
    lines = ["gate,N,p,q_T,q_C,wall_seconds,exchanges,bytes"]
    for q_t in range(n):
        if two_qubit:
            controls = [c for c in range(n) if c != q_t] \
                if args.sweep_control else [args.control]
        else:
            controls = [None]
        for q_c in controls:
            if q_c == q_t:
                continue
            gate = _bench_gate_for(args.gate, q_t, q_c)
            cell = bench_gate(args, gate, n, args.reps)
            if cell is None:
                continue
            wall, exchanges, nbytes = cell
            q_c_text = "" if q_c is None else str(q_c)
            lines.append(f"{args.gate},{n},{log_ranks},{q_t},{q_c_text},"
                         f"{wall:.6e},{exchanges},{nbytes}")
    if lines and (len(lines) > 1 or _resolve_transport(args) == "simulated"):
        _emit(args, lines)
    return 0


# ---------------------------------------------------------------------------
# verify


_TEXT_KINDS = (GateKind.X, GateKind.Y, GateKind.Z, GateKind.H, GateKind.S,
               GateKind.T, GateKind.RZ, GateKind.RK, GateKind.CNOT,
               GateKind.CRK, GateKind.SWAP, GateKind.U1Q)
_API_ONLY_KINDS = (GateKind.CU1Q, GateKind.DENSE)


def _random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(raw)
    # Fix the QR phase ambiguity so the draw is well spread.
    return q * (np.diag(r) / np.abs(np.diag(r)))


_TWO_QUBIT_KINDS = (GateKind.CNOT, GateKind.CRK, GateKind.CU1Q,
                    GateKind.SWAP)


def random_gate(rng: np.random.Generator, n_qubits: int,
                kinds: Tuple[GateKind, ...],
                dense_limit: Optional[int] = None) -> Gate:
    if n_qubits < 2:
        kinds = tuple(k for k in kinds if k not in _TWO_QUBIT_KINDS)
    kind = kinds[rng.integers(len(kinds))]
    q = int(rng.integers(n_qubits))
    if kind in (GateKind.CNOT, GateKind.CRK, GateKind.CU1Q, GateKind.SWAP):
        other = int(rng.integers(n_qubits - 1))
        other += other >= q
    if kind is GateKind.X:
        return Gate.x(q)
    if kind is GateKind.Y:
        return Gate.y(q)
    if kind is GateKind.Z:
        return Gate.z(q)
    if kind is GateKind.H:
        return Gate.h(q)
    if kind is GateKind.S:
        return Gate.s(q)
    if kind is GateKind.T:
        return Gate.t(q)
    if kind is GateKind.RZ:
        return Gate.rz(q, float(rng.uniform(0, 2 * np.pi)))
    if kind is GateKind.RK:
        return Gate.rk(q, int(rng.integers(1, 7)))
    if kind is GateKind.U1Q:
        return Gate.u1q(q, _random_unitary(rng, 2))
    if kind is GateKind.CNOT:
        return Gate.cnot(other, q)
    if kind is GateKind.CRK:
        return Gate.crk(other, q, int(rng.integers(1, 7)))
    if kind is GateKind.SWAP:
        return Gate.swap(other, q)
    if kind is GateKind.CU1Q:
        return Gate.cu1q(other, q, _random_unitary(rng, 2))
    # DENSE operands must stay below the local-qubit line.
    limit = n_qubits if dense_limit is None else dense_limit
    width = int(rng.integers(1, min(3, limit) + 1))
    targets = tuple(int(t) for t in
                    rng.choice(limit, size=width, replace=False))
    return Gate.dense(targets, _random_unitary(rng, 1 << width))


def random_circuit(rng: np.random.Generator, n_qubits: int, n_gates: int,
                   text_only: bool = True,
                   dense_limit: Optional[int] = None) -> Circuit:
    """Random circuit over the text-format gate set (or the full set)."""
    kinds = _TEXT_KINDS if text_only else _TEXT_KINDS + _API_ONLY_KINDS
    gates = tuple(random_gate(rng, n_qubits, kinds, dense_limit)
                  for _ in range(n_gates))
    return Circuit(n_qubits, gates)


def _engine_vector(circuit: Circuit, log_ranks: int) -> np.ndarray:
    def program(transport):
        topo = topology_new(circuit.n_qubits, log_ranks, transport.rank)
        state = init_basis_state(topo, transport)
        apply_circuit(state, circuit)
        return gather_full_state(state)

    vec = run_spmd(log_ranks, program)[0]
    if os.environ.get("QSIM_VERIFY_INJECT") == "sign":
        # Test hook: fake an engine defect to exercise the failure path.
        vec = -vec
    return vec


def _deviation(circuit: Circuit, log_ranks: int) -> float:
    return float(np.max(np.abs(_engine_vector(circuit, log_ranks)
                               - dense_run(circuit))))


def _minimize_failure(circuit: Circuit, log_ranks: int,
                      tol: float) -> Circuit:
    """Shrink a failing circuit: shortest failing prefix, then drop gates."""
    gates = list(circuit.gates)
    lo, hi = 0, len(gates)
    while lo < hi:
        mid = (lo + hi) // 2
        if _deviation(Circuit(circuit.n_qubits, tuple(gates[:mid])),
                      log_ranks) > tol:
            hi = mid
        else:
            lo = mid + 1
    gates = gates[:lo]
    i = 0
    while i < len(gates):
        trial = gates[:i] + gates[i + 1:]
        if _deviation(Circuit(circuit.n_qubits, tuple(trial)),
                      log_ranks) > tol:
            gates = trial
        else:
            i += 1
    return Circuit(circuit.n_qubits, tuple(gates))


def cmd_verify(args) -> int:
    tol = 1e-12
    if args.max_n > 14:
        print("error: --max-n is capped at 14", file=sys.stderr)
        return 2
    rng = np.random.default_rng(args.seed)
    lines = []
    worst = 0.0
    failure = None
    for idx in range(args.circuits):
        n = int(rng.integers(2, args.max_n + 1))
        n_gates = int(rng.integers(1, 41))
        log_ranks = int(rng.integers(0, min(args.max_p, n - 1) + 1))
        circuit = random_circuit(rng, n, n_gates)
        dev = _deviation(circuit, log_ranks)
        worst = max(worst, dev)
        lines.append(f"verify,{idx},N={n},p={log_ranks},gates={n_gates},"
                     f"max_dev={dev:.6e}")
        if dev > tol and failure is None:
            failure = (circuit, log_ranks)
    if failure is None:
        lines.append(f"result,PASS,circuits={args.circuits},"
                     f"max_dev={worst:.6e}")
        _emit(args, lines)
        return 0
    minimized = _minimize_failure(failure[0], failure[1], tol)
    lines.append(f"result,FAIL,circuits={args.circuits},"
                 f"max_dev={worst:.6e}")
    lines.append(f"repro,seed={args.seed},p={failure[1]}")
    lines.extend("repro," + line
                 for line in render_circuit(minimized).splitlines())
    _emit(args, lines)
    return 1


# ---------------------------------------------------------------------------
# circuit emitters


def cmd_qft(args) -> int:
    _emit(args, render_circuit(
        build_qft(args.n, with_swaps=args.with_swaps)).splitlines())
    return 0


def cmd_universal(args) -> int:
    _emit(args, render_circuit(
        build_universal(UniversalSpec(args.n))).splitlines())
    return 0


def cmd_ghz(args) -> int:
    _emit(args, render_circuit(build_ghz(args.n)).splitlines())
    return 0


# ---------------------------------------------------------------------------
# wiring


def _add_common(sub, transport=True):
    sub.add_argument("--out", help="write output here instead of stdout")
    if transport:
        sub.add_argument("--transport", choices=("simulated", "external"),
                         help="rank backend (default: QSIM_TRANSPORT or "
                              "simulated)")
        sub.add_argument("--ranks-log2", type=int, default=None, metavar="P",
                         help="run with 2^P ranks (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsim",
        description="Distributed state-vector circuit simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a circuit file")
    p_run.add_argument("circuit", help="circuit text file")
    p_run.add_argument("--output", action="append", metavar="SPEC",
                       help="state | probs:<q,..> | expval:<file> | "
                            "samples:<shots>,<seed> (repeatable; "
                            "default state)")
    _add_common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_bench = sub.add_parser("bench", help="sweep one gate over targets")
    p_bench.add_argument("--gate", required=True, choices=BENCH_GATES)
    p_bench.add_argument("--n", required=True, type=int,
                         help="qubit count")
    p_bench.add_argument("--reps", type=int, default=5,
                         help="timed repetitions (default 5; one extra "
                              "warm-up run is discarded)")
    p_bench.add_argument("--control", type=int, default=0,
                         help="fixed control for CNOT/CRK sweeps")
    p_bench.add_argument("--sweep-control", action="store_true",
                         help="sweep the control over all positions too")
    p_bench.add_argument("--kernels", choices=("numba", "numpy"),
                         help="force a kernel backend for this run")
    _add_common(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    p_verify = sub.add_parser(
        "verify", help="cross-check the engine against the dense reference")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--circuits", type=int, default=20,
                          help="random circuits to check (default 20)")
    p_verify.add_argument("--max-n", type=int, default=10,
                          help="largest qubit count (default 10, cap 14)")
    p_verify.add_argument("--max-p", type=int, default=3,
                          help="largest log2 rank count (default 3)")
    _add_common(p_verify, transport=False)
    p_verify.set_defaults(func=cmd_verify)

    for name, fn in (("qft", cmd_qft), ("universal", cmd_universal),
                     ("ghz", cmd_ghz)):
        p_emit = sub.add_parser(name, help=f"emit the {name} circuit")
        p_emit.add_argument("--n", required=True, type=int)
        if name == "qft":
            p_emit.add_argument("--with-swaps", action="store_true",
                                help="append the bit-reversal swap layer")
        _add_common(p_emit, transport=False)
        p_emit.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PlanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except TransportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except QsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
