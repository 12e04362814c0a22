"""Rank-to-rank communication backends.

Two implementations of the same per-rank handle:

* ``SimulatedTransport`` runs every rank as a thread inside one process and
  moves data through an in-memory rendezvous.  It exists so the full
  multi-rank protocol can be exercised, counted, and asserted on in tests
  without launching processes.
* ``ExternalTransport`` binds the same calls to mpi4py for real deployments.

Both count traffic in a ``TransportStats`` so callers can assert how many
pair exchanges a program performed and how large they were.

The only collective is an all-reduce sum.  It is built from the same pair
exchange via recursive doubling, so every rank applies the identical
balanced reduction tree and ends up with bit-identical floats.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import TransportError

# Safety net for protocol bugs; normal rendezvous never waits this long.
_RENDEZVOUS_TIMEOUT = 300.0


@dataclass
class TransportStats:
    """Traffic counters for one rank.

    ``exchanges``/``bytes_sent`` cover gate-level pair exchanges only;
    collective traffic is tallied separately under ``allreduces``.
    """

    exchanges: int = 0
    bytes_sent: int = 0
    allreduces: int = 0
    per_gate: dict = field(default_factory=dict)
    events: list = field(default_factory=list)

    def record_exchange(self, tag: str, partner: int, nbytes: int) -> None:
        self.exchanges += 1
        self.bytes_sent += nbytes
        self.per_gate[tag] = self.per_gate.get(tag, 0) + 1
        self.events.append((tag, partner, nbytes))


class SimulatedFabric:
    """Shared state connecting the rank threads of one simulated job."""

    def __init__(self, n_ranks: int):
        self.n_ranks = n_ranks
        self.barrier = threading.Barrier(n_ranks)
        self.cond = threading.Condition()
        self.posts: dict = {}   # (src, dst) -> (tag, ndarray) awaiting pickup
        self.done: set = set()  # (src, dst) posts already copied by dst
        self.slots: list = [None] * n_ranks
        self.failure: Optional[BaseException] = None

    def fail(self, exc: BaseException) -> None:
        """Record the first failure and unblock every waiting rank."""
        with self.cond:
            if self.failure is None:
                self.failure = exc
            self.cond.notify_all()
        self.barrier.abort()

    def _wait_for(self, pred: Callable[[], bool], what: str) -> None:
        # Caller must hold self.cond.
        while not pred():
            if self.failure is not None:
                raise TransportError("aborted: failure on another rank")
            if not self.cond.wait(timeout=_RENDEZVOUS_TIMEOUT):
                raise TransportError(f"timed out waiting for {what}")


class SimulatedTransport:
    """Per-rank handle onto a :class:`SimulatedFabric`."""

    def __init__(self, fabric: SimulatedFabric, rank: int):
        self.fabric = fabric
        self.rank = rank
        self.n_ranks = fabric.n_ranks
        self.stats = TransportStats()
        self._ar_seq = 0
        # Completed exchanges per partner.  Both sides of a pair count in
        # lockstep, so the pair (rank, partner, count) names one rendezvous
        # uniquely and a fast rank can never collide with its partner's
        # not-yet-collected previous post.
        self._pair_seq: dict = {}

    # -- point to point ----------------------------------------------------

    def exchange(self, partner: int, send: np.ndarray, recv: np.ndarray,
                 tag: str, collective: bool = False) -> None:
        """Swap buffers with ``partner``; returns once both sides copied.

        Both ranks must present the same ``tag``.  A mismatch means the SPMD
        program desynchronized, and the whole job is failed rather than
        letting it silently mispair buffers.
        """
        if not 0 <= partner < self.n_ranks or partner == self.rank:
            raise TransportError(
                f"rank {self.rank}: invalid exchange partner {partner}")
        fab = self.fabric
        seq = self._pair_seq.get(partner, 0)
        self._pair_seq[partner] = seq + 1
        me_to_them = (self.rank, partner, seq)
        them_to_me = (partner, self.rank, seq)
        with fab.cond:
            fab.posts[me_to_them] = (tag, send)
            fab.cond.notify_all()
            fab._wait_for(lambda: them_to_me in fab.posts,
                          f"post from rank {partner}")
            their_tag, their_buf = fab.posts[them_to_me]
            if their_tag != tag:
                exc = TransportError(
                    f"tag mismatch between ranks {self.rank} and {partner}: "
                    f"{tag!r} vs {their_tag!r}")
                fab.failure = fab.failure or exc
                fab.cond.notify_all()
                raise exc
            np.copyto(recv, their_buf)
            fab.done.add(them_to_me)
            fab.cond.notify_all()
            # The send buffer stays live until the partner copied it.
            fab._wait_for(lambda: me_to_them in fab.done,
                          f"copy ack from rank {partner}")
            del fab.posts[me_to_them]
            fab.done.discard(me_to_them)
        if not collective:
            self.stats.record_exchange(tag, partner, send.nbytes)

    # -- collectives ---------------------------------------------------------

    def allreduce_sum(self, values: np.ndarray) -> np.ndarray:
        """Sum ``values`` across ranks; bit-identical result on every rank."""
        mine = np.array(values, copy=True)
        if self.n_ranks == 1:
            return mine
        recv = np.empty_like(mine)
        seq = self._ar_seq
        self._ar_seq += 1
        for k in range(self.n_ranks.bit_length() - 1):
            partner = self.rank ^ (1 << k)
            self.exchange(partner, mine, recv, f"_ar{seq}.{k}",
                          collective=True)
            mine = mine + recv
        self.stats.allreduces += 1
        return mine

    def gather(self, arr: np.ndarray) -> Optional[list]:
        """Collect one array per rank on rank 0 (None elsewhere)."""
        fab = self.fabric
        fab.slots[self.rank] = np.array(arr, copy=True)
        self.barrier()
        out = list(fab.slots) if self.rank == 0 else None
        self.barrier()
        return out

    def barrier(self) -> None:
        if self.n_ranks == 1:
            return
        try:
            self.fabric.barrier.wait()
        except threading.BrokenBarrierError:
            raise TransportError("aborted: failure on another rank") from None


def run_spmd(log_ranks: int, program: Callable) -> list:
    """Run ``program(transport)`` once per rank; return per-rank results.

    With ``log_ranks == 0`` the program runs inline on the calling thread.
    Otherwise 2**log_ranks threads run in lockstep over a shared fabric.
    The first exception raised by any rank aborts the others and is
    re-raised here.
    """
    n_ranks = 1 << log_ranks
    fabric = SimulatedFabric(n_ranks)
    if n_ranks == 1:
        return [program(SimulatedTransport(fabric, 0))]

    results: list = [None] * n_ranks
    first_exc: list = []
    lock = threading.Lock()

    def worker(rank: int) -> None:
        transport = SimulatedTransport(fabric, rank)
        try:
            results[rank] = program(transport)
        except BaseException as exc:
            with lock:
                first_exc.append((isinstance(exc, TransportError)
                                  and "aborted:" in str(exc), exc))
            fabric.fail(exc)

    threads = [threading.Thread(target=worker, args=(r,), name=f"rank{r}")
               for r in range(n_ranks)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    if first_exc:
        # Prefer the root cause over secondary abort noise.
        for secondary, exc in first_exc:
            if not secondary:
                raise exc
        raise first_exc[0][1]
    return results


class ExternalTransport:
    """mpi4py-backed handle; one OS process per rank under mpirun."""

    def __init__(self):
        try:
            from mpi4py import MPI
        except ImportError as exc:
            raise TransportError(
                "external transport requires mpi4py") from exc
        self._mpi = MPI
        self.comm = MPI.COMM_WORLD
        self.rank = self.comm.Get_rank()
        self.n_ranks = self.comm.Get_size()
        if self.n_ranks & (self.n_ranks - 1):
            raise TransportError(
                f"external transport needs a power-of-two rank count, "
                f"got {self.n_ranks}")
        self.stats = TransportStats()

    @staticmethod
    def _int_tag(tag: str) -> int:
        import zlib
        return zlib.crc32(tag.encode()) & 0x3FFF

    def exchange(self, partner: int, send: np.ndarray, recv: np.ndarray,
                 tag: str, collective: bool = False) -> None:
        if not 0 <= partner < self.n_ranks or partner == self.rank:
            raise TransportError(
                f"rank {self.rank}: invalid exchange partner {partner}")
        t = self._int_tag(tag)
        self.comm.Sendrecv(send, dest=partner, sendtag=t,
                           recvbuf=recv, source=partner, recvtag=t)
        if not collective:
            self.stats.record_exchange(tag, partner, send.nbytes)

    def allreduce_sum(self, values: np.ndarray) -> np.ndarray:
        # Same recursive doubling as the simulated backend so results are
        # bit-identical between the two.
        mine = np.array(values, copy=True)
        if self.n_ranks == 1:
            return mine
        recv = np.empty_like(mine)
        for k in range(self.n_ranks.bit_length() - 1):
            partner = self.rank ^ (1 << k)
            self.exchange(partner, mine, recv, f"_ar.{k}", collective=True)
            mine = mine + recv
        self.stats.allreduces += 1
        return mine

    def gather(self, arr: np.ndarray) -> Optional[list]:
        return self.comm.gather(np.array(arr, copy=True), root=0)

    def barrier(self) -> None:
        self.comm.Barrier()
