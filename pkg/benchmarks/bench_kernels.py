"""Compare the jitted kernels against the pure-numpy fallback.

Times one application of each representative kernel over a 2^n slice and
prints a CSV table with the per-backend medians and the speedup.  Run as

    python3 benchmarks/bench_kernels.py --n 22 --reps 5
"""
import argparse
import statistics
import time

import numpy as np

from qsim import kernels


def _slice(n):
    rng = np.random.default_rng(0)
    s = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return (s / np.linalg.norm(s)).astype(np.complex128)


def _unitary(dim):
    rng = np.random.default_rng(1)
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, _ = np.linalg.qr(raw)
    return q.astype(np.complex128)


def _cases(n):
    u2 = _unitary(2)
    u8 = _unitary(8)
    t, c = n // 2, n // 2 + 1
    return [
        ("x_pairs", lambda k, s: k.apply_x_pairs(s, t)),
        ("h_pairs", lambda k, s: k.apply_h_pairs(s, t)),
        ("general_1q", lambda k, s: k.apply_1q_pairs(s, u2, t)),
        ("diag", lambda k, s: k.apply_diag(s, 1.0 + 0j, 1j, t)),
        ("cx_pairs", lambda k, s: k.apply_cx_pairs(s, c, t)),
        ("controlled_1q", lambda k, s: k.apply_controlled_pairs(s, u2, c, t)),
        ("combine_exchange",
         lambda k, s: k.combine_after_exchange(s, s.copy(), u2, 0)),
        ("dense_3q", lambda k, s: k.apply_dense_local(
            s, u8, np.array([0, t, n - 1], dtype=np.int64))),
    ]


def _median_time(apply_fn, k, s, reps):
    times = []
    for _ in range(reps + 1):       # first run is warm-up (jit compile)
        t0 = time.perf_counter()
        apply_fn(k, s)
        times.append(time.perf_counter() - t0)
    return statistics.median(times[1:])


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=22,
                        help="log2 slice length (default 22)")
    parser.add_argument("--reps", type=int, default=5,
                        help="timed repetitions per kernel (default 5)")
    args = parser.parse_args()

    available = kernels.available_backends()
    if "numba" not in available:
        raise SystemExit("numba backend unavailable; nothing to compare")

    state = _slice(args.n)
    print("kernel,n,numpy_seconds,numba_seconds,speedup")
    for name, apply_fn in _cases(args.n):
        medians = {}
        for backend in ("numpy", "numba"):
            kernels.use(backend)
            medians[backend] = _median_time(apply_fn, kernels.get(),
                                            state.copy(), args.reps)
        ratio = medians["numpy"] / medians["numba"]
        print(f"{name},{args.n},{medians['numpy']:.6e},"
              f"{medians['numba']:.6e},{ratio:.2f}")


if __name__ == "__main__":
    main()
