"""Gate arithmetic on one rank's amplitude slice.

Two interchangeable implementations share one function surface:

* ``_numba`` -- @njit compiled loops (the default when numba imports).
* ``_numpy`` -- vectorized fallback; also the instrumented "debug build"
  that can count the complex multiplications a kernel issues.

Selection: env var ``QSIM_KERNELS`` = ``numba`` | ``numpy`` at import time,
or :func:`use` at runtime.  Every kernel mutates its slice in place and works
on contiguous complex128 arrays whose length is a power of two.
"""
from __future__ import annotations

import contextlib
import os

from . import _numpy


def _load_numba_impl():
    try:
        from . import _numba

        return _numba
    except ImportError:
        return None


_numba_impl = _load_numba_impl()
_active = None


def use(name: str):
    """Select the kernel backend: 'numba' or 'numpy'."""
    global _active
    if name == "numpy":
        _active = _numpy
    elif name == "numba":
        if _numba_impl is None:
            raise RuntimeError("numba backend requested but numba is not importable")
        _active = _numba_impl
    else:
        raise ValueError(f"unknown kernel backend {name!r} (use 'numba' or 'numpy')")


def get():
    """The active kernel implementation module."""
    return _active


def backend_name() -> str:
    return "numpy" if _active is _numpy else "numba"


def available_backends() -> tuple[str, ...]:
    return ("numpy",) if _numba_impl is None else ("numba", "numpy")


@contextlib.contextmanager
def count_multiplications():
    """Run the numpy debug build with its multiplication counter enabled.

    Yields a dict whose 'mults' entry accumulates the number of complex
    multiplications the executed kernels issued.
    """
    global _active
    prev = _active
    use("numpy")
    _numpy.reset_mult_count()
    _numpy.enable_mult_count(True)
    try:
        yield _numpy.mult_counter
    finally:
        _numpy.enable_mult_count(False)
        _active = prev


_initial = os.environ.get("QSIM_KERNELS", "numba")
if _initial == "numba" and _numba_impl is None:
    _initial = "numpy"
use(_initial)
