"""Kernel backend selection.

Two interchangeable kernel implementations exist:

* ``numba`` -- scalar algorithms jit-compiled with numba (default when numba
  imports cleanly),
* ``numpy`` -- the same algorithms vectorized in pure numpy.

Set ``FAMRISK_BACKEND=numpy`` (or ``numba``) to force one. The selection is
made once, at first use; `get_backend` loads either implementation explicitly
regardless of the environment, which is what the benchmark harness uses to
compare the two.
"""

import importlib
import os

_ENV_VAR = "FAMRISK_BACKEND"
_active = None
_active_name = None


def get_backend(name):
    """Load a kernel backend by name ('numba' or 'numpy')."""
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}; expected 'numba' or 'numpy'")
    return importlib.import_module(f"famrisk._kernels_{name}")


def _select():
    requested = os.environ.get(_ENV_VAR, "").strip().lower()
    if requested in ("numba", "numpy"):
        return requested, get_backend(requested)
    if requested:
        raise ValueError(
            f"{_ENV_VAR}={requested!r} not understood; use 'numba' or 'numpy'")
    try:
        return "numba", get_backend("numba")
    except ImportError:
        return "numpy", get_backend("numpy")


def active():
    """The selected kernel module (cached)."""
    global _active, _active_name
    if _active is None:
        _active_name, _active = _select()
    return _active


def active_name():
    active()
    return _active_name
