"""Runtime selection of the hot-loop backend.

Two interchangeable kernel modules exist: `_kernels` (numba JIT) and
`_kernels_np` (plain numpy/python).  The active one is chosen once from
the ``CAREV_BACKEND`` environment variable (``auto``, ``numba`` or
``numpy``) and can be switched at runtime, which the test suite uses to
compare the two implementations.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

from . import _kernels_np

_VALID = ("auto", "numba", "numpy")
_active = None
_active_name = None


def _load(name: str):
    if name not in _VALID:
        raise ValueError(f"CAREV_BACKEND must be one of {_VALID}, got {name!r}")
    if name in ("auto", "numba"):
        try:
            from . import _kernels

            return _kernels, "numba"
        except ImportError:
            if name == "numba":
                raise
    return _kernels_np, "numpy"


def set_backend(name: str) -> str:
    """Select the kernel backend; returns the name actually loaded."""
    global _active, _active_name
    _active, _active_name = _load(name)
    return _active_name


def kernels():
    """The active kernel module."""
    if _active is None:
        set_backend(os.environ.get("CAREV_BACKEND", "auto").lower())
    return _active


def backend_name() -> str:
    kernels()
    return _active_name


def numpy_kernels():
    """The generic fallback module, independent of the active choice."""
    return _kernels_np


@contextmanager
def use_backend(name: str):
    """Temporarily switch backends (test helper)."""
    global _active, _active_name
    prev = (_active, _active_name)
    try:
        set_backend(name)
        yield _active
    finally:
        _active, _active_name = prev
