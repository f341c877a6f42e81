"""Selects the search kernel at import time.

The compiled ``_ckernel`` is used when it was built; otherwise, or when
the environment variable ``LINTERSECT_PURE_PYTHON`` is set to a nonempty
value, the pure-Python ``_pykernel`` is used.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernel

try:
    from . import _ckernel
except ImportError:  # extension not built
    _ckernel = None

__all__ = ["kernel", "BACKEND", "get_kernel", "available_backends"]


def available_backends() -> list[str]:
    return (["cython"] if _ckernel is not None else []) + ["python"]


def get_kernel(name: str | None = None) -> ModuleType:
    if name is None:
        return kernel
    if name == "python":
        return _pykernel
    if name == "cython":
        if _ckernel is None:
            raise RuntimeError("compiled kernel is not available (build the extension)")
        return _ckernel
    raise ValueError(f"unknown backend {name!r}")


if _ckernel is not None and not os.environ.get("LINTERSECT_PURE_PYTHON"):
    kernel = _ckernel
    BACKEND = "cython"
else:
    kernel = _pykernel
    BACKEND = "python"
