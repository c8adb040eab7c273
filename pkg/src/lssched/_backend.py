"""Kernel backend selection.

The compiled module is used when it imports cleanly, unless the environment
variable ``LSSCHED_PURE_PYTHON`` is set to a non-empty value other than "0".
"""

from __future__ import annotations

import importlib
import os

from . import _kernels_py


def load(name: str | None = None):
    """Return the kernel module for ``name`` ("cython", "python" or None = auto)."""
    if name == "python":
        return _kernels_py
    if name is None and os.environ.get("LSSCHED_PURE_PYTHON", "0") not in ("", "0"):
        return _kernels_py
    try:
        return importlib.import_module("lssched._kernels")
    except ImportError:
        if name == "cython":
            raise
        return _kernels_py


def available() -> list[str]:
    names = ["python"]
    try:
        importlib.import_module("lssched._kernels")
        names.insert(0, "cython")
    except ImportError:
        pass
    return names


kernels = load()
BACKEND = kernels.BACKEND
