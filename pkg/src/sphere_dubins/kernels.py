"""Backend selection for the multi-start Newton kernel.

The compiled extension is used when it imports; otherwise the numpy
fallback. Setting ``SPHERE_DUBINS_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _newton_py

_compiled = None
if not os.environ.get("SPHERE_DUBINS_PURE_PYTHON"):
    try:
        from . import _newton as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"


def get_newton(backend: str = "auto"):
    """Return a ``newton_multistart`` implementation.

    Args:
        backend: ``"auto"``, ``"compiled"`` or ``"python"``.
    """
    if backend == "python":
        return _newton_py.newton_multistart
    if backend == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernel sphere_dubins._newton is not built")
        return _compiled.newton_multistart
    if backend != "auto":
        raise ValueError(f"unknown backend {backend!r}")
    return (_compiled or _newton_py).newton_multistart


def compiled_available() -> bool:
    return _compiled is not None
