"""Hot loops, compiled with numba when available.

Set ``HULLSPAN_BACKEND=numpy`` to force the vectorised numpy/scipy path;
the default is ``numba`` whenever numba imports.  Both backends implement
the same contracts and are cross-checked in the test-suite.
"""

from __future__ import annotations

import os

from . import _numpy

try:
    from . import _numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on the environment
    _numba = None
    HAVE_NUMBA = False

_requested = os.environ.get("HULLSPAN_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"HULLSPAN_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

BACKEND = "numba" if (_requested == "numba" and HAVE_NUMBA) else "numpy"
_impl = _numba if BACKEND == "numba" else _numpy

all_pairs_shortest = _impl.all_pairs_shortest
halving_sweep = _impl.halving_sweep
coplanar_search = _impl.coplanar_search
origin_plane_search = _impl.origin_plane_search


def backends() -> dict:
    """Every importable backend, by name; used by tests and benchmarks."""
    out = {"numpy": _numpy}
    if HAVE_NUMBA:
        out["numba"] = _numba
    return out


__all__ = [
    "BACKEND",
    "HAVE_NUMBA",
    "all_pairs_shortest",
    "backends",
    "coplanar_search",
    "halving_sweep",
    "origin_plane_search",
]
