"""Backend selection for the closed-form grid kernels.

The compiled extension is used when it was built; otherwise the pure-numpy
twin takes over.  Selection happens once, at import.
"""
from __future__ import annotations

from . import _kernels_py

try:
    from . import _kernels_cy as _active
except ImportError:
    _active = _kernels_py

BACKEND = _active.BACKEND_NAME
DEGENERATE_WEIGHT = _kernels_py.DEGENERATE_WEIGHT

pair_unitary_elements = _active.pair_unitary_elements
bsm_closed_form = _active.bsm_closed_form
qed_closed_form = _active.qed_closed_form


def get_backend(name: str):
    """Return a kernel backend module by name ("python" or "compiled")."""
    if name == "python":
        return _kernels_py
    if name == "compiled":
        from . import _kernels_cy

        return _kernels_cy
    raise ValueError(f"unknown kernel backend {name!r}")
