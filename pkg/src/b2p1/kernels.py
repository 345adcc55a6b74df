"""Hot-loop backend selection.

The compiled extension is used when importable; setting ``B2P1_PURE_PYTHON=1``
forces the NumPy fallback.  ``BACKEND`` names the active one.
"""
import os

from . import _kernels_py

_py = _kernels_py

if os.environ.get("B2P1_PURE_PYTHON", "") not in ("", "0"):
    _impl = _py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _py

BACKEND = "cython" if _impl is not _py else "python"

spectral_multiply = _impl.spectral_multiply
symbol_solve = _impl.symbol_solve
st_exact_core = _impl.st_exact_core
axpy = _impl.axpy
rk4_combine = _impl.rk4_combine


def backends():
    """Available implementations keyed by name (for tests and benchmarks)."""
    out = {"python": _py}
    try:
        from . import _kernels
        out["cython"] = _kernels
    except ImportError:
        pass
    return out
