"""Kernel backend selection.

Hot kernels are written once in a numba-compatible subset of numpy.  They are
compiled with ``numba.njit`` when numba is importable, unless the environment
variable ``CASIMIR_TORQUE_BACKEND`` is set to ``numpy``, in which case the same
functions run as plain Python on numpy arrays.
"""
import os

_REQUESTED = os.environ.get("CASIMIR_TORQUE_BACKEND", "numba").strip().lower()
if _REQUESTED not in ("numba", "numpy"):
    raise ImportError(
        f"CASIMIR_TORQUE_BACKEND must be 'numba' or 'numpy', got {_REQUESTED!r}"
    )

BACKEND = "numpy"
if _REQUESTED == "numba":
    try:
        import numba

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is an optional extra
        pass


def jit(func):
    """Compile ``func`` with numba when the numba backend is active."""
    if BACKEND == "numba":
        return numba.njit(cache=True, error_model="numpy")(func)
    return func
