"""Backend selection for the hot kernels.

``CIPHERBENCH_BACKEND=numpy`` forces the vectorised numpy path even when
numba is importable; ``numba`` (the default) falls back to numpy with a
warning if numba is missing.
"""
import os
import warnings

ENV_VAR = "CIPHERBENCH_BACKEND"

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False


def _select():
    requested = os.environ.get(ENV_VAR, "numba").strip().lower()
    if requested not in ("numba", "numpy"):
        raise ValueError(f"{ENV_VAR} must be 'numba' or 'numpy', got {requested!r}")
    if requested == "numba" and not HAS_NUMBA:
        warnings.warn("numba not installed; using the numpy backend", RuntimeWarning)
        return "numpy"
    return requested


BACKEND = _select()


def njit(*args, **kwargs):
    """``numba.njit`` with caching on, or a no-op decorator without numba."""
    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)
    if HAS_NUMBA:
        return numba.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda fn: fn
